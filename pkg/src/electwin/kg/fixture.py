"""Fixture spec loading, record generation, and the CSV bundle format.

The packaged default spec (data/seed_fixture.yaml) yields a miniature
stand-in for the full published knowledge graph: a handful of datasets
with one or two households each, enriched locations, appliances, and
24-hour load profiles. Generation is deterministic: equal specs give
equal records, IRIs, and values.

CSV bundle layout (one directory):
  households.csv  name, measurementStart, measurementEnd, occupancy,
                  floorArea, dwellingType, locationRef
  appliances.csv  id, label, avgDailyConsumption, avgOnEventConsumption,
                  householdRef
  locations.csv   id, latitude, longitude, city, country, continent,
                  gdpPerCapita, averageWage, populationDensity,
                  electricityPrice, carbonIntensity, educationLevel
  profiles.csv    householdRef, h0 .. h23
"""

from __future__ import annotations

import csv
import importlib.resources
from dataclasses import dataclass
from datetime import date
from decimal import Decimal
from pathlib import Path

import yaml

from .records import (
    EDUCATION_LEVELS,
    ApplianceRecord,
    DuplicatePrefix,
    HouseholdRecord,
    InvariantViolation,
    LoadProfile,
    LocationRecord,
)

# hour-of-day demand shapes in kW, scaled per household below
PROFILE_SHAPES: dict[str, tuple[str, ...]] = {
    # high overnight use peaking at hour 2, deep drop through 5-10
    "morningPeak": (
        "0.82", "0.95", "1.08", "0.99", "0.87", "0.74", "0.42", "0.30",
        "0.24", "0.21", "0.26", "0.30", "0.34", "0.38", "0.41", "0.45",
        "0.52", "0.61", "0.68", "0.64", "0.55", "0.47", "0.40", "0.36",
    ),
    # quiet night, dinner-time maximum at hour 19
    "eveningPeak": (
        "0.20", "0.18", "0.17", "0.17", "0.18", "0.22", "0.35", "0.52",
        "0.48", "0.40", "0.36", "0.38", "0.42", "0.40", "0.38", "0.45",
        "0.60", "0.78", "0.92", "0.98", "0.85", "0.62", "0.40", "0.27",
    ),
}

APPLIANCE_CATALOG = (
    ("fridge", Decimal("0.80"), Decimal("0.02")),
    ("washing machine", Decimal("0.50"), Decimal("0.70")),
    ("kettle", Decimal("0.15"), Decimal("0.05")),
)


@dataclass(frozen=True)
class DatasetSpec:
    prefix: str
    households: int
    city: str
    country: str
    continent: str
    latitude: Decimal
    longitude: Decimal
    gdp_per_capita: Decimal
    average_wage: Decimal
    population_density: Decimal
    electricity_price: Decimal
    carbon_intensity: Decimal
    education_level: str
    measurement_start: date
    measurement_end: date
    profile_shape: str

    def __post_init__(self):
        if not self.prefix or "_" in self.prefix:
            raise InvariantViolation("prefix", f"bad dataset prefix {self.prefix!r}")
        if self.households < 0:
            raise InvariantViolation("households", "negative household count")
        if self.education_level not in EDUCATION_LEVELS:
            raise InvariantViolation("educationLevel", f"unknown {self.education_level!r}")
        if self.profile_shape not in PROFILE_SHAPES:
            raise InvariantViolation("profileShape", f"unknown {self.profile_shape!r}")


@dataclass(frozen=True)
class FixtureSpec:
    datasets: tuple[DatasetSpec, ...]

    def __post_init__(self):
        seen = set()
        for d in self.datasets:
            if d.prefix in seen:
                raise DuplicatePrefix(d.prefix)
            seen.add(d.prefix)


@dataclass(frozen=True)
class FixtureBundle:
    households: tuple[HouseholdRecord, ...]
    appliances: tuple[ApplianceRecord, ...]
    locations: tuple[LocationRecord, ...]
    profiles: tuple[LoadProfile, ...]


def _as_date(value) -> date:
    if isinstance(value, date):
        return value
    return date.fromisoformat(str(value))


def spec_from_mapping(doc: dict) -> FixtureSpec:
    datasets = []
    for row in doc.get("datasets") or []:
        datasets.append(
            DatasetSpec(
                prefix=str(row["prefix"]),
                households=int(row["households"]),
                city=str(row["city"]),
                country=str(row["country"]),
                continent=str(row["continent"]),
                latitude=Decimal(str(row["latitude"])),
                longitude=Decimal(str(row["longitude"])),
                gdp_per_capita=Decimal(str(row["gdpPerCapita"])),
                average_wage=Decimal(str(row["averageWage"])),
                population_density=Decimal(str(row["populationDensity"])),
                electricity_price=Decimal(str(row["electricityPrice"])),
                carbon_intensity=Decimal(str(row["carbonIntensity"])),
                education_level=str(row["educationLevel"]),
                measurement_start=_as_date(row["measurementStart"]),
                measurement_end=_as_date(row["measurementEnd"]),
                profile_shape=str(row["profileShape"]),
            )
        )
    return FixtureSpec(datasets=tuple(datasets))


def load_spec(path: str | Path) -> FixtureSpec:
    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh) or {}
    return spec_from_mapping(doc)


def default_spec() -> FixtureSpec:
    ref = importlib.resources.files("electwin").joinpath("data/seed_fixture.yaml")
    doc = yaml.safe_load(ref.read_text(encoding="utf-8"))
    return spec_from_mapping(doc)


def _scaled_profile(shape: str, index: int) -> tuple[Decimal, ...]:
    factor = Decimal(1) + Decimal("0.06") * (index - 1)
    return tuple(
        (Decimal(v) * factor).quantize(Decimal("0.001")) for v in PROFILE_SHAPES[shape]
    )


def generate_seed_fixture(spec: FixtureSpec) -> FixtureBundle:
    households: list[HouseholdRecord] = []
    appliances: list[ApplianceRecord] = []
    locations: list[LocationRecord] = []
    profiles: list[LoadProfile] = []

    for ds in spec.datasets:
        location_id = f"loc-{ds.prefix.lower()}"
        locations.append(
            LocationRecord(
                id=location_id,
                latitude=ds.latitude,
                longitude=ds.longitude,
                city=ds.city,
                country=ds.country,
                continent=ds.continent,
                gdp_per_capita=ds.gdp_per_capita,
                average_wage=ds.average_wage,
                population_density=ds.population_density,
                electricity_price=ds.electricity_price,
                carbon_intensity=ds.carbon_intensity,
                education_level=ds.education_level,
            )
        )
        for index in range(1, ds.households + 1):
            name = f"{ds.prefix}_{index}"
            house_appliances = []
            for slug_base, daily, event in APPLIANCE_CATALOG:
                appliance_id = f"{name}/{slug_base.replace(' ', '-')}"
                house_appliances.append(appliance_id)
                appliances.append(
                    ApplianceRecord(
                        id=appliance_id,
                        label=slug_base,
                        avg_daily_consumption=daily + Decimal("0.01") * index,
                        avg_on_event_consumption=event,
                        household_ref=name,
                    )
                )
            households.append(
                HouseholdRecord(
                    name=name,
                    measurement_start=ds.measurement_start,
                    measurement_end=ds.measurement_end,
                    occupancy=1 + (index % 3),
                    floor_area=Decimal(70) + Decimal(15) * (index - 1),
                    dwelling_type="house" if index % 2 else "apartment",
                    location_ref=location_id,
                    appliance_refs=tuple(house_appliances),
                )
            )
            profiles.append(
                LoadProfile(
                    household_ref=name,
                    hourly_averages=_scaled_profile(ds.profile_shape, index),
                )
            )
    return FixtureBundle(
        households=tuple(households),
        appliances=tuple(appliances),
        locations=tuple(locations),
        profiles=tuple(profiles),
    )


# ---------------------------------------------------------------------------
# CSV bundle round-trip

_HOUSEHOLD_HEADER = [
    "name", "measurementStart", "measurementEnd", "occupancy",
    "floorArea", "dwellingType", "locationRef",
]
_APPLIANCE_HEADER = [
    "id", "label", "avgDailyConsumption", "avgOnEventConsumption", "householdRef",
]
_LOCATION_HEADER = [
    "id", "latitude", "longitude", "city", "country", "continent",
    "gdpPerCapita", "averageWage", "populationDensity",
    "electricityPrice", "carbonIntensity", "educationLevel",
]
_PROFILE_HEADER = ["householdRef"] + [f"h{h}" for h in range(24)]


def write_csv_bundle(bundle: FixtureBundle, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    def dump(filename: str, header: list[str], rows) -> None:
        with open(directory / filename, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)

    dump(
        "households.csv",
        _HOUSEHOLD_HEADER,
        (
            [
                h.name,
                h.measurement_start.isoformat(),
                h.measurement_end.isoformat(),
                h.occupancy,
                h.floor_area,
                h.dwelling_type,
                h.location_ref,
            ]
            for h in bundle.households
        ),
    )
    dump(
        "appliances.csv",
        _APPLIANCE_HEADER,
        (
            [a.id, a.label, a.avg_daily_consumption, a.avg_on_event_consumption, a.household_ref]
            for a in bundle.appliances
        ),
    )
    dump(
        "locations.csv",
        _LOCATION_HEADER,
        (
            [
                loc.id, loc.latitude, loc.longitude, loc.city, loc.country,
                loc.continent, loc.gdp_per_capita, loc.average_wage,
                loc.population_density, loc.electricity_price,
                loc.carbon_intensity, loc.education_level,
            ]
            for loc in bundle.locations
        ),
    )
    dump(
        "profiles.csv",
        _PROFILE_HEADER,
        ([p.household_ref] + list(p.hourly_averages) for p in bundle.profiles),
    )


def _read_rows(path: Path, expected_header: list[str]) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, [])
        if header != expected_header:
            raise InvariantViolation(path.name, f"header mismatch: {header!r}")
        return [dict(zip(header, row)) for row in reader]


def read_csv_bundle(directory: str | Path) -> FixtureBundle:
    directory = Path(directory)
    appliances = tuple(
        ApplianceRecord(
            id=r["id"],
            label=r["label"],
            avg_daily_consumption=Decimal(r["avgDailyConsumption"]),
            avg_on_event_consumption=Decimal(r["avgOnEventConsumption"]),
            household_ref=r["householdRef"],
        )
        for r in _read_rows(directory / "appliances.csv", _APPLIANCE_HEADER)
    )
    refs_by_household: dict[str, list[str]] = {}
    for a in appliances:
        refs_by_household.setdefault(a.household_ref, []).append(a.id)
    households = tuple(
        HouseholdRecord(
            name=r["name"],
            measurement_start=date.fromisoformat(r["measurementStart"]),
            measurement_end=date.fromisoformat(r["measurementEnd"]),
            occupancy=int(r["occupancy"]),
            floor_area=Decimal(r["floorArea"]),
            dwelling_type=r["dwellingType"],
            location_ref=r["locationRef"],
            appliance_refs=tuple(refs_by_household.get(r["name"], ())),
        )
        for r in _read_rows(directory / "households.csv", _HOUSEHOLD_HEADER)
    )
    locations = tuple(
        LocationRecord(
            id=r["id"],
            latitude=Decimal(r["latitude"]),
            longitude=Decimal(r["longitude"]),
            city=r["city"],
            country=r["country"],
            continent=r["continent"],
            gdp_per_capita=Decimal(r["gdpPerCapita"]),
            average_wage=Decimal(r["averageWage"]),
            population_density=Decimal(r["populationDensity"]),
            electricity_price=Decimal(r["electricityPrice"]),
            carbon_intensity=Decimal(r["carbonIntensity"]),
            education_level=r["educationLevel"],
        )
        for r in _read_rows(directory / "locations.csv", _LOCATION_HEADER)
    )
    profiles = tuple(
        LoadProfile(
            household_ref=r["householdRef"],
            hourly_averages=tuple(Decimal(r[f"h{h}"]) for h in range(24)),
        )
        for r in _read_rows(directory / "profiles.csv", _PROFILE_HEADER)
    )
    return FixtureBundle(households, appliances, locations, profiles)
