"""Tabular record types the graph is built from, with their invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal


class InvariantViolation(ValueError):
    def __init__(self, field_name: str, detail: str):
        self.field = field_name
        super().__init__(f"{field_name}: {detail}")


class DanglingReference(ValueError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"unresolved reference {record_id!r}")


class DuplicatePrefix(ValueError):
    def __init__(self, prefix: str):
        self.prefix = prefix
        super().__init__(f"dataset prefix {prefix!r} declared twice")


class NotFound(LookupError):
    pass


class MalformedProfile(ValueError):
    pass


EDUCATION_LEVELS = ("low", "medium", "high")
DWELLING_TYPES = ("house", "apartment")

Number = Decimal | int | float


def _require_finite(name: str, value: Number) -> None:
    if isinstance(value, float) and not math.isfinite(value):
        raise InvariantViolation(name, f"must be finite, got {value!r}")
    if isinstance(value, Decimal) and not value.is_finite():
        raise InvariantViolation(name, f"must be finite, got {value!r}")


def _require_positive(name: str, value: Number) -> None:
    _require_finite(name, value)
    if value <= 0:
        raise InvariantViolation(name, f"must be positive, got {value!r}")


@dataclass(frozen=True)
class HouseholdRecord:
    name: str  # "{DATASET}_{index}"
    measurement_start: date
    measurement_end: date
    occupancy: int
    floor_area: Number  # m^2
    dwelling_type: str
    location_ref: str
    appliance_refs: tuple[str, ...] = ()

    def __post_init__(self):
        if self.name.count("_") != 1:
            raise InvariantViolation("name", f"needs exactly one underscore, got {self.name!r}")
        prefix, _, index = self.name.partition("_")
        if not prefix or not index:
            raise InvariantViolation("name", f"empty prefix or index in {self.name!r}")
        if self.measurement_start > self.measurement_end:
            raise InvariantViolation("measurementStart", "starts after measurementEnd")
        if self.occupancy < 1:
            raise InvariantViolation("occupancy", f"must be >= 1, got {self.occupancy}")
        _require_positive("floorArea", self.floor_area)
        if self.dwelling_type not in DWELLING_TYPES:
            raise InvariantViolation("dwellingType", f"unknown {self.dwelling_type!r}")

    @property
    def dataset_prefix(self) -> str:
        return self.name.partition("_")[0]


@dataclass(frozen=True)
class ApplianceRecord:
    id: str
    label: str
    avg_daily_consumption: Number  # kWh/day
    avg_on_event_consumption: Number  # kWh/event
    household_ref: str

    def __post_init__(self):
        for name, value in (
            ("avgDailyConsumption", self.avg_daily_consumption),
            ("avgOnEventConsumption", self.avg_on_event_consumption),
        ):
            _require_finite(name, value)
            if value < 0:
                raise InvariantViolation(name, f"must be >= 0, got {value!r}")


@dataclass(frozen=True)
class LocationRecord:
    id: str
    latitude: Number
    longitude: Number
    city: str
    country: str
    continent: str
    gdp_per_capita: Number  # USD
    average_wage: Number  # USD/year
    population_density: Number  # persons/km^2
    electricity_price: Number  # EUR/kWh
    carbon_intensity: Number  # gCO2/kWh
    education_level: str

    def __post_init__(self):
        if not -90 <= self.latitude <= 90:
            raise InvariantViolation("latitude", f"outside [-90, 90]: {self.latitude!r}")
        if not -180 <= self.longitude <= 180:
            raise InvariantViolation("longitude", f"outside [-180, 180]: {self.longitude!r}")
        for name, value in (
            ("gdpPerCapita", self.gdp_per_capita),
            ("averageWage", self.average_wage),
            ("populationDensity", self.population_density),
            ("electricityPrice", self.electricity_price),
            ("carbonIntensity", self.carbon_intensity),
        ):
            _require_positive(name, value)
        if self.education_level not in EDUCATION_LEVELS:
            raise InvariantViolation("educationLevel", f"unknown {self.education_level!r}")


@dataclass(frozen=True)
class LoadProfile:
    household_ref: str
    hourly_averages: tuple[Number, ...]  # kW, hour 0 through 23

    def __post_init__(self):
        if len(self.hourly_averages) != 24:
            raise MalformedProfile(
                f"{self.household_ref}: expected 24 hourly values, got {len(self.hourly_averages)}"
            )
        for hour, value in enumerate(self.hourly_averages):
            _require_finite(f"hour {hour}", value)
            if value < 0:
                raise MalformedProfile(f"{self.household_ref}: hour {hour} is negative")

    def peak_hour(self) -> int:
        return max(range(24), key=lambda h: self.hourly_averages[h])
