"""Build the knowledge graph from fixture records, and read it back.

Emission template per record type (see docs/schema.md for the predicate
reference):

  household   -> schema:House node: name, containedInPlace city,
                 measurement window, occupancy, floor area, dwelling
                 type, plus 24 hourlyLoad_{h} values from its profile
  appliance   -> saref:Device node: name, consumption figures, link to
                 its household
  location    -> schema:City node (coordinates, density) contained in a
                 schema:Country node (name, continent, economic and
                 education enrichment)

Country nodes are shared across locations; conflicting enrichment for
the same country is rejected rather than silently merged.
"""

from __future__ import annotations

from decimal import Decimal

from ..rdf.store import Store
from ..rdf.terms import XSD_DATE, XSD_DECIMAL, XSD_INTEGER, Iri, Literal, Triple
from . import schema as kg
from .records import (
    ApplianceRecord,
    DanglingReference,
    HouseholdRecord,
    InvariantViolation,
    LoadProfile,
    LocationRecord,
    MalformedProfile,
    NotFound,
)


def _decimal_literal(value) -> Literal:
    return Literal(format(Decimal(str(value)), "f"), XSD_DECIMAL)


def _int_literal(value: int) -> Literal:
    return Literal(str(int(value)), XSD_INTEGER)


def _date_literal(value) -> Literal:
    return Literal(value.isoformat(), XSD_DATE)


def build_graph(
    households,
    appliances,
    locations,
    profiles,
) -> Store:
    households = list(households)
    appliances = list(appliances)
    locations = list(locations)
    profiles = list(profiles)

    locations_by_id: dict[str, LocationRecord] = {}
    for loc in locations:
        if loc.id in locations_by_id:
            raise InvariantViolation("location.id", f"duplicate {loc.id!r}")
        locations_by_id[loc.id] = loc
    houses_by_name: dict[str, HouseholdRecord] = {}
    for h in households:
        if h.name in houses_by_name:
            raise InvariantViolation("household.name", f"duplicate {h.name!r}")
        houses_by_name[h.name] = h
    appliance_ids = set()
    for a in appliances:
        if a.id in appliance_ids:
            raise InvariantViolation("appliance.id", f"duplicate {a.id!r}")
        appliance_ids.add(a.id)

    for h in households:
        if h.location_ref not in locations_by_id:
            raise DanglingReference(h.location_ref)
        for ref in h.appliance_refs:
            if ref not in appliance_ids:
                raise DanglingReference(ref)
    for a in appliances:
        if a.household_ref not in houses_by_name:
            raise DanglingReference(a.household_ref)
    for p in profiles:
        if p.household_ref not in houses_by_name:
            raise DanglingReference(p.household_ref)

    store = Store()

    def emit(s, p, o) -> None:
        store.insert(Triple(s, p, o))

    # one country node per country name; enrichment must agree
    country_fields = {}
    city_fields = {}
    for loc in locations:
        country_key = (
            loc.country,
            loc.continent,
            Decimal(str(loc.gdp_per_capita)),
            Decimal(str(loc.average_wage)),
            Decimal(str(loc.electricity_price)),
            Decimal(str(loc.carbon_intensity)),
            loc.education_level,
        )
        prior = country_fields.setdefault(loc.country, country_key)
        if prior != country_key:
            raise InvariantViolation(
                "country", f"conflicting enrichment for {loc.country!r}"
            )
        city_key = (
            loc.city,
            loc.country,
            Decimal(str(loc.latitude)),
            Decimal(str(loc.longitude)),
            Decimal(str(loc.population_density)),
        )
        prior = city_fields.setdefault(loc.city, city_key)
        if prior != city_key:
            raise InvariantViolation("city", f"conflicting fields for {loc.city!r}")

    for loc in locations:
        city = kg.city_iri(kg.slugify(loc.city))
        country = kg.country_iri(kg.slugify(loc.country))
        emit(city, kg.A, kg.CITY)
        emit(city, kg.NAME, Literal(loc.city))
        emit(city, kg.CONTAINED_IN_PLACE, country)
        emit(city, kg.LATITUDE, _decimal_literal(loc.latitude))
        emit(city, kg.LONGITUDE, _decimal_literal(loc.longitude))
        emit(city, kg.POPULATION_DENSITY, _decimal_literal(loc.population_density))
        emit(country, kg.A, kg.COUNTRY)
        emit(country, kg.NAME, Literal(loc.country))
        emit(country, kg.CONTINENT, Literal(loc.continent))
        emit(country, kg.GDP_PER_CAPITA, _decimal_literal(loc.gdp_per_capita))
        emit(country, kg.AVERAGE_WAGE, _decimal_literal(loc.average_wage))
        emit(country, kg.ELECTRICITY_PRICE, _decimal_literal(loc.electricity_price))
        emit(country, kg.CARBON_INTENSITY, _decimal_literal(loc.carbon_intensity))
        emit(country, kg.EDUCATION_LEVEL, Literal(loc.education_level))

    for h in households:
        node = kg.house_iri(h.name)
        loc = locations_by_id[h.location_ref]
        emit(node, kg.A, kg.HOUSE)
        emit(node, kg.NAME, Literal(h.name))
        emit(node, kg.CONTAINED_IN_PLACE, kg.city_iri(kg.slugify(loc.city)))
        emit(node, kg.MEASUREMENT_START, _date_literal(h.measurement_start))
        emit(node, kg.MEASUREMENT_END, _date_literal(h.measurement_end))
        emit(node, kg.OCCUPANCY, _int_literal(h.occupancy))
        emit(node, kg.FLOOR_AREA, _decimal_literal(h.floor_area))
        emit(node, kg.DWELLING_TYPE, Literal(h.dwelling_type))

    for a in appliances:
        node = kg.appliance_iri(a.household_ref, kg.slugify(a.label))
        emit(node, kg.A, kg.DEVICE)
        emit(node, kg.NAME, Literal(a.label))
        emit(node, kg.BELONGS_TO_HOUSEHOLD, kg.house_iri(a.household_ref))
        emit(node, kg.AVG_DAILY_CONSUMPTION, _decimal_literal(a.avg_daily_consumption))
        emit(node, kg.AVG_ON_EVENT_CONSUMPTION, _decimal_literal(a.avg_on_event_consumption))

    for p in profiles:
        node = kg.house_iri(p.household_ref)
        for hour, value in enumerate(p.hourly_averages):
            emit(node, kg.HOURLY_LOAD[hour], _decimal_literal(value))

    return store


def find_house(store: Store, household_name: str) -> Iri:
    for subject in store.subjects(kg.NAME, Literal(household_name)):
        if isinstance(subject, Iri) and store.match(subject, kg.A, kg.HOUSE):
            return subject
    raise NotFound(household_name)


def get_load_profile(store: Store, household_name: str) -> LoadProfile:
    """Reconstruct the 24 hourly values for one household, hour order 0-23."""
    node = find_house(store, household_name)
    values = []
    for hour in range(24):
        matches = store.match(node, kg.HOURLY_LOAD[hour], None)
        if len(matches) != 1:
            raise MalformedProfile(
                f"{household_name}: hour {hour} has {len(matches)} values, expected 1"
            )
        obj = matches[0].object
        if not isinstance(obj, Literal):
            raise MalformedProfile(f"{household_name}: hour {hour} is not a literal")
        values.append(Decimal(obj.lexical))
    return LoadProfile(household_ref=household_name, hourly_averages=tuple(values))


def seed_store(spec=None) -> Store:
    """Build the default seed knowledge graph in one call."""
    from .fixture import default_spec, generate_seed_fixture

    bundle = generate_seed_fixture(spec if spec is not None else default_spec())
    return build_graph(bundle.households, bundle.appliances, bundle.locations, bundle.profiles)
