"""Vocabulary of the household-electricity knowledge graph.

Class and predicate IRIs live in four namespaces: schema.org for the
core classes and naming, SAREF for appliances, a project ontology
namespace (voc:) for measurement and enrichment properties, and the
standard rdf: namespace. The full predicate-by-predicate reference is
docs/schema.md.
"""

from __future__ import annotations

from ..rdf.terms import RDF_TYPE, Iri

VOC_NS = "https://elkg.ijs.si/ontology/"
SAREF_NS = "https://saref.etsi.org/core/"
SCHEMA_NS = "https://schema.org/"
RESOURCE_NS = "https://elkg.ijs.si/resource/"

PREFIXES = {
    "voc": VOC_NS,
    "saref": SAREF_NS,
    "schema": SCHEMA_NS,
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}

A = Iri(RDF_TYPE)

# classes
HOUSE = Iri(SCHEMA_NS + "House")
CITY = Iri(SCHEMA_NS + "City")
COUNTRY = Iri(SCHEMA_NS + "Country")
DEVICE = Iri(SAREF_NS + "Device")

# naming and containment
NAME = Iri(SCHEMA_NS + "name")
CONTAINED_IN_PLACE = Iri(SCHEMA_NS + "containedInPlace")

# household measurement properties
MEASUREMENT_START = Iri(VOC_NS + "measurementStart")
MEASUREMENT_END = Iri(VOC_NS + "measurementEnd")
OCCUPANCY = Iri(VOC_NS + "occupancy")
FLOOR_AREA = Iri(VOC_NS + "floorArea")
DWELLING_TYPE = Iri(VOC_NS + "dwellingType")

# appliance properties
BELONGS_TO_HOUSEHOLD = Iri(VOC_NS + "belongsToHousehold")
AVG_DAILY_CONSUMPTION = Iri(VOC_NS + "averageDailyConsumption")
AVG_ON_EVENT_CONSUMPTION = Iri(VOC_NS + "averageOnEventConsumption")

# city enrichment
LATITUDE = Iri(VOC_NS + "latitude")
LONGITUDE = Iri(VOC_NS + "longitude")
POPULATION_DENSITY = Iri(VOC_NS + "populationDensity")

# country enrichment
CONTINENT = Iri(VOC_NS + "continent")
GDP_PER_CAPITA = Iri(VOC_NS + "gdpPerCapita")
AVERAGE_WAGE = Iri(VOC_NS + "averageWage")
ELECTRICITY_PRICE = Iri(VOC_NS + "electricityPrice")
CARBON_INTENSITY = Iri(VOC_NS + "carbonIntensity")
EDUCATION_LEVEL = Iri(VOC_NS + "educationLevel")

# load profile: one predicate per hour of day
HOURLY_LOAD = tuple(Iri(f"{VOC_NS}hourlyLoad_{hour}") for hour in range(24))


def house_iri(name: str) -> Iri:
    return Iri(RESOURCE_NS + name)


def city_iri(slug: str) -> Iri:
    return Iri(RESOURCE_NS + "city/" + slug)


def country_iri(slug: str) -> Iri:
    return Iri(RESOURCE_NS + "country/" + slug)


def appliance_iri(house_name: str, slug: str) -> Iri:
    return Iri(RESOURCE_NS + "appliance/" + house_name + "/" + slug)


def slugify(label: str) -> str:
    out = []
    for c in label.lower():
        if c.isalnum():
            out.append(c)
        elif out and out[-1] != "-":
            out.append("-")
    return "".join(out).strip("-")


# every predicate the builder may emit; the generated-query guard
# rejects queries touching anything else
KNOWN_PREDICATES = frozenset(
    [
        A,
        NAME,
        CONTAINED_IN_PLACE,
        MEASUREMENT_START,
        MEASUREMENT_END,
        OCCUPANCY,
        FLOOR_AREA,
        DWELLING_TYPE,
        BELONGS_TO_HOUSEHOLD,
        AVG_DAILY_CONSUMPTION,
        AVG_ON_EVENT_CONSUMPTION,
        LATITUDE,
        LONGITUDE,
        POPULATION_DENSITY,
        CONTINENT,
        GDP_PER_CAPITA,
        AVERAGE_WAGE,
        ELECTRICITY_PRICE,
        CARBON_INTENSITY,
        EDUCATION_LEVEL,
    ]
    + list(HOURLY_LOAD)
)
