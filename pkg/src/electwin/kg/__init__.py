from . import schema
from .build import build_graph, find_house, get_load_profile, seed_store
from .fixture import (
    DatasetSpec,
    FixtureBundle,
    FixtureSpec,
    default_spec,
    generate_seed_fixture,
    load_spec,
    read_csv_bundle,
    write_csv_bundle,
)
from .records import (
    ApplianceRecord,
    DanglingReference,
    DuplicatePrefix,
    HouseholdRecord,
    InvariantViolation,
    LoadProfile,
    LocationRecord,
    MalformedProfile,
    NotFound,
)

__all__ = [
    "ApplianceRecord",
    "DanglingReference",
    "DatasetSpec",
    "DuplicatePrefix",
    "FixtureBundle",
    "FixtureSpec",
    "HouseholdRecord",
    "InvariantViolation",
    "LoadProfile",
    "LocationRecord",
    "MalformedProfile",
    "NotFound",
    "build_graph",
    "default_spec",
    "find_house",
    "generate_seed_fixture",
    "get_load_profile",
    "load_spec",
    "read_csv_bundle",
    "schema",
    "seed_store",
    "write_csv_bundle",
]
