from __future__ import annotations

from pathlib import Path

import pytest

from electwin.kg.build import seed_store

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"

PROMPT_1 = (
    "Enumerate in one short sentence the electricity consumption datasets "
    "collected in the UK?"
)
PROMPT_2 = (
    "Enumerate in one short sentence the available electricity datasets located "
    "in countries with a GDP per capita higher than $50000."
)
PROMPT_3 = (
    "Enumerate in one short sentence the available electricity datasets that are "
    "located in Europe and had at the time of recording an electricity price "
    "higher than 0.25€/kWh."
)
PROMPT_3E = (
    "Enumerate in one short sentence the available electricity datasets that are "
    "not located in Europe and are located in a place with a high education level."
)
PROMPT_4 = "Can you explain the load profile of house 1 in the REFIT dataset?"

GROUNDED_P1_ANSWER = (
    "The electricity consumption datasets collected in the UK include "
    "IDEAL, REFIT, and UKDALE."
)


@pytest.fixture(scope="session")
def seed():
    """The packaged seed knowledge graph; shared because it is immutable."""
    return seed_store()


@pytest.fixture(scope="session")
def fixture_queries() -> dict[str, str]:
    queries = {}
    for path in sorted(FIXTURES.glob("queries/*.rq")):
        queries[path.stem] = path.read_text(encoding="utf-8")
    assert queries, "fixture queries missing"
    return queries
