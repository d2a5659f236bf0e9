from decimal import Decimal

import pytest

from electwin.llm import AnswerRecord
from electwin.sparql.eval import evaluate
from electwin.sparql.parser import parse_query
from electwin.transform import (
    SCHEMA_HINT,
    GeneratedQueryRejected,
    NoAmountFound,
    extract_money,
    instantiate,
    llm_transform,
    load_catalog,
    transform,
)

from conftest import PROMPT_1, PROMPT_2, PROMPT_3, PROMPT_3E, PROMPT_4


def test_country_question(seed):
    out = transform(PROMPT_1)
    assert out.matched
    assert out.intent_id == "DatasetsByCountry"
    assert out.slots == {"country": "United Kingdom"}
    rows = evaluate(seed, parse_query(out.query_text)).rows
    assert {(r[0].lexical, r[1].lexical) for r in rows} == {
        ("IDEAL", "United Kingdom"),
        ("REFIT", "United Kingdom"),
        ("UKDALE", "United Kingdom"),
    }


def test_gdp_question(seed):
    out = transform(PROMPT_2)
    assert out.matched
    assert out.intent_id == "DatasetsByGdpThreshold"
    assert out.slots == {"amount": "50000"}
    prefixes = {r[0].lexical for r in evaluate(seed, parse_query(out.query_text)).rows}
    # strict >: GREEND sits exactly on the threshold and is excluded
    assert prefixes == {"ECO", "IDEAL", "REDD", "REFIT", "UKDALE"}


def test_price_and_region_question(seed):
    out = transform(PROMPT_3)
    assert out.matched
    assert out.intent_id == "DatasetsByPriceAndRegion"
    assert out.slots == {"amount": "0.25", "continent": "Europe"}
    prefixes = {r[0].lexical for r in evaluate(seed, parse_query(out.query_text)).rows}
    assert prefixes == {"IDEAL", "REFIT", "UKDALE"}


def test_negated_continent_question(seed):
    out = transform(PROMPT_3E)
    assert out.matched
    assert out.intent_id == "DatasetsByContinentAndEducation"
    assert out.slots == {"continent": "Europe", "educationLevel": "high"}
    prefixes = {r[0].lexical for r in evaluate(seed, parse_query(out.query_text)).rows}
    assert prefixes == {"REDD"}


def test_load_profile_question():
    out = transform(PROMPT_4)
    assert out.matched
    assert out.intent_id == "LoadProfileOfHouse"
    assert out.slots == {"house": "REFIT_1"}
    assert 'FILTER(?houseName = "REFIT_1")' in out.query_text


def test_house_name_accepted_verbatim():
    out = transform("Can you explain the load profile of UKDALE_3?")
    assert out.slots == {"house": "UKDALE_3"}


@pytest.mark.parametrize(
    "phrase,expected",
    [
        ("great britain", "United Kingdom"),
        ("Britain", "United Kingdom"),
        ("the U.K.", "United Kingdom"),
        ("the USA", "United States"),
        ("swiss households", "Switzerland"),
    ],
)
def test_country_aliases(phrase, expected):
    out = transform(f"Which electricity consumption datasets are from {phrase}?")
    assert out.matched, out.diagnostic
    assert out.slots["country"] == expected


def test_alias_needs_token_boundary():
    # "ukulele" must not read as UK
    out = transform("Which electricity consumption datasets mention the ukulele?")
    assert not out.matched
    assert "country" in out.diagnostic


def test_unmatched_question_reports_no_intent():
    out = transform("What is the meaning of life?")
    assert not out.matched
    assert out.diagnostic == "NoIntentMatched"
    assert out.query_text is None


def test_missing_slot_reports_extractor():
    out = transform("Which datasets have a GDP per capita higher than lots?")
    assert not out.matched
    assert "amount" in out.diagnostic


def test_catalog_order_prefers_specific_intents():
    # mentions datasets AND gdp; the threshold intent must win
    out = transform(PROMPT_2)
    assert out.intent_id == "DatasetsByGdpThreshold"
    ids = [intent.id for intent in load_catalog()]
    assert ids.index("DatasetsByGdpThreshold") < ids.index("DatasetsByCountry")
    assert ids.index("LoadProfileOfHouse") < ids.index("DatasetsByCountry")


@pytest.mark.parametrize(
    "text,expected",
    [
        ("$50000", 50000),
        ("higher than $50,000.", 50000),
        ("0.25€/kWh", Decimal("0.25")),
        ("1,234.56 dollars", Decimal("1234.56")),
        ("7 houses", 7),
    ],
)
def test_extract_money(text, expected):
    got = extract_money(text)
    assert got == expected
    assert type(got) is type(expected)


def test_extract_money_requires_amount():
    with pytest.raises(NoAmountFound):
        extract_money("half a million")


def test_instantiate_escapes_quotes():
    template = 'SELECT ?s WHERE { ?s <https://p.example/name> "${name}" . }'
    text = instantiate(template, {"name": 'Oxford "the city"'})
    ast = parse_query(text)
    assert ast.patterns[0].object.lexical == 'Oxford "the city"'


class _Scripted:
    def __init__(self, text):
        self._text = text

    def complete(self, bundle):
        return AnswerRecord(text=self._text, backend_id="draft", latency_ms=1)


def test_llm_transform_accepts_known_predicate_query(seed):
    reply = (
        "Here you go:\n```sparql\nSELECT ?name WHERE { ?h "
        "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type> "
        "<https://schema.org/House> . ?h <https://schema.org/name> ?name . }\n```"
    )
    out = llm_transform("list houses", SCHEMA_HINT, _Scripted(reply))
    assert out.matched and out.intent_id == "LlmDrafted"
    assert len(evaluate(seed, parse_query(out.query_text)).rows) == 8


@pytest.mark.parametrize(
    "reply,complaint",
    [
        ("no code here", "code block"),
        ("```sparql\nSELECT ?x WHERE { broken\n```", "parse"),
        (
            "```sparql\nSELECT ?s WHERE { ?s <https://evil.example/p> ?o . }\n```",
            "unknown predicate",
        ),
        (
            "```sparql\nSELECT ?s WHERE { ?s ?p ?o . }\n```",
            "variable predicate",
        ),
    ],
)
def test_llm_transform_gates_bad_drafts(reply, complaint):
    with pytest.raises(GeneratedQueryRejected, match=complaint):
        llm_transform("q", SCHEMA_HINT, _Scripted(reply))
