"""Question-to-query mapping.

A question is matched against an ordered intent catalog (packaged as
data/intents.json). The first template whose keyword groups all appear
in the question wins; its slot extractors then pull the concrete
values (country, threshold amount, house reference, ...) out of the
text and the template is instantiated. Slot extraction failure is a
normal outcome, not an error: the pipeline treats it as "no query" and
degrades to a plain LLM call.

An optional LLM-backed fallback (llm_transform) can draft the query
instead; its output is accepted only if it parses and touches only
predicates the graph actually uses.
"""

from __future__ import annotations

import importlib.resources
import json
import re
import string
from dataclasses import dataclass, field
from decimal import Decimal

from .kg.schema import KNOWN_PREDICATES
from .rdf.terms import Iri
from .sparql import QuerySyntaxError, Var, parse_query


class NoAmountFound(ValueError):
    pass


class GeneratedQueryRejected(ValueError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


@dataclass(frozen=True)
class IntentTemplate:
    id: str
    trigger_keywords: tuple[tuple[str, ...], ...]
    slot_extractors: tuple[tuple[str, str], ...]  # (slot name, extractor kind)
    query_template: str

    def __post_init__(self):
        placeholders = set(re.findall(r"\$\{([A-Za-z]+)\}", self.query_template))
        declared = {slot for slot, _ in self.slot_extractors}
        if placeholders - declared:
            raise ValueError(
                f"intent {self.id}: placeholders {sorted(placeholders - declared)} "
                "have no slot extractor"
            )


@dataclass(frozen=True)
class TransformOutcome:
    matched: bool
    intent_id: str | None = None
    slots: dict = field(default_factory=dict)
    query_text: str | None = None
    diagnostic: str | None = None


def _load_json(name: str) -> dict:
    ref = importlib.resources.files("electwin").joinpath(f"data/{name}")
    return json.loads(ref.read_text(encoding="utf-8"))


def load_catalog() -> tuple[IntentTemplate, ...]:
    doc = _load_json("intents.json")
    return tuple(
        IntentTemplate(
            id=entry["id"],
            trigger_keywords=tuple(tuple(group) for group in entry["triggerKeywords"]),
            slot_extractors=tuple(
                (ex["slot"], ex["kind"]) for ex in entry["slotExtractors"]
            ),
            query_template=entry["queryTemplate"],
        )
        for entry in doc["intents"]
    )


def load_aliases() -> dict:
    return _load_json("country_aliases.json")


_CATALOG = load_catalog()
_ALIASES = load_aliases()

# ---------------------------------------------------------------------------
# Slot extractors

_MONEY = re.compile(r"(\d{1,3}(?:,\d{3})+|\d+)(\.\d+)?")


def extract_money(text: str):
    """First monetary/numeric amount in the text.

    Handles "$50000", "50,000" and "0.25€/kWh" forms: currency symbols
    are irrelevant to the match, thousands separators are stripped,
    and a fractional part switches the result from int to Decimal.
    """
    m = _MONEY.search(text)
    if not m:
        raise NoAmountFound(f"no amount in {text!r}")
    whole = m.group(1).replace(",", "")
    if m.group(2):
        return Decimal(whole + m.group(2))
    return int(whole)


def _alias_scan(text_lower: str, table: dict[str, list[str]]) -> str | None:
    """Longest-alias-first, token-boundary search; canonical name out."""
    pairs = [
        (alias, canonical)
        for canonical, aliases in table.items()
        for alias in aliases
    ]
    pairs.sort(key=lambda p: len(p[0]), reverse=True)
    for alias, canonical in pairs:
        pattern = r"(?<![A-Za-z0-9])" + re.escape(alias) + r"(?![A-Za-z0-9])"
        if re.search(pattern, text_lower):
            return canonical
    return None


_HOUSE_PHRASE = re.compile(
    r"house\s+(\d+)\s+(?:in|of|from)\s+the\s+([A-Za-z][A-Za-z0-9-]*)\s+dataset",
    re.IGNORECASE,
)
_HOUSE_DIRECT = re.compile(r"(?<![A-Za-z0-9])([A-Za-z][A-Za-z0-9]*_\d+)(?![A-Za-z0-9])")


def _extract_house(question: str) -> str | None:
    m = _HOUSE_PHRASE.search(question)
    if m:
        return f"{m.group(2).upper()}_{m.group(1)}"
    m = _HOUSE_DIRECT.search(question)
    if m:
        return m.group(1)
    return None


def _extract_education(question_lower: str) -> str | None:
    m = re.search(r"(?<![a-z])(low|medium|high)(?![a-z])", question_lower)
    return m.group(1) if m else None


def _extract_amount(question: str, want_decimal: bool) -> str | None:
    try:
        amount = extract_money(question)
    except NoAmountFound:
        return None
    if want_decimal and not isinstance(amount, Decimal):
        return str(Decimal(amount))
    return str(amount)


def _run_extractor(kind: str, question: str) -> str | None:
    lower = question.lower()
    if kind == "countryName":
        return _alias_scan(lower, _ALIASES["countries"])
    if kind == "continentName":
        return _alias_scan(lower, _ALIASES["continents"])
    if kind == "moneyAmount":
        return _extract_amount(question, want_decimal=False)
    if kind == "priceAmount":
        return _extract_amount(question, want_decimal=True)
    if kind == "educationLevel":
        return _extract_education(lower)
    if kind == "houseRef":
        return _extract_house(question)
    raise ValueError(f"unknown slot extractor kind {kind!r}")


def _escape_slot(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def instantiate(template: str, slots: dict) -> str:
    # string.Template handles ${x}; values are escaped for quoted positions
    return string.Template(template).substitute(
        {name: _escape_slot(value) for name, value in slots.items()}
    )


def transform(question: str, catalog: tuple[IntentTemplate, ...] | None = None) -> TransformOutcome:
    """Map a natural-language question to a query, deterministically."""
    if catalog is None:
        catalog = _CATALOG
    lower = question.lower()
    for intent in catalog:
        if not all(any(kw in lower for kw in group) for group in intent.trigger_keywords):
            continue
        slots = {}
        for slot, kind in intent.slot_extractors:
            value = _run_extractor(kind, question)
            if value is None:
                return TransformOutcome(
                    matched=False,
                    intent_id=intent.id,
                    diagnostic=f"could not extract slot {slot!r} ({kind}) from the question",
                )
            slots[slot] = value
        query_text = instantiate(intent.query_template, slots)
        try:
            parse_query(query_text)
        except QuerySyntaxError as exc:
            return TransformOutcome(
                matched=False,
                intent_id=intent.id,
                slots=slots,
                diagnostic=f"instantiated template does not parse: {exc}",
            )
        return TransformOutcome(
            matched=True, intent_id=intent.id, slots=slots, query_text=query_text
        )
    return TransformOutcome(matched=False, diagnostic="NoIntentMatched")


# ---------------------------------------------------------------------------
# LLM-drafted fallback, disabled unless explicitly invoked

_CODE_BLOCK = re.compile(r"```(?:sparql)?\s*\n(.*?)```", re.DOTALL | re.IGNORECASE)

SCHEMA_HINT = (
    "Graph shape: houses are typed schema:House with schema:name "
    '"<DATASET>_<n>", linked by schema:containedInPlace to a city, the '
    "city by schema:containedInPlace to a schema:Country with "
    "schema:name; countries carry voc:gdpPerCapita, voc:electricityPrice, "
    "voc:continent, voc:educationLevel. Answer with one SPARQL SELECT "
    "query in a fenced code block."
)


def llm_transform(question: str, schema_hint: str, backend) -> TransformOutcome:
    """Ask an LLM backend to draft the query, then gate it.

    The draft is accepted only if it parses in the supported subset and
    every constant predicate is one the graph builder emits.
    """
    from .llm import PromptBundle  # local import, llm imports nothing from here

    bundle = PromptBundle(question=f"{schema_hint}\n\nQuestion: {question}", mode="nonRag")
    reply = backend.complete(bundle)
    m = _CODE_BLOCK.search(reply.text)
    if not m:
        raise GeneratedQueryRejected("reply contains no fenced code block")
    query_text = m.group(1).strip()
    try:
        ast = parse_query(query_text)
    except QuerySyntaxError as exc:
        raise GeneratedQueryRejected(f"generated query does not parse: {exc}") from exc
    for pattern in ast.patterns:
        pred = pattern.predicate
        if isinstance(pred, Var):
            raise GeneratedQueryRejected("generated query uses a variable predicate")
        if isinstance(pred, Iri) and pred not in KNOWN_PREDICATES:
            raise GeneratedQueryRejected(f"unknown predicate {pred.value}")
    return TransformOutcome(
        matched=True, intent_id="LlmDrafted", slots={}, query_text=query_text
    )
