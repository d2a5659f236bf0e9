"""RDF atoms: IRIs, literals, blank nodes, and (s, p, o) triples.

Terms are immutable and hashable so they can live in sets and serve as
index keys. Equality is term equality: two literals are equal iff their
lexical form, datatype IRI, and language tag all match. Value comparison
(e.g. "1"^^xsd:integer vs "01"^^xsd:integer) is a query-evaluation
concern, not a storage concern.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF_NS + "type"
RDF_LANG_STRING = RDF_NS + "langString"

XSD_STRING = XSD_NS + "string"
XSD_INTEGER = XSD_NS + "integer"
XSD_DECIMAL = XSD_NS + "decimal"
XSD_DOUBLE = XSD_NS + "double"
XSD_BOOLEAN = XSD_NS + "boolean"
XSD_DATE = XSD_NS + "date"

NUMERIC_DATATYPES = frozenset({XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE})

_WHITESPACE = re.compile(r"\s")
# Safe blank-node label: parseable back from Turtle without escaping.
_BLANK_LABEL = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.-]*$")
_LANG_TAG = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")


class InvalidTermError(ValueError):
    """A term violates its structural invariants."""


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise InvalidTermError("IRI must be non-empty")
        if _WHITESPACE.search(self.value):
            raise InvalidTermError(f"IRI contains whitespace: {self.value!r}")

    def __repr__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: str | None = None

    def __post_init__(self) -> None:
        if self.lang is not None:
            if not _LANG_TAG.match(self.lang):
                raise InvalidTermError(f"malformed language tag: {self.lang!r}")
            # A language-tagged literal always has the language-string datatype;
            # allow the caller to omit it.
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", RDF_LANG_STRING)
            elif self.datatype != RDF_LANG_STRING:
                raise InvalidTermError(
                    "language tag is only allowed on language-string literals"
                )
        elif self.datatype == RDF_LANG_STRING:
            raise InvalidTermError("language-string literal requires a language tag")
        if not self.datatype or _WHITESPACE.search(self.datatype):
            raise InvalidTermError(f"malformed datatype IRI: {self.datatype!r}")

    def __repr__(self) -> str:
        if self.lang:
            return f'"{self.lexical}"@{self.lang}'
        if self.datatype == XSD_STRING:
            return f'"{self.lexical}"'
        return f'"{self.lexical}"^^<{self.datatype}>'


@dataclass(frozen=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise InvalidTermError("blank node label must be non-empty")
        if not _BLANK_LABEL.match(self.label) or self.label.endswith("."):
            raise InvalidTermError(f"unsafe blank node label: {self.label!r}")

    def __repr__(self) -> str:
        return f"_:{self.label}"


Term = Union[Iri, Literal, BlankNode]


@dataclass(frozen=True)
class Triple:
    subject: Iri | BlankNode
    predicate: Iri
    object: Term
    # Dataclass order matters for the deterministic sort key below.
    _key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise InvalidTermError("triple subject must be an IRI or blank node")
        if not isinstance(self.predicate, Iri):
            raise InvalidTermError("triple predicate must be an IRI")
        if not isinstance(self.object, (Iri, Literal, BlankNode)):
            raise InvalidTermError("triple object must be a term")
        object.__setattr__(
            self, "_key", (term_key(self.subject), term_key(self.predicate), term_key(self.object))
        )

    def sort_key(self) -> tuple:
        return self._key

    def __repr__(self) -> str:
        return f"({self.subject!r} {self.predicate!r} {self.object!r})"


def term_key(term: Term) -> tuple:
    """Total order over terms: IRIs, then blanks, then literals."""
    if isinstance(term, Iri):
        return (0, term.value)
    if isinstance(term, BlankNode):
        return (1, term.label)
    return (2, term.lexical, term.datatype, term.lang or "")
