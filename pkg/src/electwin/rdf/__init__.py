from .store import Store
from .terms import (
    BlankNode,
    InvalidTermError,
    Iri,
    Literal,
    Term,
    Triple,
    term_key,
)
from .turtle import ParseError, UnsupportedFeatureError, parse_turtle, serialize_turtle

__all__ = [
    "BlankNode",
    "InvalidTermError",
    "Iri",
    "Literal",
    "ParseError",
    "Store",
    "Term",
    "Triple",
    "UnsupportedFeatureError",
    "parse_turtle",
    "serialize_turtle",
    "term_key",
]
