"""SPARQL 1.1 Query Results JSON Format serialization.

Field names follow the W3C recommendation exactly: "head"/"vars",
"results"/"bindings", term objects with "type", "value", optional
"datatype" and "xml:lang". Plain xsd:string literals omit the datatype
field, matching how the format treats simple literals.
"""

from __future__ import annotations

from ..rdf.terms import XSD_STRING, BlankNode, Iri, Literal, Term
from .eval import ResultTable


def term_to_json(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    if isinstance(term, Literal):
        obj: dict = {"type": "literal", "value": term.lexical}
        if term.lang:
            obj["xml:lang"] = term.lang
        elif term.datatype != XSD_STRING:
            obj["datatype"] = term.datatype
        return obj
    raise TypeError(f"not a term: {term!r}")


def table_to_json(table: ResultTable) -> dict:
    bindings = []
    for row in table.rows:
        entry = {}
        for name, term in zip(table.variables, row):
            if term is not None:  # unbound variables are simply absent
                entry[name] = term_to_json(term)
        bindings.append(entry)
    return {"head": {"vars": list(table.variables)}, "results": {"bindings": bindings}}
