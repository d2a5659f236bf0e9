from electwin.rdf.store import Store
from electwin.rdf.terms import XSD_INTEGER, BlankNode, Iri, Literal, Triple
from electwin.sparql.eval import ResultTable, evaluate
from electwin.sparql.parser import parse_query
from electwin.sparql.results import table_to_json, term_to_json

XSD = "http://www.w3.org/2001/XMLSchema#"


def test_iri_term_shape():
    assert term_to_json(Iri("https://a.example/x")) == {
        "type": "uri",
        "value": "https://a.example/x",
    }


def test_blank_term_shape():
    assert term_to_json(BlankNode("b0")) == {"type": "bnode", "value": "b0"}


def test_plain_literal_omits_datatype():
    assert term_to_json(Literal("hi")) == {"type": "literal", "value": "hi"}


def test_typed_literal_carries_datatype():
    assert term_to_json(Literal("5", XSD_INTEGER)) == {
        "type": "literal",
        "value": "5",
        "datatype": XSD + "integer",
    }


def test_language_literal_uses_xml_lang():
    got = term_to_json(Literal("hi", lang="en"))
    assert got == {"type": "literal", "value": "hi", "xml:lang": "en"}
    assert "datatype" not in got


def test_table_shape_and_unbound_omission():
    table = ResultTable(
        variables=("a", "b"),
        rows=[(Literal("x"), None), (None, Iri("https://a.example/y"))],
    )
    got = table_to_json(table)
    assert got["head"] == {"vars": ["a", "b"]}
    assert got["results"]["bindings"] == [
        {"a": {"type": "literal", "value": "x"}},
        {"b": {"type": "uri", "value": "https://a.example/y"}},
    ]


def test_empty_result_still_lists_vars():
    got = table_to_json(ResultTable(variables=("v",)))
    assert got == {"head": {"vars": ["v"]}, "results": {"bindings": []}}


def test_end_to_end_bind_miss_absent_from_json():
    store = Store()
    store.insert(
        Triple(Iri("https://s.example/a"), Iri("https://p.example/v"), Literal("plain"))
    )
    query = (
        'SELECT ?v ?p WHERE { ?s <https://p.example/v> ?v . '
        'BIND(STRBEFORE(?v, "_") AS ?p) }'
    )
    got = table_to_json(evaluate(store, parse_query(query)))
    (binding,) = got["results"]["bindings"]
    # STRBEFORE("plain", "_") misses: ?p bound to "" (still present);
    # swap to a non-string argument for a true unbound
    assert binding["p"] == {"type": "literal", "value": ""}

    store2 = Store()
    store2.insert(
        Triple(
            Iri("https://s.example/a"),
            Iri("https://p.example/v"),
            Literal("5", XSD_INTEGER),
        )
    )
    got2 = table_to_json(evaluate(store2, parse_query(query)))
    (binding2,) = got2["results"]["bindings"]
    assert "p" not in binding2
    assert binding2["v"]["datatype"] == XSD + "integer"
