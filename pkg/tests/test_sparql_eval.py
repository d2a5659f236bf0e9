"""Hand-picked evaluation cases pinning the comparison table.

The randomized equivalence suite covers the combinatorial space; these
cases document each rule of the value semantics individually so a
regression points at the exact rule that broke.
"""

import pytest

from electwin.rdf.store import Store
from electwin.rdf.terms import (
    XSD_BOOLEAN,
    XSD_DATE,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    BlankNode,
    Iri,
    Literal,
    Triple,
)
from electwin.sparql.eval import evaluate
from electwin.sparql.parser import parse_query

P = "https://p.example/v"


def store_of(*objects):
    store = Store()
    for i, obj in enumerate(objects):
        store.insert(Triple(Iri(f"https://s.example/{i}"), Iri(P), obj))
    return store


def values(store, query):
    table = evaluate(store, parse_query(query))
    return [row[0] for row in table.rows]


def filter_survivors(obj, cond):
    store = store_of(obj)
    rows = values(store, f"SELECT ?v WHERE {{ ?s <{P}> ?v . FILTER({cond}) }}")
    return len(rows)


# ---- numeric comparisons ----


def test_integer_compared_by_value_not_lexical():
    assert filter_survivors(Literal("007", XSD_INTEGER), "?v = 7") == 1
    assert filter_survivors(Literal("007", XSD_INTEGER), "?v < 8") == 1


def test_integer_decimal_mix_is_exact():
    assert filter_survivors(Literal("0.1", XSD_DECIMAL), "?v = 0.10") == 1
    # exact decimal arithmetic, no float round-off
    assert filter_survivors(Literal("0.3", XSD_DECIMAL), "?v = 0.30000000000000004") == 0


def test_double_forces_float_comparison():
    assert filter_survivors(Literal("1e2", XSD_DOUBLE), "?v = 100") == 1
    assert filter_survivors(Literal("2.5e-1", XSD_DOUBLE), "?v < 1") == 1


def test_bad_numeric_lexical_is_type_error():
    # the row is dropped, not crashed on
    assert filter_survivors(Literal("oops", XSD_INTEGER), "?v = 7") == 0
    assert filter_survivors(Literal("oops", XSD_INTEGER), "?v != 7") == 0


def test_negative_numbers():
    assert filter_survivors(Literal("-3", XSD_INTEGER), "?v < 0") == 1


# ---- strings ----


def test_plain_strings_codepoint_order():
    assert filter_survivors(Literal("apple"), '?v < "banana"') == 1
    # uppercase sorts before lowercase in codepoint order
    assert filter_survivors(Literal("Zoo"), '?v < "apple"') == 1


def test_string_vs_number_is_type_error():
    assert filter_survivors(Literal("7"), "?v = 7") == 0
    assert filter_survivors(Literal("7"), "?v != 7") == 0


def test_lang_strings_compare_only_within_same_tag():
    assert filter_survivors(Literal("a", lang="en"), '?v < "b"@en') == 1
    assert filter_survivors(Literal("a", lang="en"), '?v = "a"@fr') == 0
    # plain string vs lang string: type error either direction
    assert filter_survivors(Literal("a", lang="en"), '?v = "a"') == 0


# ---- booleans, IRIs, blanks ----


def test_booleans_support_equality_only():
    assert filter_survivors(Literal("true", XSD_BOOLEAN), "?v = true") == 1
    assert filter_survivors(Literal("true", XSD_BOOLEAN), "?v != false") == 1
    assert filter_survivors(Literal("true", XSD_BOOLEAN), "?v < true") == 0


def test_iris_support_equality_only():
    iri = Iri("https://o.example/x")
    assert filter_survivors(iri, f"?v = <{iri.value}>") == 1
    assert filter_survivors(iri, "?v != <https://o.example/y>") == 1
    assert filter_survivors(iri, "?v < <https://o.example/y>") == 0


def test_blank_nodes_equal_only_to_themselves():
    store = store_of(BlankNode("b1"), BlankNode("b2"))
    (b1,) = values(store, f"SELECT ?v WHERE {{ <https://s.example/0> <{P}> ?v . }}")
    rows = values(store, f"SELECT ?w WHERE {{ ?s <{P}> ?v . ?t <{P}> ?w . FILTER(?v != ?w) }}")
    assert sorted(t.label for t in rows) == ["b1", "b2"]
    assert b1 == BlankNode("b1")


def test_unrelated_datatypes_are_type_errors():
    assert filter_survivors(Literal("2024-01-01", XSD_DATE), '?v = "2024-01-01"') == 0


# ---- filter mechanics ----


def test_filter_requires_boolean_true_no_coercion():
    # a bare non-boolean expression never passes a filter
    assert filter_survivors(Literal("x"), "?v") == 0
    assert filter_survivors(Literal("1", XSD_INTEGER), "?v") == 0
    assert filter_survivors(Literal("true", XSD_BOOLEAN), "?v") == 1
    assert filter_survivors(Literal("false", XSD_BOOLEAN), "?v") == 0


def test_and_is_three_valued():
    # false && error = false is irrelevant to survival; both drop the row.
    # What matters: false short-circuits without raising, error && false
    # still drops, true && true keeps.
    assert filter_survivors(Literal("5", XSD_INTEGER), '?v > 3 && ?v < 9') == 1
    assert filter_survivors(Literal("5", XSD_INTEGER), '?v > 9 && ?v = "x"') == 0
    assert filter_survivors(Literal("5", XSD_INTEGER), '?v = "x" && ?v > 9') == 0


def test_filters_conjoin_wherever_written():
    store = store_of(Literal("3", XSD_INTEGER), Literal("8", XSD_INTEGER))
    rows = values(
        store,
        f"SELECT ?v WHERE {{ FILTER(?v > 1) ?s <{P}> ?v . FILTER(?v < 5) }}",
    )
    assert [r.lexical for r in rows] == ["3"]


# ---- BIND ----


def test_bind_error_keeps_row_with_unbound_target():
    store = store_of(Iri("https://o.example/x"), Literal("a_b"))
    table = evaluate(
        store,
        parse_query(
            f'SELECT ?v ?p WHERE {{ ?s <{P}> ?v . BIND(STRBEFORE(?v, "_") AS ?p) }}'
        ),
    )
    got = {tuple(row) for row in table.rows}
    assert (Iri("https://o.example/x"), None) in got
    assert (Literal("a_b"), Literal("a")) in got


def test_bind_result_usable_in_filter():
    store = store_of(Literal("REFIT_1"), Literal("UKDALE_3"))
    rows = values(
        store,
        f'SELECT ?p WHERE {{ ?s <{P}> ?v . BIND(STRBEFORE(?v, "_") AS ?p) '
        f'FILTER(?p = "REFIT") }}',
    )
    assert [r.lexical for r in rows] == ["REFIT"]


# ---- STRBEFORE / STR ----


@pytest.mark.parametrize(
    "haystack,needle,expected",
    [
        ("abc", "b", "a"),
        ("abc", "xyz", ""),
        ("abc", "", ""),
        ("abc", "a", ""),
        ("a_b_c", "_", "a"),
    ],
)
def test_strbefore_plain(haystack, needle, expected):
    store = store_of(Literal(haystack))
    (row,) = values(
        store,
        f'SELECT ?p WHERE {{ ?s <{P}> ?v . BIND(STRBEFORE(?v, "{needle}") AS ?p) }}',
    )
    assert row == Literal(expected)


def test_strbefore_keeps_language_of_haystack():
    store = store_of(Literal("abc", lang="en"))
    (hit,) = values(
        store, f'SELECT ?p WHERE {{ ?s <{P}> ?v . BIND(STRBEFORE(?v, "b") AS ?p) }}'
    )
    assert hit == Literal("a", lang="en")
    # no match returns a plain empty string, tag dropped
    (miss,) = values(
        store, f'SELECT ?p WHERE {{ ?s <{P}> ?v . BIND(STRBEFORE(?v, "z") AS ?p) }}'
    )
    assert miss == Literal("")


def test_strbefore_rejects_non_string_arguments():
    store = store_of(Literal("5", XSD_INTEGER))
    (row,) = values(
        store, f'SELECT ?p WHERE {{ ?s <{P}> ?v . BIND(STRBEFORE(?v, "x") AS ?p) }}'
    )
    assert row is None


def test_str_stringifies_iris_and_literals():
    store = store_of(Iri("https://o.example/x"), Literal("7", XSD_INTEGER))
    rows = values(store, f"SELECT ?p WHERE {{ ?s <{P}> ?v . BIND(STR(?v) AS ?p) }}")
    assert set(rows) == {Literal("https://o.example/x"), Literal("7")}


# ---- joins and projection ----


def test_join_on_shared_variable():
    store = Store()
    a, b = Iri("https://s.example/a"), Iri("https://s.example/b")
    knows, name = Iri("https://p.example/knows"), Iri("https://p.example/name")
    store.insert(Triple(a, knows, b))
    store.insert(Triple(b, name, Literal("Bea")))
    rows = values(
        store,
        f"SELECT ?n WHERE {{ ?x <{knows.value}> ?y . ?y <{name.value}> ?n . }}",
    )
    assert rows == [Literal("Bea")]


def test_join_variable_carrying_literal_into_subject_is_empty():
    # a literal can never appear in subject position, so the join is
    # empty rather than an error
    store = Store()
    s = Iri("https://s.example/a")
    store.insert(Triple(s, Iri(P), Literal("x")))
    table = evaluate(
        store,
        parse_query(f"SELECT ?v WHERE {{ ?s <{P}> ?v . ?v <{P}> ?w . }}"),
    )
    assert table.rows == []


def test_distinct_collapses_duplicates():
    store = Store()
    store.insert(Triple(Iri("https://s.example/a"), Iri(P), Literal("x")))
    store.insert(Triple(Iri("https://s.example/b"), Iri(P), Literal("x")))
    query = f"SELECT ?v WHERE {{ ?s <{P}> ?v . }}"
    assert len(values(store, query)) == 2
    assert len(values(store, query.replace("SELECT", "SELECT DISTINCT"))) == 1


def test_projection_narrows_columns():
    store = store_of(Literal("x"))
    table = evaluate(store, parse_query(f"SELECT ?s WHERE {{ ?s <{P}> ?v . }}"))
    assert table.variables == ("s",)
    assert table.rows == [(Iri("https://s.example/0"),)]


def test_cross_product_when_patterns_share_nothing():
    store = Store()
    store.insert(Triple(Iri("https://s.example/a"), Iri(P), Literal("1", XSD_INTEGER)))
    store.insert(Triple(Iri("https://s.example/b"), Iri(P), Literal("2", XSD_INTEGER)))
    table = evaluate(
        store,
        parse_query(f"SELECT ?v ?w WHERE {{ ?s <{P}> ?v . ?t <{P}> ?w . }}"),
    )
    assert len(table.rows) == 4


def test_ground_pattern_acts_as_existence_check():
    store = store_of(Literal("x"))
    hit = f'SELECT ?v WHERE {{ ?s <{P}> ?v . <https://s.example/0> <{P}> "x" . }}'
    miss = f'SELECT ?v WHERE {{ ?s <{P}> ?v . <https://s.example/0> <{P}> "y" . }}'
    assert len(values(store, hit)) == 1
    assert len(values(store, miss)) == 0
