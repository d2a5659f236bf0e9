"""Query evaluation over a Store.

Joins are nested index lookups, left to right in pattern declaration
order; results are therefore order-of-declaration dependent in row
ordering but not in row content. After the graph pattern, binds run in
declaration order, then every filter acts as a conjunctive guard,
regardless of where it appeared in the query text.

Value semantics for expressions (the comparison table):
  - numeric vs numeric: by value; xsd:double forces float comparison,
    integer/decimal compare exactly
  - string vs string (xsd:string, no language tag): codepoint order
  - language-tagged vs language-tagged: codepoint order when tags are
    equal, type error otherwise
  - boolean vs boolean: = and != only
  - IRI vs IRI, blank vs blank: = and != only
  - every other pairing: type error
A filter passes only when its expression yields boolean true; a type
error or any non-boolean result drops the row. A bind whose expression
errors leaves its target unbound and keeps the row.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

from ..rdf.store import Store
from ..rdf.terms import (
    RDF_LANG_STRING,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Term,
)
from .ast import And, Compare, Const, Expr, QueryAst, Str, StrBefore, TriplePattern, Var


class TypeErrorSignal(Exception):
    """Expression evaluation error. Eliminates the row, never fatal."""


class EvaluationError(Exception):
    """Malformed AST reached the evaluator (parser invariants violated)."""


@dataclass
class ResultTable:
    variables: tuple[str, ...]
    rows: list[tuple[Term | None, ...]] = field(default_factory=list)

    def as_sets(self) -> set:
        return set(self.rows)


Solution = dict  # variable name -> Term

_INTEGER_LEXICAL = re.compile(r"[+-]?[0-9]+\Z")
_DECIMAL_LEXICAL = re.compile(r"[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)\Z")
_DOUBLE_LEXICAL = re.compile(
    r"[+-]?(([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?|INF|NaN)\Z"
)

TRUE = Literal("true", XSD_BOOLEAN)
FALSE = Literal("false", XSD_BOOLEAN)


def _numeric(term: Term):
    """int | Decimal | float, or None when the term is not numeric."""
    if not isinstance(term, Literal) or term.lang:
        return None
    if term.datatype == XSD_INTEGER:
        if not _INTEGER_LEXICAL.match(term.lexical):
            raise TypeErrorSignal(f"bad xsd:integer lexical {term.lexical!r}")
        return int(term.lexical)
    if term.datatype == XSD_DECIMAL:
        if not _DECIMAL_LEXICAL.match(term.lexical):
            raise TypeErrorSignal(f"bad xsd:decimal lexical {term.lexical!r}")
        try:
            return Decimal(term.lexical)
        except InvalidOperation:  # pragma: no cover - regex gates this
            raise TypeErrorSignal(f"bad xsd:decimal lexical {term.lexical!r}") from None
    if term.datatype == XSD_DOUBLE:
        if not _DOUBLE_LEXICAL.match(term.lexical):
            raise TypeErrorSignal(f"bad xsd:double lexical {term.lexical!r}")
        return float(term.lexical)
    return None


def _boolean(term: Term) -> bool:
    if (
        isinstance(term, Literal)
        and not term.lang
        and term.datatype == XSD_BOOLEAN
        and term.lexical in ("true", "false", "1", "0")
    ):
        return term.lexical in ("true", "1")
    raise TypeErrorSignal(f"not a boolean: {term!r}")


def _is_string_literal(term: Term) -> bool:
    return isinstance(term, Literal) and term.datatype == XSD_STRING and not term.lang


_OPS = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
}


def _compare_terms(op: str, lhs: Term, rhs: Term) -> Literal:
    try:
        test = _OPS[op]
    except KeyError:
        raise EvaluationError(f"unknown comparison operator {op!r}") from None

    ln = _numeric(lhs)
    rn = _numeric(rhs)
    if ln is not None and rn is not None:
        if isinstance(ln, float) or isinstance(rn, float):
            ln, rn = float(ln), float(rn)
        return TRUE if test(ln, rn) else FALSE
    if _is_string_literal(lhs) and _is_string_literal(rhs):
        return TRUE if test(lhs.lexical, rhs.lexical) else FALSE
    if isinstance(lhs, Literal) and lhs.lang and isinstance(rhs, Literal) and rhs.lang:
        if lhs.lang != rhs.lang:
            raise TypeErrorSignal("comparing literals with different language tags")
        return TRUE if test(lhs.lexical, rhs.lexical) else FALSE
    if (
        isinstance(lhs, Literal)
        and isinstance(rhs, Literal)
        and lhs.datatype == XSD_BOOLEAN
        and rhs.datatype == XSD_BOOLEAN
    ):
        if op not in ("=", "!="):
            raise TypeErrorSignal("booleans support only = and !=")
        return TRUE if test(_boolean(lhs), _boolean(rhs)) else FALSE
    if isinstance(lhs, Iri) and isinstance(rhs, Iri):
        if op not in ("=", "!="):
            raise TypeErrorSignal("IRIs support only = and !=")
        return TRUE if test(lhs.value, rhs.value) else FALSE
    if isinstance(lhs, BlankNode) and isinstance(rhs, BlankNode):
        if op not in ("=", "!="):
            raise TypeErrorSignal("blank nodes support only = and !=")
        return TRUE if test(lhs.label, rhs.label) else FALSE
    raise TypeErrorSignal(f"incomparable operands: {lhs!r} vs {rhs!r}")


def _stringish(term: Term) -> bool:
    return isinstance(term, Literal) and (term.datatype == XSD_STRING or bool(term.lang))


def _strbefore(hay: Term, needle: Term) -> Literal:
    """SPARQL STRBEFORE: empty needle keeps the haystack's kind, a
    failed search yields a plain empty string."""
    if not _stringish(hay) or not _stringish(needle):
        raise TypeErrorSignal("STRBEFORE needs string literals")
    if needle.lang and needle.lang != hay.lang:
        raise TypeErrorSignal("STRBEFORE language tags are incompatible")
    if needle.lexical == "":
        return Literal("", RDF_LANG_STRING, hay.lang) if hay.lang else Literal("", XSD_STRING)
    idx = hay.lexical.find(needle.lexical)
    if idx < 0:
        return Literal("", XSD_STRING)
    if hay.lang:
        return Literal(hay.lexical[:idx], RDF_LANG_STRING, hay.lang)
    return Literal(hay.lexical[:idx], XSD_STRING)


def eval_expr(expr: Expr, solution: Solution) -> Term:
    """Evaluate one expression against a solution.

    Raises TypeErrorSignal for SPARQL evaluation errors (unbound
    variable, incompatible operands, bad lexical forms); the caller
    decides whether that drops the row (filter) or leaves a variable
    unbound (bind).
    """
    if isinstance(expr, Var):
        try:
            return solution[expr.name]
        except KeyError:
            raise TypeErrorSignal(f"unbound variable ?{expr.name}") from None
    if isinstance(expr, Const):
        return expr.term
    if isinstance(expr, Str):
        value = eval_expr(expr.arg, solution)
        if isinstance(value, Iri):
            return Literal(value.value, XSD_STRING)
        if isinstance(value, Literal):
            return Literal(value.lexical, XSD_STRING)
        raise TypeErrorSignal("STR of a blank node")
    if isinstance(expr, StrBefore):
        return _strbefore(
            eval_expr(expr.haystack, solution), eval_expr(expr.needle, solution)
        )
    if isinstance(expr, Compare):
        return _compare_terms(
            expr.op, eval_expr(expr.lhs, solution), eval_expr(expr.rhs, solution)
        )
    if isinstance(expr, And):
        # && survives one erring operand when the other is false
        lhs_err = rhs_err = False
        lhs = rhs = False
        try:
            lhs = _boolean(eval_expr(expr.lhs, solution))
        except TypeErrorSignal:
            lhs_err = True
        try:
            rhs = _boolean(eval_expr(expr.rhs, solution))
        except TypeErrorSignal:
            rhs_err = True
        if (not lhs_err and not lhs) or (not rhs_err and not rhs):
            return FALSE
        if lhs_err or rhs_err:
            raise TypeErrorSignal("&& over an evaluation error")
        return TRUE
    raise EvaluationError(f"unknown expression node {expr!r}")


def _match_pattern(store: Store, pattern: TriplePattern, solution: Solution):
    """Solutions extending `solution` to cover `pattern`, via one index lookup."""

    def lookup(slot):
        if isinstance(slot, Var):
            return solution.get(slot.name)
        return slot

    s, p, o = lookup(pattern.subject), lookup(pattern.predicate), lookup(pattern.object)
    # a joined variable can carry a term no triple slot may hold (literal
    # subject, non-IRI predicate); that is an empty match, not an error
    if isinstance(s, Literal) or (p is not None and not isinstance(p, Iri)):
        return
    for triple in store.match(s, p, o):
        extended = dict(solution)
        ok = True
        for slot, value in (
            (pattern.subject, triple.subject),
            (pattern.predicate, triple.predicate),
            (pattern.object, triple.object),
        ):
            if isinstance(slot, Var):
                bound = extended.get(slot.name)
                if bound is None:
                    extended[slot.name] = value
                elif bound != value:  # same var twice in one pattern
                    ok = False
                    break
        if ok:
            yield extended


def evaluate(store: Store, ast: QueryAst) -> ResultTable:
    """Run a parsed query against a store snapshot."""
    solutions: list[Solution] = [{}]
    for pattern in ast.patterns:
        solutions = [ext for sol in solutions for ext in _match_pattern(store, pattern, sol)]
        if not solutions:
            break

    for bind in ast.binds:
        for sol in solutions:
            if bind.target.name in sol:
                raise EvaluationError(f"BIND re-binds ?{bind.target.name}")
            try:
                sol[bind.target.name] = eval_expr(bind.expr, sol)
            except TypeErrorSignal:
                pass  # target stays unbound, row survives

    kept = []
    for sol in solutions:
        try:
            if all(_boolean(eval_expr(f, sol)) for f in ast.filters):
                kept.append(sol)
        except TypeErrorSignal:
            continue

    rows = [tuple(sol.get(name) for name in ast.projection) for sol in kept]
    if ast.distinct:
        rows = list(dict.fromkeys(rows))
    return ResultTable(variables=ast.projection, rows=rows)
