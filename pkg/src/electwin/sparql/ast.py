"""AST for the supported SPARQL subset.

All nodes are frozen dataclasses so parsed queries compare by value;
the pretty-printer round-trip test relies on that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..rdf.terms import Iri, Literal


@dataclass(frozen=True)
class Var:
    name: str  # without the leading '?'


PatternTerm = Union[Var, Iri, Literal]


@dataclass(frozen=True)
class TriplePattern:
    subject: Var | Iri
    predicate: Var | Iri
    object: PatternTerm


@dataclass(frozen=True)
class Const:
    term: Iri | Literal


@dataclass(frozen=True)
class Compare:
    op: str  # one of = != < > <= >=
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class And:
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class StrBefore:
    haystack: Expr
    needle: Expr


@dataclass(frozen=True)
class Str:
    arg: Expr


Expr = Union[Var, Const, Compare, And, StrBefore, Str]

COMPARE_OPS = ("=", "!=", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Bind:
    expr: Expr
    target: Var


@dataclass(frozen=True)
class QueryAst:
    prefixes: tuple[tuple[str, str], ...]
    distinct: bool
    projection: tuple[str, ...]  # variable names, declaration order
    patterns: tuple[TriplePattern, ...]
    binds: tuple[Bind, ...]
    filters: tuple[Expr, ...]

    def pattern_variables(self) -> list[str]:
        """Variables bound by the basic graph pattern, first-use order."""
        seen: dict[str, None] = {}
        for p in self.patterns:
            for slot in (p.subject, p.predicate, p.object):
                if isinstance(slot, Var):
                    seen.setdefault(slot.name, None)
        return list(seen)

    def bound_variables(self) -> list[str]:
        out = self.pattern_variables()
        for b in self.binds:
            if b.target.name not in out:
                out.append(b.target.name)
        return out


def expr_variables(expr: Expr) -> list[str]:
    if isinstance(expr, Var):
        return [expr.name]
    if isinstance(expr, Const):
        return []
    if isinstance(expr, (Compare, And)):
        return expr_variables(expr.lhs) + expr_variables(expr.rhs)
    if isinstance(expr, StrBefore):
        return expr_variables(expr.haystack) + expr_variables(expr.needle)
    if isinstance(expr, Str):
        return expr_variables(expr.arg)
    raise TypeError(f"not an expression node: {expr!r}")
