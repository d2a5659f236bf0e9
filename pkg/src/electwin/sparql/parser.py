"""Parser and pretty-printer for the SPARQL subset.

Grammar: PREFIX declarations, SELECT [DISTINCT] over explicit
variables, one basic graph pattern with FILTER and BIND clauses.
Keywords are case-insensitive. Anything outside the subset (OPTIONAL,
UNION, ORDER BY, LIMIT, aggregates, property paths) is rejected with a
syntax error naming the construct.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..rdf.terms import (
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    RDF_LANG_STRING,
    Iri,
    Literal,
)
from .ast import (
    And,
    Bind,
    Compare,
    Const,
    Expr,
    PatternTerm,
    QueryAst,
    Str,
    StrBefore,
    TriplePattern,
    Var,
)


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, expectation: str | None = None):
        self.line = line
        self.column = column
        self.expectation = expectation
        hint = f" (expected {expectation})" if expectation else ""
        super().__init__(f"line {line}, column {column}: {message}{hint}")


class UnboundPrefixError(QuerySyntaxError):
    def __init__(self, label: str, line: int, column: int):
        self.label = label
        super().__init__(f"prefix {label + ':'!r} is not declared", line, column)


class ProjectionError(QuerySyntaxError):
    def __init__(self, name: str, line: int, column: int):
        self.name = name
        super().__init__(
            f"projected variable ?{name} is bound by no pattern or bind", line, column
        )


_UNSUPPORTED_KEYWORDS = {
    "optional",
    "union",
    "order",
    "limit",
    "offset",
    "group",
    "having",
    "construct",
    "ask",
    "describe",
    "minus",
    "graph",
    "service",
    "values",
    "exists",
    "uri",
}

_VAR = re.compile(r"[?$]([A-Za-z_][A-Za-z0-9_]*)")
_IRIREF = re.compile(r"<([^<>\"{}|^`\\\x00-\x20]*)>")
_PNAME = re.compile(r"([A-Za-z_][A-Za-z0-9_\-]*)?:([A-Za-z0-9_]([A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?")
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[+-]?(\d+\.\d*([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?|\d+([eE][+-]?\d+)?)")
_STRING = re.compile(r'"((?:[^"\\\n\r]|\\.)*)"')
_LANGTAG = re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)")
_PUNCT = ("&&", "^^", "<=", ">=", "!=", "(", ")", "{", "}", ".", ",", ";", "=", "<", ">")
_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


@dataclass
class _Tok:
    kind: str  # VAR IRIREF PNAME WORD INTEGER DECIMAL DOUBLE STRING LANGTAG PUNCT EOF
    value: str
    line: int
    col: int
    extra: str = ""


def _unescape(body: str, line: int, col: int) -> str:
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        nxt = body[i + 1] if i + 1 < len(body) else ""
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt == "u":
            out.append(chr(int(body[i + 2 : i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(body[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise QuerySyntaxError(f"invalid string escape '\\{nxt}'", line, col)
    return "".join(out)


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, col = 0, 1, 1

    def advance(n: int) -> None:
        nonlocal pos, line, col
        chunk = text[pos : pos + n]
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = n - chunk.rfind("\n")
        else:
            col += n
        pos += n

    while pos < len(text):
        c = text[pos]
        if c in " \t\r\n":
            advance(1)
            continue
        if c == "#":
            end = text.find("\n", pos)
            advance((end if end != -1 else len(text)) - pos)
            continue
        start_line, start_col = line, col
        m = _VAR.match(text, pos)
        if m:
            advance(len(m.group(0)))
            toks.append(_Tok("VAR", m.group(1), start_line, start_col))
            continue
        m = _IRIREF.match(text, pos)
        if m:
            advance(len(m.group(0)))
            toks.append(_Tok("IRIREF", m.group(1), start_line, start_col))
            continue
        m = _STRING.match(text, pos)
        if m:
            advance(len(m.group(0)))
            toks.append(
                _Tok("STRING", _unescape(m.group(1), start_line, start_col), start_line, start_col)
            )
            continue
        m = _LANGTAG.match(text, pos)
        if m:
            advance(len(m.group(0)))
            toks.append(_Tok("LANGTAG", m.group(1), start_line, start_col))
            continue
        m = _NUMBER.match(text, pos)
        if m and (c.isdigit() or (c in "+-." and len(m.group(0)) > 1)):
            lit = m.group(0)
            advance(len(lit))
            if "e" in lit or "E" in lit:
                kind = "DOUBLE"
            elif "." in lit:
                kind = "DECIMAL"
            else:
                kind = "INTEGER"
            toks.append(_Tok(kind, lit, start_line, start_col))
            continue
        m = _PNAME.match(text, pos)
        if m and ":" in m.group(0):
            advance(len(m.group(0)))
            toks.append(_Tok("PNAME", m.group(1) or "", start_line, start_col, m.group(2) or ""))
            continue
        m = _WORD.match(text, pos)
        if m:
            advance(len(m.group(0)))
            toks.append(_Tok("WORD", m.group(0), start_line, start_col))
            continue
        for p in _PUNCT:
            if text.startswith(p, pos):
                advance(len(p))
                toks.append(_Tok("PUNCT", p, start_line, start_col))
                break
        else:
            raise QuerySyntaxError(f"unexpected character {c!r}", start_line, start_col)
    toks.append(_Tok("EOF", "", line, col))
    return toks


class _QueryParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.prefixes: list[tuple[str, str]] = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def _fail(self, message: str, expectation: str | None = None):
        t = self.tok
        raise QuerySyntaxError(message, t.line, t.col, expectation)

    def _is_word(self, *words: str) -> bool:
        return self.tok.kind == "WORD" and self.tok.value.lower() in words

    def _expect_word(self, word: str) -> None:
        if not self._is_word(word):
            self._fail(f"found {self.tok.value or self.tok.kind!r}", word.upper())
        self._next()

    def _expect_punct(self, value: str) -> None:
        if self.tok.kind != "PUNCT" or self.tok.value != value:
            self._fail(f"found {self.tok.value or self.tok.kind!r}", repr(value))
        self._next()

    def _reject_unsupported(self) -> None:
        if self.tok.kind == "WORD" and self.tok.value.lower() in _UNSUPPORTED_KEYWORDS:
            self._fail(f"{self.tok.value.upper()} is outside the supported subset")

    # ---- grammar ----

    def parse(self) -> QueryAst:
        while self._is_word("prefix"):
            self._next()
            self._prefix_decl()
        self._reject_unsupported()
        self._expect_word("select")
        distinct = False
        if self._is_word("distinct"):
            distinct = True
            self._next()
        projection: list[str] = []
        proj_pos: list[tuple[int, int]] = []
        while self.tok.kind == "VAR":
            t = self._next()
            projection.append(t.value)
            proj_pos.append((t.line, t.col))
        if not projection:
            self._fail("SELECT needs at least one variable", "?variable")
        self._expect_word("where")
        patterns, binds, filters = self._group()
        if self.tok.kind != "EOF":
            self._reject_unsupported()
            self._fail(f"trailing content {self.tok.value!r} after query body")

        ast = QueryAst(
            prefixes=tuple(self.prefixes),
            distinct=distinct,
            projection=tuple(projection),
            patterns=tuple(patterns),
            binds=tuple(binds),
            filters=tuple(filters),
        )
        bound = set(ast.bound_variables())
        for name, (ln, col) in zip(projection, proj_pos):
            if name not in bound:
                raise ProjectionError(name, ln, col)
        return ast

    def _prefix_decl(self) -> None:
        if self.tok.kind != "PNAME" or self.tok.extra:
            self._fail("malformed PREFIX declaration", "label:")
        label = self._next().value
        if self.tok.kind != "IRIREF":
            self._fail("malformed PREFIX declaration", "<iri>")
        self.prefixes.append((label, self._next().value))

    def _group(self) -> tuple[list[TriplePattern], list[Bind], list[Expr]]:
        self._expect_punct("{")
        patterns: list[TriplePattern] = []
        binds: list[Bind] = []
        filters: list[Expr] = []
        bound_by_patterns: set[str] = set()
        bind_targets: set[str] = set()
        while True:
            if self.tok.kind == "PUNCT" and self.tok.value == "}":
                self._next()
                return patterns, binds, filters
            if self.tok.kind == "EOF":
                self._fail("unterminated group", "'}'")
            self._reject_unsupported()
            if self._is_word("filter"):
                self._next()
                self._expect_punct("(")
                filters.append(self._expr())
                self._expect_punct(")")
            elif self._is_word("bind"):
                t = self.tok
                self._next()
                self._expect_punct("(")
                expr = self._expr()
                if not self._is_word("as"):
                    self._fail(f"found {self.tok.value or self.tok.kind!r}", "AS")
                self._next()
                if self.tok.kind != "VAR":
                    self._fail("BIND target must be a variable", "?variable")
                target = self._next().value
                self._expect_punct(")")
                if target in bound_by_patterns or target in bind_targets:
                    raise QuerySyntaxError(
                        f"BIND would re-bind ?{target}, which is already bound", t.line, t.col
                    )
                bind_targets.add(target)
                binds.append(Bind(expr, Var(target)))
            else:
                for p in self._triples_block():
                    patterns.append(p)
                    for slot in (p.subject, p.predicate, p.object):
                        if isinstance(slot, Var):
                            bound_by_patterns.add(slot.name)
            # statement separator dots are optional after FILTER/BIND
            while self.tok.kind == "PUNCT" and self.tok.value == ".":
                self._next()

    def _triples_block(self) -> list[TriplePattern]:
        out: list[TriplePattern] = []
        subject = self._pattern_term(role="subject")
        if isinstance(subject, Literal):
            self._fail("a literal cannot be a subject")
        while True:
            predicate = self._verb()
            while True:
                obj = self._pattern_term(role="object")
                out.append(TriplePattern(subject, predicate, obj))
                if self.tok.kind == "PUNCT" and self.tok.value == ",":
                    self._next()
                    continue
                break
            if self.tok.kind == "PUNCT" and self.tok.value == ";":
                self._next()
                if self.tok.kind == "PUNCT" and self.tok.value in (".", "}"):
                    break
                continue
            break
        return out

    def _verb(self) -> Var | Iri:
        if self.tok.kind == "WORD" and self.tok.value == "a":
            self._next()
            return Iri(RDF_TYPE)
        term = self._pattern_term(role="predicate")
        if isinstance(term, Literal):
            self._fail("a literal cannot be a predicate")
        return term

    def _resolve_pname(self, t: _Tok) -> Iri:
        for label, ns in reversed(self.prefixes):
            if label == t.value:
                return Iri(ns + t.extra)
        raise UnboundPrefixError(t.value, t.line, t.col)

    def _pattern_term(self, role: str) -> PatternTerm:
        t = self.tok
        if t.kind == "VAR":
            self._next()
            return Var(t.value)
        if t.kind == "IRIREF":
            self._next()
            return Iri(t.value)
        if t.kind == "PNAME":
            self._next()
            return self._resolve_pname(t)
        if role != "predicate" and t.kind in ("STRING", "INTEGER", "DECIMAL", "DOUBLE"):
            return self._literal()
        if role != "predicate" and t.kind == "WORD" and t.value in ("true", "false"):
            self._next()
            return Literal(t.value, XSD_BOOLEAN)
        self._reject_unsupported()
        self._fail(f"found {t.value or t.kind!r}", f"term as {role}")
        raise AssertionError  # unreachable

    def _literal(self) -> Literal:
        t = self._next()
        if t.kind == "INTEGER":
            return Literal(t.value, XSD_INTEGER)
        if t.kind == "DECIMAL":
            return Literal(t.value, XSD_DECIMAL)
        if t.kind == "DOUBLE":
            return Literal(t.value, XSD_DOUBLE)
        lexical = t.value
        if self.tok.kind == "LANGTAG":
            return Literal(lexical, RDF_LANG_STRING, self._next().value)
        if self.tok.kind == "PUNCT" and self.tok.value == "^^":
            self._next()
            dt = self.tok
            if dt.kind == "IRIREF":
                self._next()
                return Literal(lexical, dt.value)
            if dt.kind == "PNAME":
                self._next()
                return Literal(lexical, self._resolve_pname(dt).value)
            self._fail("expected datatype IRI after '^^'")
        return Literal(lexical, XSD_STRING)

    # expressions, precedence: && binds looser than comparisons

    def _expr(self) -> Expr:
        left = self._rel_expr()
        while self.tok.kind == "PUNCT" and self.tok.value == "&&":
            self._next()
            left = And(left, self._rel_expr())
        return left

    def _rel_expr(self) -> Expr:
        left = self._primary()
        if self.tok.kind == "PUNCT" and self.tok.value in ("=", "!=", "<", ">", "<=", ">="):
            op = self._next().value
            return Compare(op, left, self._primary())
        return left

    def _primary(self) -> Expr:
        t = self.tok
        if t.kind == "PUNCT" and t.value == "(":
            self._next()
            inner = self._expr()
            self._expect_punct(")")
            return inner
        if t.kind == "VAR":
            self._next()
            return Var(t.value)
        if t.kind == "WORD" and t.value.lower() == "strbefore":
            self._next()
            self._expect_punct("(")
            hay = self._expr()
            self._expect_punct(",")
            needle = self._expr()
            self._expect_punct(")")
            return StrBefore(hay, needle)
        if t.kind == "WORD" and t.value.lower() == "str":
            self._next()
            self._expect_punct("(")
            arg = self._expr()
            self._expect_punct(")")
            return Str(arg)
        if t.kind in ("STRING", "INTEGER", "DECIMAL", "DOUBLE") or (
            t.kind == "WORD" and t.value in ("true", "false")
        ):
            if t.kind == "WORD":
                self._next()
                return Const(Literal(t.value, XSD_BOOLEAN))
            return Const(self._literal())
        if t.kind == "IRIREF":
            self._next()
            return Const(Iri(t.value))
        if t.kind == "PNAME":
            self._next()
            return Const(self._resolve_pname(t))
        self._reject_unsupported()
        self._fail(f"found {t.value or t.kind!r}", "expression")
        raise AssertionError  # unreachable


def parse_query(text: str) -> QueryAst:
    return _QueryParser(text).parse()


# ---------------------------------------------------------------------------
# Pretty-printer. parse_query(print_query(ast)) == ast for subset ASTs.

def _fmt_iri(iri: Iri, prefixes: tuple[tuple[str, str], ...]) -> str:
    # dict() keeps the last binding of a label, mirroring resolution order
    for label, ns in dict(prefixes).items():
        if iri.value.startswith(ns):
            local = iri.value[len(ns) :]
            if re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_\-]*", local or ""):
                return f"{label}:{local}"
    return f"<{iri.value}>"


def _fmt_literal(lit: Literal) -> str:
    body = lit.lexical.replace("\\", "\\\\").replace('"', '\\"')
    body = body.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    if lit.lang:
        return f'"{body}"@{lit.lang}'
    if lit.datatype == XSD_STRING:
        return f'"{body}"'
    return f'"{body}"^^<{lit.datatype}>'


def _fmt_term(term: PatternTerm, prefixes) -> str:
    if isinstance(term, Var):
        return f"?{term.name}"
    if isinstance(term, Iri):
        return _fmt_iri(term, prefixes)
    return _fmt_literal(term)


def _fmt_expr(expr: Expr, prefixes) -> str:
    if isinstance(expr, Var):
        return f"?{expr.name}"
    if isinstance(expr, Const):
        return _fmt_term(expr.term, prefixes)
    if isinstance(expr, Str):
        return f"STR({_fmt_expr(expr.arg, prefixes)})"
    if isinstance(expr, StrBefore):
        return f"STRBEFORE({_fmt_expr(expr.haystack, prefixes)}, {_fmt_expr(expr.needle, prefixes)})"
    if isinstance(expr, Compare):
        lhs = _fmt_operand(expr.lhs, prefixes, parenthesize=(Compare, And))
        rhs = _fmt_operand(expr.rhs, prefixes, parenthesize=(Compare, And))
        return f"{lhs} {expr.op} {rhs}"
    if isinstance(expr, And):
        lhs = _fmt_expr(expr.lhs, prefixes)  # left-associative chain
        rhs = _fmt_operand(expr.rhs, prefixes, parenthesize=(And,))
        return f"{lhs} && {rhs}"
    raise TypeError(f"not an expression node: {expr!r}")


def _fmt_operand(expr: Expr, prefixes, parenthesize: tuple) -> str:
    body = _fmt_expr(expr, prefixes)
    return f"({body})" if isinstance(expr, parenthesize) else body


def print_query(ast: QueryAst) -> str:
    lines = [f"PREFIX {label}: <{ns}>" for label, ns in ast.prefixes]
    head = "SELECT " + ("DISTINCT " if ast.distinct else "")
    head += " ".join(f"?{name}" for name in ast.projection) + " WHERE {"
    lines.append(head)
    for p in ast.patterns:
        s = _fmt_term(p.subject, ast.prefixes)
        v = "a" if isinstance(p.predicate, Iri) and p.predicate.value == RDF_TYPE else _fmt_term(
            p.predicate, ast.prefixes
        )
        o = _fmt_term(p.object, ast.prefixes)
        lines.append(f"  {s} {v} {o} .")
    for b in ast.binds:
        lines.append(f"  BIND({_fmt_expr(b.expr, ast.prefixes)} AS ?{b.target.name}) .")
    for f in ast.filters:
        lines.append(f"  FILTER({_fmt_expr(f, ast.prefixes)}) .")
    lines.append("}")
    return "\n".join(lines) + "\n"
