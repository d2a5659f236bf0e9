"""Turtle subset parser and serializer (N-Triples is a subset of it).

Supported: prefix directives (@prefix and SPARQL-style PREFIX), IRIs,
prefixed names, plain/typed/language literals, numeric and boolean
shorthand, the `a` keyword, predicate-object lists, object lists, and
labeled blank nodes. Everything else (collections, anonymous blank
nodes, quoted triples, @base, multi-line strings) raises
UnsupportedFeatureError. See docs/turtle-subset.md for the conformance
fixture list.

Parsing is all-or-nothing: any error is raised before any triple is
returned.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import (
    RDF_LANG_STRING,
    RDF_NS,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Term,
    Triple,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, token: str | None = None):
        self.line = line
        self.column = column
        self.token = token
        at = f" at {token!r}" if token else ""
        super().__init__(f"line {line}, column {column}: {message}{at}")


class UnsupportedFeatureError(ParseError):
    pass


@dataclass
class _Token:
    kind: str  # IRIREF PNAME BLANK STRING INTEGER DECIMAL DOUBLE WORD LANGTAG ATPREFIX PUNCT EOF
    value: str
    line: int
    column: int
    extra: str = ""  # PNAME local part


_PN_PREFIX = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_PN_LOCAL = re.compile(r"[A-Za-z0-9_]([A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?")
_BLANK_LABEL = re.compile(r"[A-Za-z0-9_]([A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?")
_NUMBER = re.compile(r"[+-]?(\d+\.\d*([eE][+-]?\d+)?|\.?\d+([eE][+-]?\d+)?)")
_LANGTAG_BODY = re.compile(r"[A-Za-z]+(-[A-Za-z0-9]+)*")
_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, token: str | None = None) -> ParseError:
        return ParseError(message, self.line, self.col, token)

    def unsupported(self, message: str, token: str | None = None) -> ParseError:
        return UnsupportedFeatureError(message, self.line, self.col, token)

    def _advance(self, n: int) -> None:
        chunk = self.text[self.pos : self.pos + n]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = n - chunk.rfind("\n")
        else:
            self.col += n
        self.pos += n

    def _skip_ws(self) -> None:
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c in " \t\r\n":
                self._advance(1)
            elif c == "#":
                end = self.text.find("\n", self.pos)
                self._advance((end if end != -1 else len(self.text)) - self.pos)
            else:
                return

    def next_token(self) -> _Token:
        self._skip_ws()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return _Token("EOF", "", line, col)
        text, pos = self.text, self.pos
        c = text[pos]

        if c == "<":
            if text.startswith("<<", pos):
                raise self.unsupported("quoted triples are not supported", "<<")
            return self._iriref(line, col)
        if c == '"':
            if text.startswith('"""', pos):
                raise self.unsupported("multi-line strings are not supported", '"""')
            return self._string(line, col)
        if c == "'":
            raise self.error("single-quoted strings are not supported; use double quotes", "'")
        if c == "(":
            raise self.unsupported("RDF collections are not supported", "(")
        if c == "[":
            raise self.unsupported("anonymous blank nodes are not supported", "[")
        if text.startswith("_:", pos):
            m = _BLANK_LABEL.match(text, pos + 2)
            if not m:
                raise self.error("malformed blank node label", text[pos : pos + 3])
            self._advance(2 + len(m.group(0)))
            return _Token("BLANK", m.group(0), line, col)
        if c == "@":
            m = _LANGTAG_BODY.match(text, pos + 1)
            if not m:
                raise self.error("malformed @ directive or language tag", "@")
            word = m.group(0)
            self._advance(1 + len(word))
            if word == "prefix":
                return _Token("ATPREFIX", "@prefix", line, col)
            if word == "base":
                raise self.unsupported("@base is not supported", "@base")
            return _Token("LANGTAG", word, line, col)
        if text.startswith("^^", pos):
            self._advance(2)
            return _Token("PUNCT", "^^", line, col)
        if c in ".;,":
            # Distinguish a statement dot from a leading-dot decimal (.5)
            if c == "." and pos + 1 < len(text) and text[pos + 1].isdigit():
                return self._number(line, col)
            self._advance(1)
            return _Token("PUNCT", c, line, col)
        if c.isdigit() or (c in "+-" and pos + 1 < len(text) and text[pos + 1] in "0123456789."):
            return self._number(line, col)

        m = _PN_PREFIX.match(text, pos)
        if m or c == ":":
            prefix = m.group(0) if m else ""
            after = pos + len(prefix)
            if after < len(text) and text[after] == ":":
                lm = _PN_LOCAL.match(text, after + 1)
                local = lm.group(0) if lm else ""
                self._advance(len(prefix) + 1 + len(local))
                return _Token("PNAME", prefix, line, col, extra=local)
            if m:
                self._advance(len(prefix))
                return _Token("WORD", prefix, line, col)
        raise self.error("unexpected character", c)

    def _iriref(self, line: int, col: int) -> _Token:
        out: list[str] = []
        i = self.pos + 1
        text = self.text
        while i < len(text):
            c = text[i]
            if c == ">":
                self._advance(i + 1 - self.pos)
                return _Token("IRIREF", "".join(out), line, col)
            if c == "\\":
                seq = text[i + 1 : i + 2]
                if seq == "u":
                    out.append(chr(int(text[i + 2 : i + 6], 16)))
                    i += 6
                    continue
                if seq == "U":
                    out.append(chr(int(text[i + 2 : i + 10], 16)))
                    i += 10
                    continue
                raise self.error("invalid escape in IRI", "\\" + seq)
            if c in ' \t\n\r"{}|^`<':
                raise self.error("invalid character in IRI", c)
            out.append(c)
            i += 1
        raise self.error("unterminated IRI")

    def _string(self, line: int, col: int) -> _Token:
        out: list[str] = []
        i = self.pos + 1
        text = self.text
        while i < len(text):
            c = text[i]
            if c == '"':
                self._advance(i + 1 - self.pos)
                return _Token("STRING", "".join(out), line, col)
            if c == "\\":
                seq = text[i + 1 : i + 2]
                if seq in _STRING_ESCAPES:
                    out.append(_STRING_ESCAPES[seq])
                    i += 2
                    continue
                if seq == "u":
                    try:
                        out.append(chr(int(text[i + 2 : i + 6], 16)))
                    except ValueError:
                        raise self.error("invalid \\u escape", text[i : i + 6]) from None
                    i += 6
                    continue
                if seq == "U":
                    try:
                        out.append(chr(int(text[i + 2 : i + 10], 16)))
                    except ValueError:
                        raise self.error("invalid \\U escape", text[i : i + 10]) from None
                    i += 10
                    continue
                raise self.error("invalid string escape", "\\" + seq)
            if c in "\n\r":
                raise self.error("newline inside single-line string")
            out.append(c)
            i += 1
        raise self.error("unterminated string")

    def _number(self, line: int, col: int) -> _Token:
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            raise self.error("malformed numeric literal", self.text[self.pos])
        lit = m.group(0)
        self._advance(len(lit))
        if "e" in lit or "E" in lit:
            kind = "DOUBLE"
        elif "." in lit:
            kind = "DECIMAL"
        else:
            kind = "INTEGER"
        return _Token(kind, lit, line, col)


class _Parser:
    def __init__(self, text: str):
        self.lexer = _Lexer(text)
        self.tok = self.lexer.next_token()
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []

    def _fail(self, message: str) -> ParseError:
        return ParseError(message, self.tok.line, self.tok.column, self.tok.value or self.tok.kind)

    def _next(self) -> _Token:
        tok = self.tok
        self.tok = self.lexer.next_token()
        return tok

    def _expect_punct(self, value: str) -> None:
        if self.tok.kind != "PUNCT" or self.tok.value != value:
            raise self._fail(f"expected {value!r}")
        self._next()

    def parse(self) -> list[Triple]:
        while self.tok.kind != "EOF":
            if self.tok.kind == "ATPREFIX":
                self._next()
                self._prefix_directive(require_dot=True)
            elif self.tok.kind == "WORD" and self.tok.value.lower() == "prefix":
                self._next()
                self._prefix_directive(require_dot=False)
            elif self.tok.kind == "WORD" and self.tok.value.lower() == "base":
                raise UnsupportedFeatureError(
                    "BASE is not supported", self.tok.line, self.tok.column, self.tok.value
                )
            else:
                self._triples_statement()
        return self.triples

    def _prefix_directive(self, require_dot: bool) -> None:
        if self.tok.kind != "PNAME" or self.tok.extra:
            raise self._fail("expected prefix label ending in ':'")
        label = self._next().value
        if self.tok.kind != "IRIREF":
            raise self._fail("expected namespace IRI")
        self.prefixes[label] = self._next().value
        if require_dot:
            self._expect_punct(".")
        elif self.tok.kind == "PUNCT" and self.tok.value == ".":
            # Tolerate the Turtle-style terminating dot after PREFIX too.
            self._next()

    def _triples_statement(self) -> None:
        subject = self._subject()
        self._predicate_object_list(subject)
        self._expect_punct(".")

    def _predicate_object_list(self, subject: Iri | BlankNode) -> None:
        while True:
            predicate = self._verb()
            while True:
                obj = self._object()
                self.triples.append(Triple(subject, predicate, obj))
                if self.tok.kind == "PUNCT" and self.tok.value == ",":
                    self._next()
                    continue
                break
            if self.tok.kind == "PUNCT" and self.tok.value == ";":
                while self.tok.kind == "PUNCT" and self.tok.value == ";":
                    self._next()
                # Trailing semicolons before the dot are legal.
                if self.tok.kind == "PUNCT" and self.tok.value == ".":
                    return
                continue
            return

    def _subject(self) -> Iri | BlankNode:
        term = self._term(allow_literal=False)
        assert isinstance(term, (Iri, BlankNode))
        return term

    def _verb(self) -> Iri:
        if self.tok.kind == "WORD" and self.tok.value == "a":
            self._next()
            return Iri(RDF_TYPE)
        term = self._term(allow_literal=False, role="predicate")
        if not isinstance(term, Iri):
            raise self._fail("predicate must be an IRI")
        return term

    def _object(self) -> Term:
        return self._term(allow_literal=True)

    def _resolve_pname(self, tok: _Token) -> Iri:
        if tok.value not in self.prefixes:
            raise ParseError(
                f"undeclared prefix {tok.value + ':'!r}", tok.line, tok.column, tok.value + ":"
            )
        try:
            return Iri(self.prefixes[tok.value] + tok.extra)
        except ValueError as exc:
            raise ParseError(str(exc), tok.line, tok.column) from None

    def _term(self, allow_literal: bool, role: str = "term") -> Term:
        tok = self.tok
        if tok.kind == "IRIREF":
            self._next()
            try:
                return Iri(tok.value)
            except ValueError as exc:
                raise ParseError(str(exc), tok.line, tok.column) from None
        if tok.kind == "PNAME":
            self._next()
            return self._resolve_pname(tok)
        if tok.kind == "BLANK":
            if role == "predicate":
                raise self._fail("predicate must be an IRI")
            self._next()
            return BlankNode(tok.value)
        if not allow_literal:
            raise self._fail(f"expected IRI or blank node as {role}")
        if tok.kind == "STRING":
            self._next()
            return self._literal_suffix(tok.value)
        if tok.kind == "INTEGER":
            self._next()
            return Literal(tok.value, XSD_INTEGER)
        if tok.kind == "DECIMAL":
            self._next()
            return Literal(tok.value, XSD_DECIMAL)
        if tok.kind == "DOUBLE":
            self._next()
            return Literal(tok.value, XSD_DOUBLE)
        if tok.kind == "WORD" and tok.value in ("true", "false"):
            self._next()
            return Literal(tok.value, XSD_BOOLEAN)
        raise self._fail("expected term")

    def _literal_suffix(self, lexical: str) -> Literal:
        if self.tok.kind == "LANGTAG":
            lang = self._next().value
            return Literal(lexical, RDF_LANG_STRING, lang)
        if self.tok.kind == "PUNCT" and self.tok.value == "^^":
            self._next()
            tok = self.tok
            if tok.kind == "IRIREF":
                self._next()
                return Literal(lexical, tok.value)
            if tok.kind == "PNAME":
                self._next()
                return Literal(lexical, self._resolve_pname(tok).value)
            raise self._fail("expected datatype IRI after '^^'")
        return Literal(lexical, XSD_STRING)


def parse_turtle(document: str) -> list[Triple]:
    """Parse a Turtle (or N-Triples) document into a triple list."""
    return _Parser(document).parse()


# ---------------------------------------------------------------------------
# Serialization

_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_SAFE_LOCAL = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")
_STRING_REVERSE = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_iri(value: str) -> str:
    return _IRI_FORBIDDEN.sub(lambda m: "\\u%04X" % ord(m.group(0)), value)


def _escape_string(value: str) -> str:
    out = []
    for c in value:
        if c in _STRING_REVERSE:
            out.append(_STRING_REVERSE[c])
        elif ord(c) < 0x20:
            out.append("\\u%04X" % ord(c))
        else:
            out.append(c)
    return "".join(out)


def _format_term(term: Term, prefixes: dict[str, str]) -> str:
    if isinstance(term, Iri):
        for label, ns in prefixes.items():
            if term.value.startswith(ns):
                local = term.value[len(ns) :]
                if _SAFE_LOCAL.match(local):
                    return f"{label}:{local}"
        return f"<{_escape_iri(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    lex = _escape_string(term.lexical)
    if term.lang:
        return f'"{lex}"@{term.lang}'
    if term.datatype == XSD_STRING:
        return f'"{lex}"'
    return f'"{lex}"^^{_format_term(Iri(term.datatype), prefixes)}'


def serialize_turtle(triples, prefixes: dict[str, str] | None = None) -> str:
    """Deterministic Turtle: sorted subjects, grouped predicate lists."""
    prefixes = dict(prefixes or {})
    lines = [f"@prefix {label}: <{_escape_iri(ns)}> ." for label, ns in sorted(prefixes.items())]
    if lines:
        lines.append("")

    by_subject: dict = {}
    for t in sorted(triples, key=Triple.sort_key):
        by_subject.setdefault(t.subject, []).append(t)

    for subject, group in by_subject.items():
        subj = _format_term(subject, prefixes)
        parts = []
        # rdf:type first, as `a`
        typed = [t for t in group if t.predicate.value == RDF_TYPE]
        rest = [t for t in group if t.predicate.value != RDF_TYPE]
        if typed:
            objs = ", ".join(_format_term(t.object, prefixes) for t in typed)
            parts.append(f"a {objs}")
        current_pred = None
        objs_acc: list[str] = []
        for t in rest:
            if t.predicate != current_pred:
                if objs_acc:
                    parts.append(
                        f"{_format_term(current_pred, prefixes)} {', '.join(objs_acc)}"
                    )
                current_pred = t.predicate
                objs_acc = []
            objs_acc.append(_format_term(t.object, prefixes))
        if objs_acc:
            parts.append(f"{_format_term(current_pred, prefixes)} {', '.join(objs_acc)}")
        sep = " ;\n    "
        lines.append(f"{subj} {sep.join(parts)} .")
    return "\n".join(lines) + "\n"
