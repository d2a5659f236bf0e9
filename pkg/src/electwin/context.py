"""Query execution plus the tabular context block for prompts.

The serialized block is the "enhanced context" a language model sees:
a TAB-separated header line, one line per row. Row order is sorted
lexicographically by cell sequence so equal stores and queries always
produce byte-equal blocks; evaluation order never leaks through.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rdf.store import Store
from .rdf.terms import BlankNode, Iri, Literal
from .sparql import evaluate, parse_query

DEFAULT_MAX_ROWS = 50
DEFAULT_MAX_CHARS = 8000


@dataclass(frozen=True)
class ContextTable:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    truncated: bool
    total_rows: int


def _cell(term) -> str:
    if term is None:
        return ""
    if isinstance(term, Iri):
        text = term.value
    elif isinstance(term, BlankNode):
        text = "_:" + term.label
    elif isinstance(term, Literal):
        text = term.lexical
    else:
        raise TypeError(f"not a term: {term!r}")
    # cells must not break the TAB/newline framing
    return text.replace("\t", " ").replace("\n", " ").replace("\r", " ")


def retrieve(store: Store, query_text: str, max_rows: int = DEFAULT_MAX_ROWS) -> ContextTable:
    """Run the query and shape the result into a deterministic table."""
    table = evaluate(store, parse_query(query_text))
    rendered = sorted(tuple(_cell(term) for term in row) for row in table.rows)
    total = len(rendered)
    kept = tuple(rendered[:max_rows])
    return ContextTable(
        header=tuple(table.variables),
        rows=kept,
        truncated=len(kept) < total,
        total_rows=total,
    )


def serialize(
    table: ContextTable,
    max_rows: int = DEFAULT_MAX_ROWS,
    max_chars: int = DEFAULT_MAX_CHARS,
) -> str:
    """Render the block. Rows drop from the end until both caps fit."""
    header_line = "\t".join(table.header)
    shown = list(table.rows[:max_rows])

    def assemble(rows: list[tuple[str, ...]]) -> str:
        lines = [header_line]
        lines.extend("\t".join(row) for row in rows)
        omitted = table.total_rows - len(rows)
        if omitted > 0:
            lines.append(f"... ({omitted} more rows omitted)")
        return "\n".join(lines)

    text = assemble(shown)
    while len(text) > max_chars and shown:
        shown.pop()
        text = assemble(shown)
    return text


def parse_context_block(text: str) -> tuple[tuple[str, ...], list[tuple[str, ...]]]:
    """Inverse of serialize for untruncated, well-formed blocks."""
    lines = text.split("\n")
    header = tuple(lines[0].split("\t"))
    rows = []
    for line in lines[1:]:
        if line.startswith("... (") and line.endswith(" more rows omitted)"):
            continue
        if line:
            rows.append(tuple(line.split("\t")))
    return header, rows
