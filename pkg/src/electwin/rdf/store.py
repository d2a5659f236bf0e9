"""In-memory triple store with SPO/POS/OSP permutation indexes.

The store keeps set semantics over triples and serves `match` lookups
from whichever index covers the most bound slots. Nested dicts double as
insertion-ordered sets, so iteration order is deterministic for a given
load order (no hash-seed dependence).

Concurrency: a single mutex serializes writers and makes each read a
consistent snapshot, so a concurrent reader never observes a triple in
some indexes but not others. The intended workload is load-then-serve;
after loading completes the store is effectively immutable and safe to
share across request handlers.
"""

from __future__ import annotations

import threading
from typing import Iterator

from .terms import BlankNode, Iri, Literal, Term, Triple

# dict-of-dicts leaf values are insertion-ordered pseudo-sets: {key: None}
_Index = dict


class Store:
    def __init__(self) -> None:
        self._triples: dict[Triple, None] = {}
        self._spo: _Index = {}
        self._pos: _Index = {}
        self._osp: _Index = {}
        self._lock = threading.RLock()
        self._doc_count = 0

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(list(self._triples))

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def insert(self, t: Triple) -> bool:
        """Add one triple. Returns False iff it was already present."""
        if not isinstance(t, Triple):
            raise TypeError(f"expected Triple, got {type(t).__name__}")
        with self._lock:
            if t in self._triples:
                return False
            self._spo.setdefault(t.subject, {}).setdefault(t.predicate, {})[t.object] = None
            self._pos.setdefault(t.predicate, {}).setdefault(t.object, {})[t.subject] = None
            self._osp.setdefault(t.object, {}).setdefault(t.subject, {})[t.predicate] = None
            self._triples[t] = None
            return True

    def insert_all(self, triples) -> int:
        """Insert a batch; returns the number of triples actually added."""
        added = 0
        for t in triples:
            if self.insert(t):
                added += 1
        return added

    def match(
        self,
        s: Iri | BlankNode | None = None,
        p: Iri | None = None,
        o: Term | None = None,
    ) -> list[Triple]:
        """All triples whose bound slots equal the given terms.

        None is a wildcard. Result order follows insertion order of the
        index used; callers must not rely on any particular order.
        """
        with self._lock:
            if s is not None and p is not None and o is not None:
                t = Triple(s, p, o)
                return [t] if t in self._triples else []
            if s is not None and p is not None:
                objs = self._spo.get(s, {}).get(p, {})
                return [Triple(s, p, obj) for obj in objs]
            if p is not None and o is not None:
                subs = self._pos.get(p, {}).get(o, {})
                return [Triple(sub, p, o) for sub in subs]
            if o is not None and s is not None:
                preds = self._osp.get(o, {}).get(s, {})
                return [Triple(s, pred, o) for pred in preds]
            if s is not None:
                return [
                    Triple(s, pred, obj)
                    for pred, objs in self._spo.get(s, {}).items()
                    for obj in objs
                ]
            if p is not None:
                return [
                    Triple(sub, p, obj)
                    for obj, subs in self._pos.get(p, {}).items()
                    for sub in subs
                ]
            if o is not None:
                return [
                    Triple(sub, pred, o)
                    for sub, preds in self._osp.get(o, {}).items()
                    for pred in preds
                ]
            return list(self._triples)

    def subjects(self, p: Iri | None = None, o: Term | None = None) -> list[Iri | BlankNode]:
        """Distinct subjects of triples matching (?, p, o)."""
        seen: dict = {}
        for t in self.match(None, p, o):
            seen[t.subject] = None
        return list(seen)

    def load_turtle(self, document: str) -> int:
        """Parse a Turtle/N-Triples document and insert its triples.

        All-or-nothing: a parse error leaves the store unchanged. Returns
        the number of distinct triples added. Blank-node labels are
        renamed with a per-document suffix when they would collide with
        blank labels already present (labels from a document loaded into
        a blank-free store are kept verbatim, so load -> serialize ->
        load is a fixpoint).
        """
        from .turtle import parse_turtle  # local import to avoid a cycle

        triples = parse_turtle(document)
        with self._lock:
            self._doc_count += 1
            triples = self._rename_blanks(triples)
            return self.insert_all(triples)

    def _rename_blanks(self, triples: list[Triple]) -> list[Triple]:
        existing = {
            term.label
            for t in self._triples
            for term in (t.subject, t.object)
            if isinstance(term, BlankNode)
        }
        doc_labels = {
            term.label
            for t in triples
            for term in (t.subject, t.object)
            if isinstance(term, BlankNode)
        }
        if not existing or not doc_labels:
            return triples
        n = self._doc_count
        while any(f"{label}.d{n}" in existing for label in doc_labels):
            n += 1
        mapping = {label: BlankNode(f"{label}.d{n}") for label in doc_labels}

        def rename(term: Term) -> Term:
            if isinstance(term, BlankNode):
                return mapping[term.label]
            return term

        return [
            Triple(rename(t.subject), t.predicate, rename(t.object))  # type: ignore[arg-type]
            for t in triples
        ]
