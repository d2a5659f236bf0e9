"""Benchmark harness: grounded vs ungrounded answers, scored by mentions.

The suite runs each prompt case through the pipeline twice per backend
(with and without retrieval), extracts dataset-name mentions from the
answer text, and scores them against the ground truth the reference
query computes from the live graph. Canned transcripts in the packaged
suite file let all of this run without network access.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

from . import pipeline
from .llm import ScriptedMockBackend
from .rdf.store import Store
from .rdf.terms import Literal
from .sparql import evaluate, parse_query

MODES = ("nonRag", "rag")


class SuiteConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PromptCase:
    id: str
    question: str
    reference_query: str
    variants: Mapping[str, str] = field(default_factory=dict)
    notes: str = ""

    def question_for(self, backend_id: str) -> str:
        return self.variants.get(backend_id, self.question)


@dataclass(frozen=True)
class EvalRow:
    case_id: str
    backend_id: str
    mode: str
    question: str
    answer_text: str | None
    mentions: tuple[str, ...]
    truth: tuple[str, ...]
    true_positives: int
    precision: float | None
    recall: float | None
    overlap_with_other_mode: int | None
    error: str | None


def load_suite(path=None) -> dict:
    if path is None:
        text = resources.files("electwin.data").joinpath("eval_suite.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    doc = json.loads(text)
    if doc.get("version") != 1:
        raise SuiteConfigError(f"unsupported suite version {doc.get('version')!r}")
    return doc


def cases_from_suite(doc: dict) -> tuple[PromptCase, ...]:
    cases = []
    for raw in doc["cases"]:
        cases.append(
            PromptCase(
                id=raw["id"],
                question=raw["question"],
                reference_query=raw["referenceQuery"],
                variants=dict(raw.get("variants", {})),
                notes=raw.get("notes", ""),
            )
        )
    if len({c.id for c in cases}) != len(cases):
        raise SuiteConfigError("case ids must be unique")
    return tuple(cases)


def scripted_backends_from_suite(doc: dict) -> dict[str, ScriptedMockBackend]:
    """Build one replay backend per transcript set in the suite file."""
    cases = {c.id: c for c in cases_from_suite(doc)}
    backends = {}
    for backend_id, by_case in doc.get("scriptedBackends", {}).items():
        replies: dict[str, dict[str, str]] = {}
        for case_id, by_mode in by_case.items():
            if case_id not in cases:
                raise SuiteConfigError(
                    f"backend {backend_id!r} references unknown case {case_id!r}"
                )
            question = cases[case_id].question_for(backend_id)
            replies.setdefault(question, {}).update(by_mode)
        backends[backend_id] = ScriptedMockBackend(replies=replies, backend_id=backend_id)
    return backends


def ground_truth(store: Store, case: PromptCase) -> frozenset[str]:
    """Distinct values of the ?prefix column of the reference query."""
    table = evaluate(store, parse_query(case.reference_query))
    try:
        col = table.variables.index("prefix")
    except ValueError:
        raise SuiteConfigError(
            f"case {case.id!r}: reference query does not project ?prefix"
        ) from None
    names = set()
    for row in table.rows:
        term = row[col]
        if isinstance(term, Literal):
            names.add(term.lexical)
    return frozenset(names)


def extract_mentions(text: str, lexicon: Mapping[str, Iterable[str]]) -> frozenset[str]:
    """Canonical lexicon names mentioned in the text.

    Matching is token-bounded: a name counts only when not flanked by
    letters or digits, so REFIT is found inside "REFIT_1" but not inside
    "PREFIT". All-uppercase entries are acronyms and must match case
    exactly (the word "need" is not the NEED dataset); other entries
    match case-insensitively.
    """
    found = set()
    for canonical, aliases in lexicon.items():
        for name in (canonical, *aliases):
            flags = 0 if name.isupper() else re.IGNORECASE
            pattern = rf"(?<![A-Za-z0-9]){re.escape(name)}(?![A-Za-z0-9])"
            if re.search(pattern, text, flags):
                found.add(canonical)
                break
    return frozenset(found)


def _score(mentions: frozenset[str], truth: frozenset[str]) -> tuple[int, float | None, float | None]:
    tp = len(mentions & truth)
    precision = tp / len(mentions) if mentions else None
    recall = tp / len(truth) if truth else None
    return tp, precision, recall


def run_suite(
    store: Store,
    cases: Iterable[PromptCase],
    backends: Mapping[str, object],
    lexicon: Mapping[str, Iterable[str]],
    modes: Iterable[str] = MODES,
    *,
    trace_log: pipeline.TraceLog | None = None,
) -> dict:
    """Run every (case, backend, mode) cell; failures stay in their cell."""
    modes = tuple(modes)
    for mode in modes:
        if mode not in MODES:
            raise SuiteConfigError(f"unknown mode {mode!r}")
    rows: list[EvalRow] = []
    for case in cases:
        truth = ground_truth(store, case)
        for backend_id, backend in backends.items():
            question = case.question_for(backend_id)
            by_mode: dict[str, frozenset[str] | None] = {}
            cells: dict[str, EvalRow] = {}
            covers = getattr(backend, "covers", None)
            for mode in modes:
                if covers is not None and not covers(question, mode):
                    continue  # replay backend has no transcript for this cell
                try:
                    trace = pipeline.ask(
                        store, question, backend, mode=mode, trace_log=trace_log
                    )
                    mentions = extract_mentions(trace.answer.text, lexicon)
                    tp, precision, recall = _score(mentions, truth)
                    cells[mode] = EvalRow(
                        case_id=case.id,
                        backend_id=backend_id,
                        mode=mode,
                        question=question,
                        answer_text=trace.answer.text,
                        mentions=tuple(sorted(mentions)),
                        truth=tuple(sorted(truth)),
                        true_positives=tp,
                        precision=precision,
                        recall=recall,
                        overlap_with_other_mode=None,
                        error=None,
                    )
                    by_mode[mode] = mentions
                except Exception as exc:  # a broken cell must not sink the run
                    cells[mode] = EvalRow(
                        case_id=case.id,
                        backend_id=backend_id,
                        mode=mode,
                        question=question,
                        answer_text=None,
                        mentions=(),
                        truth=tuple(sorted(truth)),
                        true_positives=0,
                        precision=None,
                        recall=None,
                        overlap_with_other_mode=None,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                    by_mode[mode] = None
            overlap = None
            if len(cells) == 2 and all(m is not None for m in by_mode.values()):
                first, second = (by_mode[m] for m in cells)
                overlap = len(first & second)
            for mode in modes:
                if mode not in cells:
                    continue
                row = cells[mode]
                rows.append(
                    EvalRow(**{**row.__dict__, "overlap_with_other_mode": overlap})
                )
    return report_from_rows(rows)


def report_from_rows(rows: list[EvalRow]) -> dict:
    errors = sum(1 for row in rows if row.error is not None)
    return {
        "version": 1,
        "summary": {
            "rows": len(rows),
            "errors": errors,
            "backends": sorted({row.backend_id for row in rows}),
            "cases": sorted({row.case_id for row in rows}),
        },
        "rows": [
            {
                "caseId": row.case_id,
                "backendId": row.backend_id,
                "mode": row.mode,
                "question": row.question,
                "answerText": row.answer_text,
                "mentions": list(row.mentions),
                "truth": list(row.truth),
                "truePositives": row.true_positives,
                "precision": row.precision,
                "recall": row.recall,
                "overlapWithOtherMode": row.overlap_with_other_mode,
                "error": row.error,
            }
            for row in rows
        ],
    }


def render_report_table(report: dict) -> str:
    """Plain-text summary table, one line per (case, backend, mode)."""
    header = ("case", "backend", "mode", "mentions", "tp", "truth", "overlap", "error")
    body = []
    for row in report["rows"]:
        body.append(
            (
                row["caseId"],
                row["backendId"],
                row["mode"],
                ",".join(row["mentions"]) or "-",
                str(row["truePositives"]),
                str(len(row["truth"])),
                "-" if row["overlapWithOtherMode"] is None else str(row["overlapWithOtherMode"]),
                row["error"] or "-",
            )
        )
    widths = [max(len(header[i]), *(len(r[i]) for r in body)) if body else len(header[i]) for i in range(len(header))]
    lines = [
        "  ".join(header[i].ljust(widths[i]) for i in range(len(header))),
        "  ".join("-" * widths[i] for i in range(len(header))),
    ]
    for r in body:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(header))))
    return "\n".join(lines)
