"""End-to-end question answering over the knowledge graph.

ask() walks the whole chain: natural-language question -> intent match
-> query -> retrieval -> context block -> prompt -> backend answer, and
returns a QaTrace capturing every intermediate artifact plus per-stage
timings. Traces serialize to one JSON object per line ("v": 1) so a log
file can be replayed or audited later.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from typing import Mapping

from . import transform as transform_mod
from .context import (
    DEFAULT_MAX_CHARS,
    DEFAULT_MAX_ROWS,
    ContextTable,
    retrieve,
    serialize,
)
from .kg.build import get_load_profile
from .kg.records import NotFound
from .llm import AnswerRecord, BackendError, PromptBundle, generate, render_prompt
from .rdf.store import Store

TRACE_VERSION = 1

# Intents whose subject is a single house get the 24-hour profile attached.
_PROFILE_INTENTS = {"LoadProfileOfHouse"}


@dataclass(frozen=True)
class QaTrace:
    question: str
    mode: str
    backend_id: str
    answer: AnswerRecord
    intent_id: str | None = None
    slots: Mapping[str, str] = field(default_factory=dict)
    query_text: str | None = None
    context: ContextTable | None = None
    rendered_prompt: str = ""
    stage_timings: Mapping[str, float] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()


def trace_to_json(trace: QaTrace) -> dict:
    doc = {
        "v": TRACE_VERSION,
        "question": trace.question,
        "mode": trace.mode,
        "backendId": trace.backend_id,
        "intentId": trace.intent_id,
        "slots": dict(trace.slots),
        "queryText": trace.query_text,
        "contextTable": None,
        "renderedPrompt": trace.rendered_prompt,
        "answer": {
            "text": trace.answer.text,
            "backendId": trace.answer.backend_id,
            "latencyMs": trace.answer.latency_ms,
            "tokenUsage": trace.answer.token_usage,
        },
        "stageTimings": dict(trace.stage_timings),
        "warnings": list(trace.warnings),
    }
    if trace.context is not None:
        doc["contextTable"] = {
            "header": list(trace.context.header),
            "rows": [list(row) for row in trace.context.rows],
            "truncated": trace.context.truncated,
            "totalRows": trace.context.total_rows,
        }
    return doc


class AskBackendFailure(Exception):
    """The backend failed after the grounding stages already ran.

    Carries everything gathered up to the failure so callers can report
    a partial trace instead of losing the work.
    """

    def __init__(self, cause: BackendError, partial: dict):
        super().__init__(str(cause))
        self.cause = cause
        self.partial = partial


class TraceLog:
    """Append-only JSONL sink, safe to share across request threads."""

    def __init__(self, path):
        self._path = path
        self._lock = threading.Lock()

    def append(self, trace: QaTrace):
        line = json.dumps(trace_to_json(trace), ensure_ascii=False)
        with self._lock:
            with open(self._path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")


def ask(
    store: Store,
    question: str,
    backend,
    mode: str = "rag",
    *,
    max_rows: int = DEFAULT_MAX_ROWS,
    max_chars: int = DEFAULT_MAX_CHARS,
    catalog=None,
    trace_log: TraceLog | None = None,
) -> QaTrace:
    """Answer one question, recording what happened at every stage.

    In rag mode a question no intent matches is not an error: the
    backend still sees the bare question, and the trace carries a
    warning naming why grounding was skipped.
    """
    if mode not in ("rag", "nonRag"):
        raise ValueError(f"mode must be 'rag' or 'nonRag', got {mode!r}")
    warnings: list[str] = []
    intent_id: str | None = None
    slots: Mapping[str, str] = {}
    query_text: str | None = None
    table: ContextTable | None = None
    attachment = None

    t0 = time.perf_counter()
    if mode == "rag":
        outcome = transform_mod.transform(question, catalog=catalog)
        intent_id = outcome.intent_id
        slots = outcome.slots
        if outcome.matched:
            query_text = outcome.query_text
        else:
            warnings.append(outcome.diagnostic or "NoIntentMatched")
    t1 = time.perf_counter()

    if query_text is not None:
        table = retrieve(store, query_text, max_rows=max_rows)
        if intent_id in _PROFILE_INTENTS and "house" in slots:
            try:
                attachment = get_load_profile(store, slots["house"])
            except NotFound:
                warnings.append(f"NoLoadProfile: house {slots['house']!r} not in graph")
    t2 = time.perf_counter()

    if table is not None:
        bundle = PromptBundle(
            question=question,
            mode="rag",
            query_text=query_text,
            context_text=serialize(table, max_rows=max_rows, max_chars=max_chars),
            attachment=attachment,
            intent_id=intent_id,
            slots=dict(slots),
        )
    else:
        bundle = PromptBundle(question=question, mode="nonRag")
    rendered = render_prompt(bundle)
    t3 = time.perf_counter()

    try:
        answer = generate(backend, bundle)
    except BackendError as exc:
        partial = {
            "v": TRACE_VERSION,
            "question": question,
            "mode": mode,
            "backendId": getattr(backend, "id", "unknown"),
            "intentId": intent_id,
            "slots": dict(slots),
            "queryText": query_text,
            "contextTable": None
            if table is None
            else {
                "header": list(table.header),
                "rows": [list(row) for row in table.rows],
                "truncated": table.truncated,
                "totalRows": table.total_rows,
            },
            "renderedPrompt": rendered,
            "warnings": list(warnings),
        }
        raise AskBackendFailure(exc, partial) from exc
    t4 = time.perf_counter()

    # telescoping marks: the stage values sum to totalMs exactly
    timings = {
        "transformMs": (t1 - t0) * 1000.0,
        "retrieveMs": (t2 - t1) * 1000.0,
        "renderMs": (t3 - t2) * 1000.0,
        "generateMs": (t4 - t3) * 1000.0,
        "totalMs": (t4 - t0) * 1000.0,
    }
    trace = QaTrace(
        question=question,
        mode=mode,
        backend_id=getattr(backend, "id", "unknown"),
        answer=answer,
        intent_id=intent_id,
        slots=dict(slots),
        query_text=query_text,
        context=table,
        rendered_prompt=rendered,
        stage_timings=timings,
        warnings=tuple(warnings),
    )
    if trace_log is not None:
        trace_log.append(trace)
    return trace
