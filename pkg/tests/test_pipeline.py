import json

import pytest

from electwin.llm import (
    AnswerRecord,
    BackendTimeout,
    ExtractiveMockBackend,
    PromptBundle,
    ScriptedMockBackend,
)
from electwin.pipeline import TRACE_VERSION, AskBackendFailure, TraceLog, ask, trace_to_json

from conftest import GROUNDED_P1_ANSWER, PROMPT_1, PROMPT_4


def test_rag_trace_carries_every_stage(seed):
    trace = ask(seed, PROMPT_1, ExtractiveMockBackend())
    assert trace.mode == "rag"
    assert trace.intent_id == "DatasetsByCountry"
    assert trace.slots == {"country": "United Kingdom"}
    assert trace.query_text and "SELECT" in trace.query_text
    assert trace.context.header == ("prefix", "countryName")
    assert trace.context.rows == (
        ("IDEAL", "United Kingdom"),
        ("REFIT", "United Kingdom"),
        ("UKDALE", "United Kingdom"),
    )
    assert trace.rendered_prompt.startswith("Question:\n")
    assert trace.answer.text == GROUNDED_P1_ANSWER
    assert trace.warnings == ()


def test_nonrag_skips_grounding(seed):
    trace = ask(seed, PROMPT_1, ExtractiveMockBackend(), mode="nonRag")
    assert trace.intent_id is None
    assert trace.query_text is None
    assert trace.context is None
    assert trace.rendered_prompt == PROMPT_1
    assert trace.stage_timings["retrieveMs"] >= 0


def test_unmatched_question_falls_back_with_warning(seed):
    backend = ScriptedMockBackend(default="beats me")
    trace = ask(seed, "What's the airspeed of an unladen swallow?", backend)
    assert trace.mode == "rag"  # requested mode is kept in the trace
    assert trace.query_text is None and trace.context is None
    assert trace.warnings == ("NoIntentMatched",)
    assert trace.rendered_prompt == "What's the airspeed of an unladen swallow?"
    assert trace.answer.text == "beats me"


def test_stage_timings_telescope_exactly(seed):
    trace = ask(seed, PROMPT_1, ExtractiveMockBackend())
    t = trace.stage_timings
    assert set(t) == {"transformMs", "retrieveMs", "renderMs", "generateMs", "totalMs"}
    assert t["transformMs"] + t["retrieveMs"] + t["renderMs"] + t["generateMs"] == t["totalMs"]
    assert all(v >= 0 for v in t.values())


def test_profile_attachment_for_load_profile_intent(seed):
    trace = ask(seed, PROMPT_4, ExtractiveMockBackend())
    assert trace.intent_id == "LoadProfileOfHouse"
    _, _, profile_part = trace.rendered_prompt.partition("\n\nLoad Profile:\n")
    assert profile_part
    assert len(profile_part.split("\n")) == 24
    assert trace.warnings == ()


def test_missing_profile_warns_but_answers(seed):
    backend = ScriptedMockBackend(default="cannot say")
    trace = ask(seed, "Can you explain the load profile of GHOST_7?", backend)
    assert trace.warnings == ("NoLoadProfile: house 'GHOST_7' not in graph",)
    assert "Load Profile:" not in trace.rendered_prompt
    # the context table ran and is simply empty
    assert trace.context is not None and trace.context.rows == ()


def test_invalid_mode_rejected(seed):
    with pytest.raises(ValueError):
        ask(seed, PROMPT_1, ExtractiveMockBackend(), mode="grounded")


def test_backend_failure_carries_partial_trace(seed):
    class Failing:
        id = "flaky"

        def complete(self, bundle):
            raise BackendTimeout(30)

    with pytest.raises(AskBackendFailure) as info:
        ask(seed, PROMPT_1, Failing())
    partial = info.value.partial
    assert isinstance(info.value.cause, BackendTimeout)
    assert partial["v"] == TRACE_VERSION
    assert partial["backendId"] == "flaky"
    assert partial["intentId"] == "DatasetsByCountry"
    assert partial["contextTable"]["totalRows"] == 3
    assert partial["renderedPrompt"].startswith("Question:\n")
    assert "answer" not in partial


def test_trace_json_shape(seed):
    trace = ask(seed, PROMPT_1, ExtractiveMockBackend())
    doc = trace_to_json(trace)
    assert doc["v"] == TRACE_VERSION
    assert doc["backendId"] == "extractive-mock"
    assert doc["intentId"] == "DatasetsByCountry"
    assert doc["slots"] == {"country": "United Kingdom"}
    assert doc["contextTable"] == {
        "header": ["prefix", "countryName"],
        "rows": [
            ["IDEAL", "United Kingdom"],
            ["REFIT", "United Kingdom"],
            ["UKDALE", "United Kingdom"],
        ],
        "truncated": False,
        "totalRows": 3,
    }
    assert doc["answer"]["text"] == GROUNDED_P1_ANSWER
    assert doc["answer"]["tokenUsage"] is None
    assert json.loads(json.dumps(doc)) == doc


def test_nonrag_trace_json_has_null_context(seed):
    doc = trace_to_json(ask(seed, PROMPT_1, ExtractiveMockBackend(), mode="nonRag"))
    assert doc["contextTable"] is None
    assert doc["queryText"] is None


def test_trace_log_appends_jsonl(seed, tmp_path):
    log_path = tmp_path / "traces.jsonl"
    log = TraceLog(log_path)
    ask(seed, PROMPT_1, ExtractiveMockBackend(), trace_log=log)
    ask(seed, PROMPT_1, ExtractiveMockBackend(), mode="nonRag", trace_log=log)
    lines = log_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    docs = [json.loads(line) for line in lines]
    assert all(d["v"] == 1 for d in docs)
    assert docs[0]["mode"] == "rag"
    assert docs[1]["mode"] == "nonRag"


def test_context_caps_flow_through(seed):
    trace = ask(seed, "Which datasets have houses?", ExtractiveMockBackend(), mode="nonRag")
    assert trace.context is None  # sanity: nonRag never retrieves

    backend = ExtractiveMockBackend()
    capped = ask(seed, PROMPT_1, backend, max_rows=2)
    assert capped.context.truncated is True
    assert len(capped.context.rows) == 2
    assert "... (1 more rows omitted)" in capped.rendered_prompt
