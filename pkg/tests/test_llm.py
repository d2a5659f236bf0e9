import json
import threading
import time
from decimal import Decimal

import httpx
import pytest

from electwin.kg.records import LoadProfile
from electwin.llm import (
    EMPTY_CONTEXT_ANSWER,
    NO_CONTEXT_ANSWER,
    AnswerRecord,
    BackendHttpError,
    BackendTimeout,
    ExtractiveMockBackend,
    LlmConfig,
    MalformedResponse,
    MissingApiKey,
    PromptBundle,
    RemoteChatBackend,
    ScriptedMockBackend,
    generate,
    render_prompt,
)

from conftest import GROUNDED_P1_ANSWER, PROMPT_1


def rag_bundle(**overrides):
    base = dict(
        question="q?",
        mode="rag",
        query_text="SELECT ?v WHERE { ?s <https://p.example/v> ?v . }",
        context_text="prefix\nREFIT",
    )
    base.update(overrides)
    return PromptBundle(**base)


# ---- bundle invariants ----


def test_rag_bundle_requires_query_and_context():
    with pytest.raises(ValueError):
        PromptBundle(question="q?", mode="rag", query_text="SELECT...")
    with pytest.raises(ValueError):
        PromptBundle(question="q?", mode="rag", context_text="v\n1")


def test_nonrag_bundle_forbids_grounding():
    with pytest.raises(ValueError):
        PromptBundle(question="q?", mode="nonRag", query_text="SELECT...", context_text="v")


def test_bundle_rejects_blank_question_and_bad_mode():
    with pytest.raises(ValueError):
        PromptBundle(question="   ")
    with pytest.raises(ValueError):
        PromptBundle(question="q?", mode="RAG")


# ---- prompt rendering ----


def test_nonrag_prompt_is_bare_question():
    assert render_prompt(PromptBundle(question="What now?")) == "What now?"


def test_rag_prompt_layout():
    bundle = rag_bundle(question="Q", query_text="SELECT", context_text="v\n1")
    assert render_prompt(bundle) == (
        "Question:\nQ\n\nQuery:\nSELECT\n\nEnhanced Context:\nv\n1"
    )


def test_rag_prompt_with_profile_attachment():
    profile = LoadProfile(
        "REFIT_1", tuple(Decimal(f"0.{i:02d}1") for i in range(1, 25))
    )
    text = render_prompt(rag_bundle(attachment=profile))
    head, _, profile_part = text.partition("\n\nLoad Profile:\n")
    assert profile_part, "profile section missing"
    lines = profile_part.split("\n")
    assert len(lines) == 24
    assert lines[0] == "0,0.011"
    assert lines[23] == "23,0.241"


# ---- scripted mock ----


def test_scripted_mock_keys_on_question_and_mode():
    backend = ScriptedMockBackend(
        {"q?": {"rag": "grounded", "nonRag": "from memory"}}, backend_id="replay"
    )
    assert backend.covers("q?", "rag")
    assert not backend.covers("other?", "rag")
    got = backend.complete(rag_bundle(question="q?"))
    assert got.text == "grounded"
    assert got.backend_id == "replay"
    assert backend.complete(PromptBundle(question="q?")).text == "from memory"


def test_scripted_mock_without_transcript_errors():
    backend = ScriptedMockBackend({"q?": {"rag": "grounded"}})
    with pytest.raises(MalformedResponse):
        backend.complete(PromptBundle(question="q?"))


def test_scripted_mock_default_covers_everything():
    backend = ScriptedMockBackend(default="whatever")
    assert backend.covers("anything", "rag")
    assert backend.complete(PromptBundle(question="anything")).text == "whatever"


# ---- extractive mock ----


def test_extractive_answer_is_byte_exact_for_country_intent():
    context = "prefix\tcountryName\nIDEAL\tUnited Kingdom\nREFIT\tUnited Kingdom\nUKDALE\tUnited Kingdom"
    bundle = rag_bundle(
        question=PROMPT_1,
        context_text=context,
        intent_id="DatasetsByCountry",
        slots={"country": "United Kingdom"},
    )
    assert ExtractiveMockBackend().complete(bundle).text == GROUNDED_P1_ANSWER


def test_extractive_qualifier_defaults_to_matching_the_query():
    bundle = rag_bundle(context_text="prefix\nECO\nREDD")
    assert (
        ExtractiveMockBackend().complete(bundle).text
        == "The electricity consumption datasets matching the query include ECO and REDD."
    )


def test_extractive_unshortened_country_used_verbatim():
    bundle = rag_bundle(
        context_text="prefix\nECO",
        intent_id="DatasetsByCountry",
        slots={"country": "Switzerland"},
    )
    assert (
        ExtractiveMockBackend().complete(bundle).text
        == "The electricity consumption datasets collected in Switzerland include ECO."
    )


def test_extractive_single_and_oxford_joins():
    single = rag_bundle(context_text="v\nA")
    pair = rag_bundle(context_text="v\nA\nB")
    triple = rag_bundle(context_text="v\nA\nB\nC")
    texts = [ExtractiveMockBackend().complete(b).text for b in (single, pair, triple)]
    assert "include A." in texts[0]
    assert "include A and B." in texts[1]
    assert "include A, B, and C." in texts[2]


def test_extractive_dedupes_first_column_in_order():
    bundle = rag_bundle(context_text="v\tn\nB\t1\nA\t2\nB\t3")
    assert "include B and A." in ExtractiveMockBackend().complete(bundle).text


def test_extractive_empty_context():
    assert (
        ExtractiveMockBackend().complete(rag_bundle(context_text="prefix")).text
        == EMPTY_CONTEXT_ANSWER
    )


def test_extractive_nonrag():
    got = ExtractiveMockBackend().complete(PromptBundle(question="q?"))
    assert got.text == NO_CONTEXT_ANSWER


# ---- remote backend over a mock transport ----


def payload_of(request: httpx.Request) -> dict:
    return json.loads(request.content.decode())


def chat_response(text="hello", usage=None, status=200):
    body = {"choices": [{"message": {"role": "assistant", "content": text}}]}
    if usage is not None:
        body["usage"] = {"total_tokens": usage}
    return httpx.Response(status, json=body)


def remote(handler, monkeypatch, *, retries=2, key="k", url="https://api.llm.example/v1/chat/completions"):
    if key is not None:
        monkeypatch.setenv("OPENAI_API_KEY", key)
    else:
        monkeypatch.delenv("OPENAI_API_KEY", raising=False)
    config = LlmConfig(endpoint_url=url, model_name="test-model", max_retries=retries)
    return RemoteChatBackend("remote", config, transport=httpx.MockTransport(handler))


def test_remote_success_carries_usage_and_payload_shape(monkeypatch):
    seen = {}

    def handler(request):
        seen["url"] = str(request.url)
        seen["auth"] = request.headers["Authorization"]
        seen["payload"] = payload_of(request)
        return chat_response("fine", usage=42)

    backend = remote(handler, monkeypatch)
    got = generate(backend, PromptBundle(question="q?"))
    assert got.text == "fine"
    assert got.token_usage == 42
    assert got.backend_id == "remote"
    assert got.latency_ms >= 0
    assert seen["auth"] == "Bearer k"
    assert seen["payload"]["model"] == "test-model"
    assert seen["payload"]["temperature"] == 0.0
    assert seen["payload"]["messages"] == [{"role": "user", "content": "q?"}]


def test_remote_endpoint_url_not_hardcoded(monkeypatch):
    # the same code must reach whatever compatible server is configured
    urls = []

    def handler(request):
        urls.append(str(request.url))
        return chat_response()

    for url in (
        "https://api.openai.example/v1/chat/completions",
        "http://localhost:8081/v1/chat/completions",
    ):
        backend = remote(handler, monkeypatch, url=url)
        backend.complete(PromptBundle(question="q?"))
    assert urls == [
        "https://api.openai.example/v1/chat/completions",
        "http://localhost:8081/v1/chat/completions",
    ]


def test_remote_retries_5xx_then_succeeds(monkeypatch):
    requests = []
    naps = []

    def handler(request):
        requests.append(1)
        if len(requests) < 3:
            return httpx.Response(500, text="boom")
        return chat_response("third time")

    monkeypatch.setattr(time, "sleep", naps.append)
    backend = remote(handler, monkeypatch)
    assert backend.complete(PromptBundle(question="q?")).text == "third time"
    assert len(requests) == 3
    # doubling backoff between attempts
    assert naps == [0.5, 1.0]


def test_remote_retry_budget_exhausted_raises_last_error(monkeypatch):
    monkeypatch.setattr(time, "sleep", lambda s: None)
    backend = remote(lambda r: httpx.Response(429, text="slow down"), monkeypatch)
    with pytest.raises(BackendHttpError) as info:
        backend.complete(PromptBundle(question="q?"))
    assert info.value.status_code == 429


def test_remote_client_error_fails_immediately(monkeypatch):
    calls = []

    def handler(request):
        calls.append(1)
        return httpx.Response(401, text="bad key")

    backend = remote(handler, monkeypatch)
    with pytest.raises(BackendHttpError) as info:
        backend.complete(PromptBundle(question="q?"))
    assert info.value.status_code == 401
    assert len(calls) == 1


def test_remote_timeout_becomes_backend_timeout(monkeypatch):
    def handler(request):
        raise httpx.ReadTimeout("too slow")

    monkeypatch.setattr(time, "sleep", lambda s: None)
    backend = remote(handler, monkeypatch, retries=1)
    with pytest.raises(BackendTimeout):
        backend.complete(PromptBundle(question="q?"))


def test_remote_missing_api_key(monkeypatch):
    backend = remote(lambda r: chat_response(), monkeypatch, key=None)
    with pytest.raises(MissingApiKey):
        backend.complete(PromptBundle(question="q?"))


@pytest.mark.parametrize(
    "body",
    [
        "not json",
        json.dumps({"choices": []}),
        json.dumps({"choices": [{"message": {}}]}),
        json.dumps({"choices": [{"message": {"content": ""}}]}),
    ],
)
def test_remote_malformed_bodies(monkeypatch, body):
    backend = remote(
        lambda r: httpx.Response(200, content=body.encode()), monkeypatch
    )
    with pytest.raises(MalformedResponse):
        backend.complete(PromptBundle(question="q?"))


def test_remote_inflight_cap(monkeypatch):
    active = []
    peak = []
    lock = threading.Lock()

    def handler(request):
        with lock:
            active.append(1)
            peak.append(len(active))
        time.sleep(0.02)
        with lock:
            active.pop()
        return chat_response()

    monkeypatch.setenv("OPENAI_API_KEY", "k")
    config = LlmConfig(
        endpoint_url="https://api.llm.example/v1",
        model_name="m",
        max_inflight=2,
    )
    backend = RemoteChatBackend("remote", config, transport=httpx.MockTransport(handler))
    threads = [
        threading.Thread(target=backend.complete, args=(PromptBundle(question="q?"),))
        for _ in range(6)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert max(peak) <= 2


# ---- generate wrapper ----


def test_generate_rejects_blank_answers():
    class Blank:
        id = "blank"

        def complete(self, bundle):
            return AnswerRecord(text="   ", backend_id="blank", latency_ms=0.1)

    with pytest.raises(MalformedResponse):
        generate(Blank(), PromptBundle(question="q?"))


def test_config_validation():
    with pytest.raises(ValueError):
        LlmConfig(endpoint_url="https://x", model_name="m", timeout_seconds=0)
    with pytest.raises(ValueError):
        LlmConfig(endpoint_url="https://x", model_name="m", max_retries=-1)
    with pytest.raises(ValueError):
        LlmConfig(endpoint_url="https://x", model_name="m", max_inflight=0)
