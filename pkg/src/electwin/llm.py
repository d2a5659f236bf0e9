"""Prompt assembly and answer generation backends.

A PromptBundle is either plain (the bare question) or grounded (question
plus the query that was run and the context block it returned, and
optionally a 24-hour load profile attachment). Backends turn a bundle
into an AnswerRecord. The remote backend speaks the OpenAI-style
chat-completions wire format; the two mock backends exist so tests and
CI never need network access.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field
from typing import Mapping

import httpx

from .context import parse_context_block
from .kg.records import LoadProfile

MODES = ("rag", "nonRag")

# Countries whose everyday short form differs from the knowledge-graph name.
_SHORT_COUNTRY = {
    "United Kingdom": "the UK",
    "United States": "the US",
}

EMPTY_CONTEXT_ANSWER = "No matching records were found in the knowledge graph."
NO_CONTEXT_ANSWER = "No knowledge-graph context was provided."


class BackendError(Exception):
    """Base for failures talking to or interpreting a backend."""


class MissingApiKey(BackendError):
    def __init__(self, env_var: str):
        super().__init__(f"environment variable {env_var} is not set")
        self.env_var = env_var


class BackendTimeout(BackendError):
    def __init__(self, seconds: float):
        super().__init__(f"backend did not answer within {seconds}s")
        self.seconds = seconds


class BackendHttpError(BackendError):
    def __init__(self, status_code: int, body_excerpt: str):
        super().__init__(f"backend returned HTTP {status_code}: {body_excerpt}")
        self.status_code = status_code
        self.body_excerpt = body_excerpt


class MalformedResponse(BackendError):
    pass


class ContextUnparseable(BackendError):
    pass


@dataclass(frozen=True)
class PromptBundle:
    """Everything a backend needs to answer one question.

    mode "rag" requires query_text and context_text; "nonRag" forbids
    them. intent_id/slots describe how the query was chosen and let the
    extractive mock phrase its sentence; they are advisory for real
    backends.
    """

    question: str
    mode: str = "nonRag"
    query_text: str | None = None
    context_text: str | None = None
    attachment: LoadProfile | None = None
    intent_id: str | None = None
    slots: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.question.strip():
            raise ValueError("question must be non-empty")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        grounded = self.query_text is not None and self.context_text is not None
        bare = self.query_text is None and self.context_text is None
        if self.mode == "rag" and not grounded:
            raise ValueError("rag bundles need both query_text and context_text")
        if self.mode == "nonRag" and not bare:
            raise ValueError("nonRag bundles must not carry query or context")


@dataclass(frozen=True)
class AnswerRecord:
    text: str
    backend_id: str
    latency_ms: float
    token_usage: int | None = None


def render_prompt(bundle: PromptBundle) -> str:
    """Flatten a bundle to the text actually sent to a model."""
    if bundle.mode == "nonRag":
        return bundle.question
    parts = [
        f"Question:\n{bundle.question}",
        f"Query:\n{bundle.query_text}",
        f"Enhanced Context:\n{bundle.context_text}",
    ]
    if bundle.attachment is not None:
        lines = "\n".join(
            f"{hour},{value}"
            for hour, value in enumerate(bundle.attachment.hourly_averages)
        )
        parts.append(f"Load Profile:\n{lines}")
    return "\n\n".join(parts)


@dataclass(frozen=True)
class LlmConfig:
    """Connection settings for an OpenAI-compatible chat endpoint."""

    endpoint_url: str
    model_name: str
    api_key_env_var: str = "OPENAI_API_KEY"
    temperature: float = 0.0
    timeout_seconds: float = 30.0
    max_retries: int = 2
    max_inflight: int = 8

    def __post_init__(self):
        if self.timeout_seconds <= 0:
            raise ValueError("timeout_seconds must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.max_inflight < 1:
            raise ValueError("max_inflight must be >= 1")


class RemoteChatBackend:
    """Talks to any server exposing the chat-completions JSON shape.

    Retries timeouts, HTTP 429 and 5xx with doubling backoff; other
    statuses fail immediately. A semaphore caps concurrent requests per
    backend instance.
    """

    def __init__(self, backend_id: str, config: LlmConfig, transport: httpx.BaseTransport | None = None):
        self.id = backend_id
        self.config = config
        self._gate = threading.BoundedSemaphore(config.max_inflight)
        self._client = httpx.Client(
            timeout=config.timeout_seconds,
            transport=transport,
        )

    def _api_key(self) -> str:
        key = os.environ.get(self.config.api_key_env_var)
        if not key:
            raise MissingApiKey(self.config.api_key_env_var)
        return key

    def complete(self, bundle: PromptBundle) -> AnswerRecord:
        payload = {
            "model": self.config.model_name,
            "temperature": self.config.temperature,
            "messages": [{"role": "user", "content": render_prompt(bundle)}],
        }
        headers = {"Authorization": f"Bearer {self._api_key()}"}
        start = time.perf_counter()
        attempts = self.config.max_retries + 1
        last_error: BackendError | None = None
        with self._gate:
            for attempt in range(attempts):
                if attempt:
                    time.sleep(0.5 * 2 ** (attempt - 1))
                try:
                    response = self._client.post(
                        self.config.endpoint_url, json=payload, headers=headers
                    )
                except httpx.TimeoutException:
                    last_error = BackendTimeout(self.config.timeout_seconds)
                    continue
                except httpx.HTTPError as exc:
                    last_error = BackendError(f"transport failure: {exc}")
                    continue
                if response.status_code == 429 or response.status_code >= 500:
                    last_error = BackendHttpError(
                        response.status_code, response.text[:200]
                    )
                    continue
                if response.status_code != 200:
                    raise BackendHttpError(response.status_code, response.text[:200])
                return self._decode(response, start)
        assert last_error is not None
        raise last_error

    def _decode(self, response: httpx.Response, start: float) -> AnswerRecord:
        try:
            data = response.json()
        except ValueError as exc:
            raise MalformedResponse(f"response body is not JSON: {exc}") from exc
        try:
            text = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse("response lacks choices[0].message.content") from exc
        if not isinstance(text, str) or not text:
            raise MalformedResponse("answer text is empty or not a string")
        usage = data.get("usage", {})
        tokens = usage.get("total_tokens") if isinstance(usage, dict) else None
        return AnswerRecord(
            text=text,
            backend_id=self.id,
            latency_ms=(time.perf_counter() - start) * 1000.0,
            token_usage=tokens if isinstance(tokens, int) else None,
        )

    def close(self):
        self._client.close()


class ScriptedMockBackend:
    """Replays canned answers keyed by exact question text and mode.

    replies maps question -> {mode: text}. The same question usually has
    different canned answers with and without grounding, so mode is part
    of the key.
    """

    def __init__(
        self,
        replies: Mapping[str, Mapping[str, str]] | None = None,
        default: str = "",
        backend_id: str = "scripted-mock",
    ):
        self.id = backend_id
        self._replies = {q: dict(by_mode) for q, by_mode in (replies or {}).items()}
        self._default = default

    def covers(self, question: str, mode: str) -> bool:
        if self._default:
            return True
        return mode in self._replies.get(question, {})

    def complete(self, bundle: PromptBundle) -> AnswerRecord:
        start = time.perf_counter()
        text = self._replies.get(bundle.question, {}).get(bundle.mode, self._default)
        if not text:
            raise MalformedResponse(
                f"no scripted {bundle.mode} reply for question {bundle.question!r}"
            )
        return AnswerRecord(
            text=text,
            backend_id=self.id,
            latency_ms=(time.perf_counter() - start) * 1000.0,
        )


def _join_names(names: list[str]) -> str:
    if len(names) == 1:
        return names[0]
    if len(names) == 2:
        return f"{names[0]} and {names[1]}"
    return ", ".join(names[:-1]) + f", and {names[-1]}"


class ExtractiveMockBackend:
    """Deterministic stand-in that answers straight from the context block.

    It lists the distinct values of the first projected column in block
    order, so its sentence is exactly as grounded as the retrieval was.
    """

    def __init__(self, backend_id: str = "extractive-mock"):
        self.id = backend_id

    def _qualifier(self, bundle: PromptBundle) -> str:
        if bundle.intent_id == "DatasetsByCountry":
            country = bundle.slots.get("country", "")
            if country:
                return f"collected in {_SHORT_COUNTRY.get(country, country)}"
        return "matching the query"

    def complete(self, bundle: PromptBundle) -> AnswerRecord:
        start = time.perf_counter()
        if bundle.mode != "rag":
            text = NO_CONTEXT_ANSWER
        else:
            try:
                header, rows = parse_context_block(bundle.context_text or "")
            except IndexError as exc:
                raise ContextUnparseable("context block has no header line") from exc
            if not header or not header[0]:
                raise ContextUnparseable("context header is empty")
            names = list(dict.fromkeys(row[0] for row in rows if row and row[0]))
            if not names:
                text = EMPTY_CONTEXT_ANSWER
            else:
                text = (
                    f"The electricity consumption datasets {self._qualifier(bundle)} "
                    f"include {_join_names(names)}."
                )
        return AnswerRecord(
            text=text,
            backend_id=self.id,
            latency_ms=(time.perf_counter() - start) * 1000.0,
        )


def generate(backend, bundle: PromptBundle) -> AnswerRecord:
    """Single entry point: run the backend and insist on a real answer."""
    record = backend.complete(bundle)
    if not record.text.strip():
        raise MalformedResponse(f"backend {backend.id} produced an empty answer")
    return record
