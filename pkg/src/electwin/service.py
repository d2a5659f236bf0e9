"""HTTP facade: SPARQL endpoint, question answering, resource pages, health.

All handlers work against an immutable post-load store, so requests run
fully concurrently; the only shared throttle is a remote backend's
in-flight cap. Error bodies are JSON with a stable "error" code field.
Secrets never live in config files: remote backends name an environment
variable and read the key from there at request time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import yaml
from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import pipeline
from .context import DEFAULT_MAX_CHARS, DEFAULT_MAX_ROWS
from .kg.schema import RESOURCE_NS
from .llm import (
    BackendTimeout,
    ExtractiveMockBackend,
    LlmConfig,
    RemoteChatBackend,
    ScriptedMockBackend,
)
from .rdf.store import Store
from .rdf.terms import Iri
from .sparql import QuerySyntaxError, evaluate, parse_query, table_to_json
from .sparql.results import term_to_json

MAX_QUERY_BYTES = 64 * 1024
MAX_QUESTION_CHARS = 2000
SPARQL_CONTENT_TYPE = "application/sparql-query"

# request log: method, path, status only; bodies and headers may hold
# questions or bearer tokens and are never written
log = logging.getLogger("electwin.service")


@dataclass(frozen=True)
class ServiceConfig:
    bind: str = "127.0.0.1:8000"
    kg_path: str | None = None
    max_rows: int = DEFAULT_MAX_ROWS
    max_chars: int = DEFAULT_MAX_CHARS
    trace_log_path: str | None = None
    backends: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def host(self) -> str:
        return self.bind.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.bind.rsplit(":", 1)[1])


def load_service_config(path) -> ServiceConfig:
    with open(path, encoding="utf-8") as handle:
        doc = yaml.safe_load(handle) or {}
    if not isinstance(doc, dict):
        raise ValueError("service config must be a mapping")
    return ServiceConfig(
        bind=doc.get("bind", "127.0.0.1:8000"),
        kg_path=doc.get("kgPath"),
        max_rows=int(doc.get("maxRows", DEFAULT_MAX_ROWS)),
        max_chars=int(doc.get("maxChars", DEFAULT_MAX_CHARS)),
        trace_log_path=doc.get("traceLog"),
        backends=tuple(doc.get("backends", ())),
    )


def build_backends(specs) -> dict:
    """Instantiate the backend registry from config entries.

    Kinds: extractive (no options), scripted (replies/default), remote
    (endpointUrl, modelName, apiKeyEnvVar, ...). An empty spec list
    still yields the extractive mock so the service always has one
    working backend.
    """
    registry: dict[str, object] = {}
    for spec in specs:
        backend_id = spec.get("id")
        kind = spec.get("kind")
        if not backend_id or not kind:
            raise ValueError(f"backend entry needs id and kind: {spec!r}")
        if backend_id in registry:
            raise ValueError(f"duplicate backend id {backend_id!r}")
        if kind == "extractive":
            registry[backend_id] = ExtractiveMockBackend(backend_id=backend_id)
        elif kind == "scripted":
            registry[backend_id] = ScriptedMockBackend(
                replies=spec.get("replies", {}),
                default=spec.get("default", ""),
                backend_id=backend_id,
            )
        elif kind == "remote":
            config = LlmConfig(
                endpoint_url=spec["endpointUrl"],
                model_name=spec["modelName"],
                api_key_env_var=spec.get("apiKeyEnvVar", "OPENAI_API_KEY"),
                temperature=float(spec.get("temperature", 0.0)),
                timeout_seconds=float(spec.get("timeoutSeconds", 30.0)),
                max_retries=int(spec.get("maxRetries", 2)),
                max_inflight=int(spec.get("maxInflight", 8)),
            )
            registry[backend_id] = RemoteChatBackend(backend_id, config)
        else:
            raise ValueError(f"unknown backend kind {kind!r}")
    if "extractive-mock" not in registry and not registry:
        registry["extractive-mock"] = ExtractiveMockBackend()
    return registry


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "message": message, **extra})


def create_app(
    store: Store | None,
    backends: dict | None = None,
    *,
    max_rows: int = DEFAULT_MAX_ROWS,
    max_chars: int = DEFAULT_MAX_CHARS,
    trace_log: pipeline.TraceLog | None = None,
) -> FastAPI:
    """Assemble the app. store=None models the not-yet-loaded phase."""
    if backends is None:
        backends = {"extractive-mock": ExtractiveMockBackend()}
    app = FastAPI(title="electwin", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.backends = backends

    @app.middleware("http")
    async def access_log(request: Request, call_next):
        response = await call_next(request)
        log.info("%s %s -> %d", request.method, request.url.path, response.status_code)
        return response

    @app.post("/sparql")
    async def sparql_endpoint(request: Request) -> Response:
        content_type = request.headers.get("content-type", "").split(";")[0].strip()
        if content_type != SPARQL_CONTENT_TYPE:
            return _error(
                415,
                "UnsupportedMediaType",
                f"expected {SPARQL_CONTENT_TYPE}, got {content_type or 'none'}",
            )
        body = await request.body()
        if len(body) > MAX_QUERY_BYTES:
            return _error(413, "QueryTooLarge", f"query exceeds {MAX_QUERY_BYTES} bytes")
        if app.state.store is None:
            return _error(503, "StoreNotLoaded", "knowledge graph is not loaded yet")
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError as exc:
            return _error(400, "EncodingError", f"query body is not valid UTF-8: {exc}")
        try:
            ast = parse_query(text)
        except QuerySyntaxError as exc:
            return _error(
                400,
                "QuerySyntaxError",
                str(exc),
                line=exc.line,
                column=exc.column,
            )
        table = evaluate(app.state.store, ast)
        return JSONResponse(table_to_json(table))

    @app.post("/ask")
    def ask_endpoint(payload: dict) -> Response:
        question = payload.get("question")
        if not isinstance(question, str) or not question.strip():
            return _error(400, "EmptyQuestion", "question must be a non-empty string")
        if len(question) > MAX_QUESTION_CHARS:
            return _error(
                400, "QuestionTooLong", f"question exceeds {MAX_QUESTION_CHARS} characters"
            )
        rag = payload.get("rag", True)
        if not isinstance(rag, bool):
            return _error(400, "BadRequest", "rag must be a boolean")
        backend_id = payload.get("backendId", "extractive-mock")
        backend = app.state.backends.get(backend_id)
        if backend is None:
            return _error(
                404,
                "UnknownBackend",
                f"no backend named {backend_id!r}",
                backends=sorted(app.state.backends),
            )
        if app.state.store is None:
            return _error(503, "StoreNotLoaded", "knowledge graph is not loaded yet")
        try:
            trace = pipeline.ask(
                app.state.store,
                question,
                backend,
                mode="rag" if rag else "nonRag",
                max_rows=max_rows,
                max_chars=max_chars,
                trace_log=trace_log,
            )
        except pipeline.AskBackendFailure as exc:
            status = 504 if isinstance(exc.cause, BackendTimeout) else 502
            return _error(
                status,
                type(exc.cause).__name__,
                str(exc.cause),
                partialTrace=exc.partial,
            )
        return JSONResponse(pipeline.trace_to_json(trace))

    @app.get("/resource/{name:path}")
    def resource_endpoint(name: str) -> Response:
        if app.state.store is None:
            return _error(503, "StoreNotLoaded", "knowledge graph is not loaded yet")
        try:
            subject = Iri(RESOURCE_NS + name)
        except Exception:
            return _error(404, "UnknownResource", f"no resource named {name!r}")
        triples = list(app.state.store.match(s=subject))
        if not triples:
            # nodes that only appear as objects are not dereferenceable
            return _error(404, "UnknownResource", f"no resource named {name!r}")
        grouped: dict[str, list] = {}
        for triple in triples:
            grouped.setdefault(triple.predicate.value, []).append(
                term_to_json(triple.object)
            )
        return JSONResponse({"iri": subject.value, "properties": grouped})

    @app.get("/health")
    def health_endpoint() -> Response:
        backend_ids = sorted(app.state.backends)
        if app.state.store is None:
            return JSONResponse(
                status_code=503,
                content={"status": "loading", "tripleCount": 0, "backends": backend_ids},
            )
        return JSONResponse(
            {
                "status": "ok",
                "tripleCount": len(app.state.store),
                "backends": backend_ids,
            }
        )

    return app
