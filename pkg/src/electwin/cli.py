"""Operator command line: seed fixtures, query, ask, evaluate, serve.

Exit codes are a stable contract: 0 success, 1 query parse/eval error,
2 input or configuration error, 3 backend failure. Diagnostics go to
stderr; only payload output (tables, JSON, answers) goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import evalsuite
from .context import DEFAULT_MAX_CHARS, DEFAULT_MAX_ROWS, retrieve, serialize
from .kg.build import build_graph, seed_store
from .kg.fixture import default_spec, generate_seed_fixture, load_spec, write_csv_bundle
from .kg.records import DuplicatePrefix, InvariantViolation
from .kg.schema import PREFIXES
from .llm import BackendError, ExtractiveMockBackend
from .pipeline import AskBackendFailure, TraceLog, ask, trace_to_json
from .rdf.store import Store
from .rdf.turtle import ParseError, serialize_turtle
from .service import build_backends, create_app, load_service_config
from .sparql import QuerySyntaxError, evaluate, parse_query, table_to_json

EXIT_OK = 0
EXIT_QUERY = 1
EXIT_INPUT = 2
EXIT_BACKEND = 3


def _fail(code: int, message: str) -> int:
    # honor NO_COLOR; otherwise mark errors in red on a terminal
    if sys.stderr.isatty() and not os.environ.get("NO_COLOR"):
        message = f"\x1b[31m{message}\x1b[0m"
    print(message, file=sys.stderr)
    return code


def _load_store(path: str) -> Store:
    with open(path, encoding="utf-8") as handle:
        document = handle.read()
    store = Store()
    store.load_turtle(document)
    return store


def _backend_registry(args) -> dict:
    registry: dict[str, object] = {"extractive-mock": ExtractiveMockBackend()}
    config_path = getattr(args, "config", None)
    if config_path:
        config = load_service_config(config_path)
        registry.update(build_backends(config.backends))
    return registry


def cmd_seed(args) -> int:
    try:
        spec = load_spec(args.spec) if args.spec else default_spec()
        bundle = generate_seed_fixture(spec)
    except DuplicatePrefix as exc:
        return _fail(EXIT_INPUT, f"bad fixture spec: duplicate dataset prefix {exc.prefix!r}")
    except (InvariantViolation, ValueError, KeyError, OSError) as exc:
        return _fail(EXIT_INPUT, f"bad fixture spec: {exc}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv_bundle(bundle, out_dir)
    store = build_graph(
        bundle.households, bundle.appliances, bundle.locations, bundle.profiles
    )
    ttl = serialize_turtle(store.match(), PREFIXES)
    (out_dir / "seed.ttl").write_text(ttl, encoding="utf-8")
    print(f"wrote {len(store)} triples to {out_dir / 'seed.ttl'}")
    return EXIT_OK


def cmd_load(args) -> int:
    try:
        store = _load_store(args.kg)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read {args.kg}: {exc}")
    except ParseError as exc:
        return _fail(EXIT_QUERY, f"turtle parse error: {exc}")
    print(f"{len(store)} triples, {len(store.subjects())} subjects")
    return EXIT_OK


def cmd_query(args) -> int:
    try:
        store = _load_store(args.kg)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read {args.kg}: {exc}")
    except ParseError as exc:
        return _fail(EXIT_QUERY, f"turtle parse error: {exc}")
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as handle:
                query_text = handle.read()
        except OSError as exc:
            return _fail(EXIT_INPUT, f"cannot read {args.file}: {exc}")
    else:
        query_text = args.inline
    try:
        if args.format == "table":
            table = retrieve(store, query_text, max_rows=args.max_rows)
            print(serialize(table, max_rows=args.max_rows, max_chars=args.max_chars))
        else:
            result = evaluate(store, parse_query(query_text))
            print(json.dumps(table_to_json(result), indent=2))
    except QuerySyntaxError as exc:
        return _fail(EXIT_QUERY, f"query error: {exc}")
    return EXIT_OK


def cmd_ask(args) -> int:
    try:
        store = _load_store(args.kg)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read {args.kg}: {exc}")
    except ParseError as exc:
        return _fail(EXIT_QUERY, f"turtle parse error: {exc}")
    try:
        registry = _backend_registry(args)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_INPUT, f"bad config: {exc}")
    backend = registry.get(args.backend)
    if backend is None:
        return _fail(
            EXIT_INPUT,
            f"unknown backend {args.backend!r}; configured: {', '.join(sorted(registry))}",
        )
    trace_log = TraceLog(args.trace_out) if args.trace_out else None
    try:
        trace = ask(
            store,
            args.question,
            backend,
            mode="rag" if args.rag else "nonRag",
            trace_log=trace_log,
        )
    except (AskBackendFailure, BackendError) as exc:
        return _fail(EXIT_BACKEND, f"backend failure: {exc}")
    for warning in trace.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(trace.answer.text)
    if args.show_trace:
        print(json.dumps(trace_to_json(trace), indent=2), file=sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        store = _load_store(args.kg)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read {args.kg}: {exc}")
    except ParseError as exc:
        return _fail(EXIT_QUERY, f"turtle parse error: {exc}")
    try:
        suite = evalsuite.load_suite(args.suite)
        cases = evalsuite.cases_from_suite(suite)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(EXIT_INPUT, f"bad suite file: {exc}")
    try:
        registry = _backend_registry(args)
        registry.update(evalsuite.scripted_backends_from_suite(suite))
    except (OSError, ValueError) as exc:
        return _fail(EXIT_INPUT, f"bad config: {exc}")

    class _UnknownBackend:
        # stands in for a requested id nobody configured, so the run
        # completes and the report carries the failure per cell
        def __init__(self, backend_id: str):
            self.id = backend_id

        def complete(self, bundle):
            raise BackendError(f"backend {self.id!r} is not configured")

    wanted = [b.strip() for b in args.backends.split(",") if b.strip()]
    if not wanted:
        return _fail(EXIT_INPUT, "no backends requested")
    selected = {
        backend_id: registry.get(backend_id, _UnknownBackend(backend_id))
        for backend_id in wanted
    }
    report = evalsuite.run_suite(store, cases, selected, suite.get("lexicon", {}))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(report, handle, indent=2, ensure_ascii=False)
            handle.write("\n")
    print(evalsuite.render_report_table(report))
    errors = report["summary"]["errors"]
    if errors:
        print(f"{errors} cell(s) failed; see report rows", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    try:
        config = load_service_config(args.config) if args.config else None
    except (OSError, ValueError) as exc:
        return _fail(EXIT_INPUT, f"bad config: {exc}")
    kg_path = args.kg or (config.kg_path if config else None)
    if not kg_path:
        return _fail(EXIT_INPUT, "no knowledge graph: pass --kg or set kgPath in config")
    try:
        store = _load_store(kg_path)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read {kg_path}: {exc}")
    except ParseError as exc:
        return _fail(EXIT_QUERY, f"turtle parse error: {exc}")
    backends = {"extractive-mock": ExtractiveMockBackend()}
    max_rows, max_chars = DEFAULT_MAX_ROWS, DEFAULT_MAX_CHARS
    trace_log = None
    if config:
        try:
            backends.update(build_backends(config.backends))
        except (ValueError, KeyError) as exc:
            return _fail(EXIT_INPUT, f"bad backend config: {exc}")
        max_rows, max_chars = config.max_rows, config.max_chars
        if config.trace_log_path:
            trace_log = TraceLog(config.trace_log_path)
    bind = args.bind or (config.bind if config else "127.0.0.1:8000")
    host, _, port = bind.rpartition(":")
    app = create_app(
        store, backends, max_rows=max_rows, max_chars=max_chars, trace_log=trace_log
    )
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="electwin",
        description="Knowledge-graph digital twin for household electricity data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_seed = sub.add_parser("seed", help="generate fixture CSVs and a Turtle graph")
    p_seed.add_argument("--spec", help="fixture spec YAML (default: packaged spec)")
    p_seed.add_argument("--out", required=True, help="output directory")
    p_seed.set_defaults(func=cmd_seed)

    p_load = sub.add_parser("load", help="parse a Turtle file and report stats")
    p_load.add_argument("--kg", required=True, help="Turtle file")
    p_load.set_defaults(func=cmd_load)

    p_query = sub.add_parser("query", help="run a SPARQL query against a Turtle file")
    p_query.add_argument("--kg", required=True, help="Turtle file")
    source = p_query.add_mutually_exclusive_group(required=True)
    source.add_argument("--file", help="file holding the query")
    source.add_argument("--inline", help="query text")
    p_query.add_argument("--format", choices=("table", "json"), default="table")
    p_query.add_argument("--max-rows", type=int, default=DEFAULT_MAX_ROWS)
    p_query.add_argument("--max-chars", type=int, default=DEFAULT_MAX_CHARS)
    p_query.set_defaults(func=cmd_query)

    p_ask = sub.add_parser("ask", help="answer a question over the graph")
    p_ask.add_argument("--kg", required=True, help="Turtle file")
    p_ask.add_argument("--question", required=True)
    p_ask.add_argument("--rag", action=argparse.BooleanOptionalAction, default=True)
    p_ask.add_argument("--backend", default="extractive-mock")
    p_ask.add_argument("--show-trace", action="store_true", help="print trace JSON to stderr")
    p_ask.add_argument("--trace-out", help="append trace JSON lines to this file")
    p_ask.add_argument("--config", help="service config YAML for extra backends")
    p_ask.set_defaults(func=cmd_ask)

    p_eval = sub.add_parser("eval", help="run the benchmark suite")
    p_eval.add_argument("--kg", required=True, help="Turtle file")
    p_eval.add_argument("--suite", help="suite JSON (default: packaged suite)")
    p_eval.add_argument("--backends", required=True, help="comma-separated backend ids")
    p_eval.add_argument("--out", help="write the report JSON here")
    p_eval.add_argument("--config", help="service config YAML for extra backends")
    p_eval.set_defaults(func=cmd_eval)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--kg", help="Turtle file (overrides config kgPath)")
    p_serve.add_argument("--bind", help="host:port (overrides config bind)")
    p_serve.add_argument("--config", help="service config YAML")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
