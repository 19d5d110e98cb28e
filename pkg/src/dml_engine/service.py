"""HTTP service exposing one engine session.

All JSON responses are rendered through :mod:`dml_engine.render` so the
service and the CLI stay byte-identical for the same inputs. Errors use the
uniform ``{code, message, path?}`` envelope; document validation failures
return the full ValidationReport instead.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response

from . import render
from .errors import EngineError, ParseError, QueryError, ValidationFailed
from .graph import NodeKind
from .modelio import Issue, ValidationReport, parse_model, serialize_graph, to_graph
from .cypher import export_cypher
from .session import DiagnosticRequest, Session, TaskType

_STATUS_BY_CODE = {
    "NO_MODEL": 409,
    "NOT_FOUND": 404,
    "AMBIGUOUS_NAME": 400,
    "BAD_REQUEST": 400,
    "WRONG_TASK": 400,
    "TARGET_IS_LEAF": 400,
}


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    threshold: float = 0.9
    model_path: str | None = None
    pathset_limit: int = 10_000
    static_dir: str | None = None

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port out of range: {self.port}")
        if self.pathset_limit < 1:
            raise ValueError(f"pathset_limit must be positive: {self.pathset_limit}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold out of [0,1]: {self.threshold}")


def load_service_config(path: str | None = None) -> ServiceConfig:
    """Config file from ``path`` or the DML_ENGINE_CONFIG env var; defaults otherwise."""
    if path is None:
        path = os.environ.get("DML_ENGINE_CONFIG")
    if path is None:
        return ServiceConfig()
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    known = {"host", "port", "threshold", "model", "pathset_limit", "static_dir"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return ServiceConfig(
        host=raw.get("host", "127.0.0.1"),
        port=int(raw.get("port", 8080)),
        threshold=float(raw.get("threshold", 0.9)),
        model_path=raw.get("model"),
        pathset_limit=int(raw.get("pathset_limit", 10_000)),
        static_dir=raw.get("static_dir"),
    )


def _json_response(payload, status: int = 200) -> Response:
    return Response(
        content=render.canonical_json(payload),
        status_code=status,
        media_type="application/json",
    )


def _error_response(exc: EngineError) -> Response:
    if isinstance(exc, ValidationFailed):
        return _json_response(render.report_payload(exc.report), status=422)
    if isinstance(exc, ParseError):
        report = ValidationReport(
            verdict="Fail", issues=[Issue(exc.code, exc.path or "", exc.message)]
        )
        return _json_response(render.report_payload(report), status=422)
    status = _STATUS_BY_CODE.get(exc.code, 422)
    return _json_response(exc.envelope(), status=status)


async def _read_json_body(request: Request, *, optional: bool = False):
    body = await request.body()
    if not body:
        if optional:
            return {}
        raise QueryError("BAD_REQUEST", "request body is empty")
    try:
        return json.loads(body)
    except json.JSONDecodeError as err:
        raise QueryError("BAD_REQUEST", f"request body is not valid JSON: {err.msg}")


def _parse_kind(raw: str | None) -> NodeKind | None:
    if raw is None:
        return None
    try:
        return NodeKind(raw)
    except ValueError:
        raise QueryError("BAD_REQUEST", f"unknown node kind {raw!r}")


def create_app(config: ServiceConfig | None = None, session: Session | None = None) -> FastAPI:
    config = config or ServiceConfig()
    session = session or Session()
    from .propagation import PropagationConfig

    session.config = PropagationConfig(threshold=config.threshold)
    if config.model_path:
        with open(config.model_path, encoding="utf-8") as handle:
            session.load_model(to_graph(parse_model(handle.read())))

    app = FastAPI(title="dml-engine", docs_url=None, redoc_url=None)
    app.state.session = session
    app.state.config = config

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request, exc: EngineError):
        return _error_response(exc)

    @app.get("/healthz")
    async def healthz():
        return _json_response({"status": "ok"})

    @app.post("/model")
    async def post_model(request: Request):
        body = await request.body()
        model = parse_model(body.decode("utf-8"))
        graph = to_graph(model)
        session.load_model(graph)
        return _json_response(render.counts_payload(graph.count_elements()), status=201)

    @app.get("/model")
    async def get_model():
        graph = session.require_model()
        return Response(content=serialize_graph(graph), media_type="application/json")

    @app.get("/model/counts")
    async def get_counts():
        graph = session.require_model()
        return _json_response(render.counts_payload(graph.count_elements()))

    @app.get("/model/cypher")
    async def get_cypher():
        graph = session.require_model()
        return Response(content=export_cypher(graph), media_type="text/plain")

    @app.get("/model/subgraph")
    async def get_subgraph(target: str, depth: int = 1, kind: str | None = None):
        subgraph = session.retrieve_subgraph(target, depth, _parse_kind(kind))
        return _json_response(render.subgraph_payload(session, subgraph))

    @app.put("/evidence")
    async def put_evidence(request: Request):
        updates = await _read_json_body(request)
        if not isinstance(updates, dict):
            raise QueryError("BAD_REQUEST", "evidence must be an object")
        revision = session.set_evidence(updates)
        return _json_response({"revision": revision})

    @app.delete("/evidence")
    async def delete_evidence():
        revision = session.reset_evidence()
        return _json_response({"revision": revision})

    @app.post("/propagate")
    async def post_propagate(request: Request):
        body = await _read_json_body(request, optional=True)
        if not isinstance(body, dict):
            raise QueryError("BAD_REQUEST", "propagate body must be an object")
        threshold = body.get("threshold")
        result = session.run_upward(
            DiagnosticRequest(task=TaskType.UPWARD, threshold=threshold)
        )
        return _json_response(render.propagation_payload(result))

    @app.post("/pathsets")
    async def post_pathsets(request: Request):
        body = await _read_json_body(request)
        if not isinstance(body, dict) or "target" not in body:
            raise QueryError("BAD_REQUEST", "pathsets body must carry a target")
        collection = session.run_downward(
            DiagnosticRequest(
                task=TaskType.DOWNWARD,
                target=body["target"],
                kind=_parse_kind(body.get("kind")),
                limit=body.get("limit"),
                raw=bool(body.get("raw", False)),
            )
        )
        graph = session.require_model()
        return _json_response(render.pathsets_payload(graph, collection))

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="console")

    return app


def serve(config: ServiceConfig) -> None:
    """Run until interrupted. Refuses to start if the preload model is invalid."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
