"""HTTP API over the evaluation engine.

Every number the API returns comes straight from the scoring and report
modules; the service layer adds persistence, locking and transport, never
arithmetic. Sessions are serialized per id; the catalog swaps atomically
and never disturbs existing sessions.
"""

from __future__ import annotations

import mimetypes
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse, Response
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import autocheck, chartspec, report_io, scoring
from .catalog import (CatalogError, QuestionCatalog, catalog_to_document,
                      document_diagnostics, load_catalog, parse_catalog_json)
from .fixtures import packaged_bindings_bytes, packaged_catalog_bytes
from .session import (Answer, AnswerSource, EmptyUpload, EvaluationSession,
                      ImageTooLarge, UnknownQuestion, UnsupportedMediaType,
                      create_session, progress, record_answer)
from .storage import (SessionStore, StorageError, atomic_write_bytes,
                      session_to_document)

ADMIN_TOKEN_HEADER = "x-admin-token"


@dataclass
class ServiceConfig:
    port: int = 8080
    data_dir: Path = Path("data")
    catalog_path: Path | None = None
    bindings_path: Path | None = None
    max_upload_mb: int = 20
    admin_token: str | None = None
    webapp_dir: Path | None = None

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        def path_or_none(name: str) -> Path | None:
            value = os.environ.get(name)
            return Path(value) if value else None

        return cls(
            port=int(os.environ.get("VISQUAL_PORT", "8080")),
            data_dir=Path(os.environ.get("VISQUAL_DATA_DIR", "data")),
            catalog_path=path_or_none("VISQUAL_CATALOG"),
            bindings_path=path_or_none("VISQUAL_BINDINGS"),
            max_upload_mb=int(os.environ.get("VISQUAL_MAX_UPLOAD_MB", "20")),
            admin_token=os.environ.get("VISQUAL_ADMIN_TOKEN") or None,
            webapp_dir=path_or_none("VISQUAL_WEBAPP_DIR"),
        )

    @property
    def max_upload_bytes(self) -> int:
        return self.max_upload_mb * 1024 * 1024


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str,
                 extra: dict | None = None):
        self.status = status
        self.code = code
        self.detail = detail
        self.extra = extra or {}
        super().__init__(detail)


class CatalogHolder:
    """Atomic snapshot holder: readers see the old or new catalog, never
    a mix."""

    def __init__(self, catalog: QuestionCatalog):
        self._catalog = catalog
        self._swap_lock = threading.Lock()

    def get(self) -> QuestionCatalog:
        return self._catalog

    def swap(self, catalog: QuestionCatalog) -> None:
        with self._swap_lock:
            self._catalog = catalog


class AnswerBody(BaseModel):
    answer: Literal["yes", "no", "na"]


def _load_startup_catalog(config: ServiceConfig) -> QuestionCatalog:
    swapped = config.data_dir / "catalog.json"
    if swapped.is_file():
        return load_catalog(swapped.read_bytes())
    if config.catalog_path is not None:
        return load_catalog(config.catalog_path.read_bytes())
    return load_catalog(packaged_catalog_bytes())


def _load_bindings(config: ServiceConfig) -> list[autocheck.RuleBinding]:
    if config.bindings_path is not None:
        return autocheck.load_bindings(config.bindings_path.read_bytes())
    return autocheck.load_bindings(packaged_bindings_bytes())


def _progress_document(session: EvaluationSession) -> dict:
    snapshot = progress(session)
    return {
        "answered": snapshot.answered,
        "total": snapshot.total,
        "per_category": {
            category.value: {"answered": answered, "total": total}
            for category, (answered, total) in snapshot.per_category.items()
        },
    }


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    config.data_dir.mkdir(parents=True, exist_ok=True)

    app = FastAPI(title="visqual", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    holder = CatalogHolder(_load_startup_catalog(config))
    bindings = _load_bindings(config)
    store = SessionStore(config.data_dir)
    assets_dir = config.data_dir / "assets"
    examples_dir = config.data_dir / "examples"

    app.state.config = config
    app.state.catalog_holder = holder
    app.state.session_store = store

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        body = {"error": exc.code, "detail": exc.detail}
        body.update(exc.extra)
        return JSONResponse(status_code=exc.status, content=body)

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_error(request: Request,
                                exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else "http_error"
        return JSONResponse(status_code=exc.status_code,
                            content={"error": code,
                                     "detail": str(exc.detail)})

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request,
                                      exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"error": "validation_error",
                                     "detail": str(exc.errors())})

    def load_session_or_404(session_id: str) -> EvaluationSession:
        try:
            return store.load(session_id)
        except StorageError as exc:
            raise ApiError(404, "not_found",
                           f"no session {session_id!r}") from exc

    @app.post("/api/sessions", status_code=201)
    async def post_session(image: UploadFile):
        data = await image.read()
        try:
            session = create_session(
                data,
                image.content_type or "application/octet-stream",
                image.filename or "upload",
                holder.get(),
                max_bytes=config.max_upload_bytes,
                asset_dir=assets_dir,
            )
        except UnsupportedMediaType as exc:
            raise ApiError(415, "unsupported_media_type", str(exc)) from exc
        except EmptyUpload as exc:
            raise ApiError(400, "empty_upload", str(exc)) from exc
        except ImageTooLarge as exc:
            raise ApiError(413, "image_too_large", str(exc)) from exc
        with store.lock(session.session_id):
            store.save(session)
        return JSONResponse(status_code=201,
                            content=session_to_document(session))

    @app.get("/api/sessions/{session_id}")
    async def get_session(session_id: str):
        return session_to_document(load_session_or_404(session_id))

    @app.put("/api/sessions/{session_id}/answers/{question_id}")
    async def put_answer(session_id: str, question_id: str, body: AnswerBody):
        with store.lock(session_id):
            session = load_session_or_404(session_id)
            try:
                record_answer(session, question_id, Answer(body.answer),
                              AnswerSource.MANUAL)
            except UnknownQuestion as exc:
                raise ApiError(404, "unknown_question", str(exc)) from exc
            store.save(session)
        return _progress_document(session)

    @app.post("/api/sessions/{session_id}/autocheck")
    async def post_autocheck(session_id: str, request: Request,
                             apply: bool = False):
        raw = await request.body()
        try:
            spec = chartspec.parse_spec(raw)
        except chartspec.ChartSpecError as exc:
            raise ApiError(422, "invalid_spec", str(exc)) from exc
        verdicts = autocheck.run_checks(spec, bindings)
        if apply:
            with store.lock(session_id):
                session = load_session_or_404(session_id)
                autocheck.apply_verdicts(session, verdicts)
                store.save(session)
        return [
            {"question_id": v.question_id, "verdict": v.verdict.value,
             "evidence": v.evidence}
            for v in verdicts
        ]

    @app.get("/api/sessions/{session_id}/report")
    async def get_report(session_id: str):
        session = load_session_or_404(session_id)
        payload = report_io.report_to_json(scoring.build_report(session))
        return Response(content=payload, media_type="application/json")

    @app.get("/api/sessions/{session_id}/report.csv")
    async def get_report_csv(session_id: str):
        session = load_session_or_404(session_id)
        payload = report_io.report_to_csv(scoring.build_report(session))
        headers = {"Content-Disposition":
                   f'attachment; filename="report-{session_id}.csv"'}
        return Response(content=payload, media_type="text/csv",
                        headers=headers)

    @app.get("/api/catalog")
    async def get_catalog():
        return catalog_to_document(holder.get())

    @app.put("/api/catalog")
    async def put_catalog(request: Request):
        if not config.admin_token:
            raise ApiError(403, "hot_swap_disabled",
                           "set VISQUAL_ADMIN_TOKEN to enable catalog swaps")
        if request.headers.get(ADMIN_TOKEN_HEADER) != config.admin_token:
            raise ApiError(401, "unauthorized",
                           f"missing or wrong {ADMIN_TOKEN_HEADER} header")
        raw = await request.body()
        try:
            catalog = load_catalog(raw)
        except CatalogError as exc:
            raise ApiError(422, "invalid_catalog", str(exc),
                           extra={"diagnostics": _diagnostics_for(raw)})
        holder.swap(catalog)
        atomic_write_bytes(config.data_dir / "catalog.json", raw)
        return {"version": catalog.version, "questions": len(catalog)}

    @app.get("/api/questions/{question_id}/examples/{kind}")
    async def get_example(question_id: str, kind: Literal["good", "bad"]):
        question = holder.get().get(question_id)
        if question is None:
            raise ApiError(404, "not_found", f"no question {question_id!r}")
        relative = (question.example_good if kind == "good"
                    else question.example_bad)
        if not relative:
            raise ApiError(404, "not_found",
                           f"question {question_id!r} has no {kind} example")
        base = examples_dir.resolve()
        target = (examples_dir / relative).resolve()
        if base not in target.parents and target != base:
            raise ApiError(404, "not_found", "example path escapes asset dir")
        if not target.is_file():
            raise ApiError(404, "not_found", f"example asset {relative!r} "
                           "is not installed")
        media_type = mimetypes.guess_type(target.name)[0]
        return FileResponse(target, media_type=media_type)

    if config.webapp_dir is not None and config.webapp_dir.is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=config.webapp_dir, html=True),
                  name="webapp")

    return app


def _diagnostics_for(raw: bytes) -> list[dict]:
    try:
        doc = parse_catalog_json(raw)
    except CatalogError as exc:
        return [{"severity": "error", "code": "parse", "message": str(exc),
                 "subject": None}]
    return [
        {"severity": d.severity, "code": d.code, "message": d.message,
         "subject": d.subject}
        for d in document_diagnostics(doc)
    ]


def app_factory() -> FastAPI:
    """Uvicorn entry point: ``uvicorn visqual.service:app_factory --factory``."""
    return create_app(ServiceConfig.from_env())


def run(config: ServiceConfig | None = None) -> None:
    import uvicorn
    config = config or ServiceConfig.from_env()
    uvicorn.run(create_app(config), host="127.0.0.1", port=config.port)
