"""HTTP face of the construction service.

JSON in and out everywhere except images, which travel as binary PGM by
default or base64-wrapped JSON when the client asks for
``application/json``.  The browser frontend is a pure consumer of these
endpoints; it never computes pixels itself.
"""

from __future__ import annotations

import base64

from fastapi import Body, FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .catalog import PARAMETER_SCHEMA, Catalog, ComponentKind, Query, match_query
from .errors import (
    DegenerateImageError,
    DimensionMismatchError,
    IllegalActionError,
    MissingKindError,
    NegativeCoordinateError,
    NoForegroundError,
    NotACandidateError,
    OutOfBoundsError,
    PhotofitError,
    StageNotReadyError,
    UnknownKindError,
    UnknownSessionError,
)
from .image import save_pgm
from .session import STAGES, ConstructionService, session_snapshot

PGM_MEDIA_TYPE = "image/x-portable-graymap"

_STATUS_FOR = {
    UnknownSessionError: 404,
    UnknownKindError: 400,
    MissingKindError: 400,
    NotACandidateError: 409,
    IllegalActionError: 409,
    StageNotReadyError: 409,
    OutOfBoundsError: 409,
    NegativeCoordinateError: 409,
    NoForegroundError: 409,
    DegenerateImageError: 409,
    DimensionMismatchError: 409,
}


def _http_status(exc: PhotofitError) -> int:
    for klass, status in _STATUS_FOR.items():
        if isinstance(exc, klass):
            return status
    return 400


def _image_response(request: Request, data: bytes, media_type: str) -> Response:
    if "application/json" in request.headers.get("accept", ""):
        return JSONResponse({"pgm_base64": base64.b64encode(data).decode("ascii")})
    return Response(content=data, media_type=media_type)


def merged_schema(catalog: Catalog) -> dict[str, dict[str, list[str]]]:
    """Base vocabulary per kind, extended with values observed in storage.

    Out-of-vocabulary values that made it into the catalog (stored with a
    warning) must be offered by the description form, otherwise the records
    carrying them could never be asked for.
    """
    out: dict[str, dict[str, list[str]]] = {}
    for kind, params in PARAMETER_SCHEMA.items():
        merged: dict[str, list[str]] = {}
        for name, vocab in params.items():
            values = list(vocab)
            for seen in catalog.observed_values(kind, name):
                if seen not in values:
                    values.append(seen)
            merged[name] = values
        out[kind.value] = merged
    return out


def create_app(catalog: Catalog, service: ConstructionService | None = None) -> FastAPI:
    service = service or ConstructionService(catalog)
    app = FastAPI(title="photofit", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.service = service

    @app.exception_handler(PhotofitError)
    async def _photofit_error(request: Request, exc: PhotofitError):
        return JSONResponse({"detail": str(exc)}, status_code=_http_status(exc))

    @app.get("/")
    def index():
        return {
            "name": "photofit",
            "sessions": service.session_ids(),
            "stages": list(STAGES),
        }

    @app.get("/schema")
    def schema():
        return merged_schema(service.catalog)

    # -- catalog browsing --------------------------------------------------

    @app.get("/components")
    def list_components(request: Request):
        params = dict(request.query_params)
        kind_name = params.pop("kind", None)
        if kind_name is None:
            raise HTTPException(400, "query parameter 'kind' is required")
        kind = ComponentKind.parse(kind_name)
        try:
            query = Query(kind, params)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from None
        hits = match_query(query, service.catalog)
        return {
            "components": [
                {
                    "id": r.id,
                    "kind": r.kind.value,
                    "params": dict(r.params),
                    "source": r.source,
                    "width": r.image.width,
                    "height": r.image.height,
                }
                for r in hits
            ]
        }

    @app.get("/components/{record_id}/image")
    def component_image(record_id: str, request: Request):
        try:
            record = service.catalog.get(record_id)
        except KeyError as exc:
            raise HTTPException(404, str(exc)) from None
        return _image_response(request, save_pgm(record.image), PGM_MEDIA_TYPE)

    # -- session workflow --------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session():
        return session_snapshot(service.create_session())

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_snapshot(service.get_session(session_id))

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        sess = service.get_session(session_id)
        with sess.lock:
            return {"transcript": [dict(e) for e in sess.transcript]}

    @app.put("/sessions/{session_id}/description")
    def put_description(session_id: str, description: dict = Body(...)):
        for kind, params in description.items():
            if not isinstance(params, dict):
                raise HTTPException(400, f"parameters for {kind!r} must be an object")
        return session_snapshot(service.submit_description(session_id, description))

    @app.post("/sessions/{session_id}/selection")
    def post_selection(session_id: str, body: dict = Body(...)):
        kind = body.get("kind")
        record_id = body.get("record_id")
        if not isinstance(kind, str) or not isinstance(record_id, str):
            raise HTTPException(400, "body needs string fields 'kind' and 'record_id'")
        return session_snapshot(service.select_candidate(session_id, kind, record_id))

    @app.post("/sessions/{session_id}/assemble")
    def post_assemble(session_id: str):
        return session_snapshot(service.assemble_session(session_id))

    @app.post("/sessions/{session_id}/tune")
    def post_tune(session_id: str, body: dict = Body(default={})):
        threshold = body.get("threshold")
        if threshold is not None and not isinstance(threshold, int):
            raise HTTPException(400, "'threshold' must be an integer")
        return session_snapshot(service.tune_session(session_id, threshold))

    @app.post("/sessions/{session_id}/nudge")
    def post_nudge(session_id: str, body: dict = Body(...)):
        kind = body.get("kind")
        d_row = body.get("d_row")
        d_col = body.get("d_col")
        if not isinstance(kind, str) or not isinstance(d_row, int) or not isinstance(d_col, int):
            raise HTTPException(
                400, "body needs 'kind' (string) and integer 'd_row', 'd_col'"
            )
        return session_snapshot(service.nudge_component(session_id, kind, d_row, d_col))

    @app.get("/sessions/{session_id}/image/{stage}")
    def session_image(session_id: str, stage: str, request: Request, format: str = "pgm"):
        if stage not in STAGES:
            raise HTTPException(404, f"unknown stage {stage!r}")
        if format not in ("pgm", "text"):
            raise HTTPException(400, f"unknown format {format!r}")
        data = service.export_face(session_id, stage, format)
        if format == "text":
            return Response(content=data, media_type="text/plain")
        return _image_response(request, data, PGM_MEDIA_TYPE)

    return app
