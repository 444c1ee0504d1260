"""HTTP annotation endpoint.

``POST /v1/annotate`` takes ``{"text": ..., "language"?: ..., "select"?: [...]}``
and answers with the annotation response JSON. ``GET /healthz`` reports
readiness. Errors come back as ``{"error": {"code": ..., "message": ...}}``.
"""

from __future__ import annotations

import json
import logging
from typing import List, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .document import AnnotationKind, response_dict
from .errors import EmptyText, OversizeInput, UnknownLanguage
from .pipeline import Annotator

log = logging.getLogger(__name__)


class AnnotateRequest(BaseModel):
    text: str
    language: Optional[str] = None
    select: Optional[List[str]] = None


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def parse_selection(select: Optional[List[str]]):
    if select is None:
        return None
    return frozenset(AnnotationKind.parse(k) for k in select)


def create_app(annotator: Annotator) -> FastAPI:
    app = FastAPI(title="annotext", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", "body must be JSON with a string 'text' field")

    @app.exception_handler(Exception)
    async def _internal(request: Request, exc: Exception):
        log.exception("unhandled error while serving %s", request.url.path)
        return _error(500, "internal_error", "internal error")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "languages": sorted(annotator.resources.languages)}

    @app.post("/v1/annotate")
    def annotate(req: AnnotateRequest):
        if not req.text.strip():
            return _error(400, "empty_text", "text is empty")
        try:
            kinds = parse_selection(req.select)
        except ValueError:
            return _error(400, "bad_selection",
                          f"select must name kinds among {[k.value for k in AnnotationKind]}")
        try:
            doc = annotator.annotate(req.text, language=req.language, select=kinds)
        except OversizeInput as exc:
            return _error(400, "oversize_input", str(exc))
        except UnknownLanguage as exc:
            return _error(400, "unsupported_language", str(exc))
        except EmptyText as exc:
            return _error(400, "empty_text", str(exc))
        body = json.dumps(response_dict(doc, kinds), ensure_ascii=False)
        return Response(content=body, media_type="application/json")

    return app


def serve(annotator: Annotator, host: str = "127.0.0.1", port: int = 8080) -> None:
    import uvicorn
    uvicorn.run(create_app(annotator), host=host, port=port)
