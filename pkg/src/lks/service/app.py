"""FastAPI application exposing the core transforms as JSON endpoints."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import DegeneracyError, InvalidStateError, NumericalError, UndefinedAngles
from . import handlers
from . import schemas as sch

__all__ = ["create_app"]


def _error_body(exc: Exception) -> dict:
    body = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, UndefinedAngles):
        body["undetermined"] = list(exc.undetermined)
        body["surviving"] = dict(exc.surviving)
    return {"error": body}


def create_app() -> FastAPI:
    app = FastAPI(title="lks service", version=__version__)

    @app.exception_handler(DegeneracyError)
    async def _degeneracy(_req: Request, exc: DegeneracyError):
        return JSONResponse(status_code=422, content=_error_body(exc))

    @app.exception_handler(InvalidStateError)
    async def _invalid(_req: Request, exc: InvalidStateError):
        return JSONResponse(status_code=400, content=_error_body(exc))

    @app.exception_handler(ValueError)
    async def _value(_req: Request, exc: ValueError):
        return JSONResponse(status_code=400, content=_error_body(exc))

    @app.exception_handler(NumericalError)
    async def _numerical(_req: Request, exc: NumericalError):
        return JSONResponse(status_code=500, content=_error_body(exc))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/api/transform", response_model=sch.TransformResponse)
    def transform(req: sch.TransformRequest):
        return handlers.transform(req)

    @app.post("/api/classify", response_model=sch.ClassifyResponse,
              response_model_by_alias=True)
    def classify(req: sch.ClassifyRequest):
        return handlers.classify_state(req)

    @app.post("/api/lk/equilibria", response_model=sch.EquilibriaResponse,
              response_model_by_alias=True)
    def lk_equilibria(req: sch.EquilibriaRequest):
        return handlers.lk_equilibria(req)

    @app.post("/api/lk/portrait", response_model=sch.PortraitResponse)
    def lk_portrait(req: sch.PortraitRequest):
        return handlers.lk_portrait(req)

    @app.post("/api/lk/propagate", response_model=sch.SecularPropagateResponse)
    def lk_propagate(req: sch.SecularPropagateRequest):
        return handlers.lk_propagate(req)

    @app.post("/api/lk/validate", response_model=sch.ValidateResponse)
    def lk_validate(req: sch.ValidateRequest):
        return handlers.lk_validate(req)

    @app.post("/api/fibre", response_model=sch.FibreResponse)
    def fibre(req: sch.FibreRequest):
        return handlers.fibre_tracks(req)

    return app
