"""FastAPI application wrapping the compute package.

Domain errors map onto structured JSON payloads: invalid input
(including the degenerate sigma*b = 0 case) gives 400, numerical
non-convergence 422, anything I/O-ish 500.  The CLI mirrors these
onto its exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import InvalidInput, IoFailure, NonConvergence, ShearLyapError
from . import models as m
from . import ops


def _status_for(exc: ShearLyapError) -> int:
    if isinstance(exc, InvalidInput):
        return 400
    if isinstance(exc, NonConvergence):
        return 422
    if isinstance(exc, IoFailure):
        return 500
    return 500


def create_app() -> FastAPI:
    app = FastAPI(
        title="shearlyap",
        version=__version__,
        description=(
            "Lyapunov exponents of a stochastically driven limit cycle on a "
            "cylinder: closed forms, Monte Carlo and Fokker-Planck "
            "estimators, parameter sweeps, and the shear-induced chaos "
            "bifurcation curve."
        ),
    )

    @app.exception_handler(ShearLyapError)
    async def domain_error_handler(request, exc: ShearLyapError):
        payload = m.ErrorPayload(error=type(exc).__name__, detail=str(exc))
        return JSONResponse(status_code=_status_for(exc), content=payload.model_dump())

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/c0", response_model=m.C0Response)
    def c0(tol: float = Query(default=1e-10, gt=0.0)) -> m.C0Response:
        return ops.op_c0(tol)

    @app.post("/lyapunov", response_model=m.LyapunovResponse)
    def lyapunov(req: m.LyapunovRequest) -> m.LyapunovResponse:
        return ops.op_lyapunov(req)

    @app.post("/bifurcation", response_model=m.BifurcationResponse)
    def bifurcation(req: m.BifurcationRequest) -> m.BifurcationResponse:
        return ops.op_bifurcation(req)

    @app.post("/sweep", response_model=m.SweepResponse)
    def sweep(req: m.SweepRequest) -> m.SweepResponse:
        return ops.op_sweep(req)

    @app.post("/simulate", response_model=m.SimulateResponse)
    def simulate(req: m.SimulateRequest) -> m.SimulateResponse:
        return ops.op_simulate(req)

    @app.post("/fp", response_model=m.FpResponse)
    def fp(req: m.FpRequest) -> m.FpResponse:
        return ops.op_fp(req)

    @app.post("/attractor", response_model=m.AttractorResponse)
    def attractor(req: m.AttractorRequest) -> m.AttractorResponse:
        return ops.op_attractor(req)

    return app
