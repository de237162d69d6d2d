"""Service operations: model in, model out.

One function per endpoint, shared verbatim by the FastAPI routes and
the CLI's in-process dispatch.  Heavy modules (numba ensembles, the
sparse solver) are imported inside the operations that need them, so
the light paths stay fast to load.
"""

from __future__ import annotations

from ..analytic import Parameters, classify, find_critical_ratio, lyapunov_pair
from ..couplings import PhaseCoupling
from ..sweep import McOptions, SweepMode, SweepSpec, bifurcation_curve, run_sweep
from . import models as m

__all__ = [
    "op_c0",
    "op_lyapunov",
    "op_bifurcation",
    "op_sweep",
    "op_simulate",
    "op_fp",
    "op_attractor",
    "sweep_result_to_response",
    "response_to_sweep_result",
]


def op_c0(tol: float = 1e-10) -> m.C0Response:
    return m.C0Response(c0=find_critical_ratio(tol), tol=tol)


def op_lyapunov(req: m.LyapunovRequest) -> m.LyapunovResponse:
    p = Parameters(req.alpha, req.b, req.sigma)
    pair = lyapunov_pair(p)
    regime = classify(p, req.tol)
    return m.LyapunovResponse(
        alpha=req.alpha,
        b=req.b,
        sigma=req.sigma,
        lambda1=pair.lambda1,
        lambda2=pair.lambda2,
        error=pair.error,
        method=pair.method.value,
        regime=regime.kind.value,
        sigma0=regime.sigma0,
    )


def op_bifurcation(req: m.BifurcationRequest) -> m.BifurcationResponse:
    curve = bifurcation_curve(tuple(req.alphas), req.b)
    return m.BifurcationResponse(
        b=curve.b,
        points=[m.CurvePoint(alpha=a, sigma0=s) for a, s in curve.points],
    )


def sweep_result_to_response(result) -> m.SweepResponse:
    return m.SweepResponse(
        rows=[
            m.SweepRowModel(
                alpha=r.alpha,
                b=r.b,
                sigma=r.sigma,
                lambda1=r.lambda1,
                lambda2=r.lambda2,
                regime=r.regime,
                sigma0=r.sigma0,
                method=r.method,
                error=r.error,
            )
            for r in result.rows
        ]
    )


def response_to_sweep_result(resp: m.SweepResponse):
    from ..sweep import SweepResult, SweepRow

    return SweepResult(rows=tuple(SweepRow(**row.model_dump()) for row in resp.rows))


def op_sweep(req: m.SweepRequest) -> m.SweepResponse:
    spec = SweepSpec(
        alpha_grid=tuple(req.alphas),
        b_grid=tuple(req.bs),
        sigma_grid=tuple(req.sigmas),
        mode=SweepMode(req.mode),
        seed=req.seed,
        mc=McOptions(
            T=req.T,
            dt=req.dt,
            n_traj=req.n_traj,
            coupling=PhaseCoupling.from_name(req.coupling),
        ),
    )
    return sweep_result_to_response(run_sweep(spec))


def op_simulate(req: m.SimulateRequest) -> m.SimulateResponse:
    from ..errors import DegenerateNoise
    from ..estimators import fk_time_average, mc_lyapunov

    p = Parameters(req.alpha, req.b, req.sigma)
    coupling = PhaseCoupling.from_name(req.coupling)

    def to_model(est) -> m.EstimateModel:
        return m.EstimateModel(
            value=est.value,
            stderr=est.stderr,
            n_samples=est.n_samples,
            horizon=est.horizon,
            dt=est.dt,
        )

    out = m.SimulateResponse()
    if req.estimator in ("tangent", "both"):
        lam, s12 = mc_lyapunov(p, coupling, req.T, req.dt, req.n_traj, req.seed)
        out.lambda1 = to_model(lam)
        out.lambda_sum = to_model(s12)
    if req.estimator in ("angle", "both"):
        fk = fk_time_average(p, coupling, req.T, req.dt, req.n_traj, req.seed)
        out.angle_average = to_model(fk)
    try:
        out.reference_lambda1 = lyapunov_pair(p).lambda1
    except DegenerateNoise:
        out.reference_lambda1 = None
    return out


def op_fp(req: m.FpRequest) -> m.FpResponse:
    from ..fokker_planck import lambda1_from_density, stationary_density_fp

    p = Parameters(req.alpha, req.b, req.sigma)
    grid = stationary_density_fp(p, req.n)
    return m.FpResponse(
        n=grid.n,
        flux=grid.flux,
        lambda1=lambda1_from_density(grid, p),
        phi=[float(x) for x in grid.phi],
        p=[float(x) for x in grid.p],
    )


def op_attractor(req: m.AttractorRequest) -> m.AttractorResponse:
    from ..estimators import pullback_sample

    p = Parameters(req.alpha, req.b, req.sigma)
    sample = pullback_sample(
        p,
        PhaseCoupling.from_name(req.coupling),
        req.n_points,
        req.T,
        req.dt,
        req.seed,
    )
    return m.AttractorResponse(
        final_diameter=sample.final_diameter,
        times=[float(t) for t in sample.times],
        diameters=[float(d) for d in sample.diameters],
        points=[[float(y), float(th)] for y, th in sample.points],
    )
