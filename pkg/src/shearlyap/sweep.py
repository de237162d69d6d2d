"""Parameter sweeps and the bifurcation curve.

Grid points are dispatched to a thread pool (size from the
SHEARLYAP_WORKERS environment variable) and re-sorted afterwards, so
results never depend on scheduling.  Monte Carlo rows derive their
seeds from (master seed, grid indices), making sweeps reproducible
under any degree of parallelism.  Failures (e.g. the degenerate
sigma = 0 column of a full-plane sweep) become marked rows, not
aborts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import product

from .analytic import (
    CLASSIFY_TOL,
    Parameters,
    RegimeKind,
    classify,
    critical_sigma,
    lyapunov_pair,
)
from .config import DEFAULT_DT, DEFAULT_N_TRAJ, DEFAULT_SEED, worker_count
from .couplings import TENT, PhaseCoupling
from .errors import InvalidInput, NonConvergence, ShearLyapError

__all__ = [
    "SweepMode",
    "McOptions",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "BifurcationCurve",
    "run_sweep",
    "bifurcation_curve",
    "derived_seed",
]

# Horizon default for sweep-embedded Monte Carlo: long enough for the
# burn-in rule at alpha >= 0.1, light enough for full grids.
DEFAULT_SWEEP_HORIZON = 1000.0


class SweepMode(str, Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte_carlo"
    BOTH = "both"


@dataclass(frozen=True)
class McOptions:
    T: float = DEFAULT_SWEEP_HORIZON
    dt: float = DEFAULT_DT
    n_traj: int = DEFAULT_N_TRAJ
    coupling: PhaseCoupling = TENT


def _validated_grid(name: str, grid: tuple[float, ...]) -> tuple[float, ...]:
    if len(grid) == 0:
        raise InvalidInput(f"{name} must be nonempty")
    vals = tuple(float(x) for x in grid)
    if any(not math.isfinite(x) for x in vals):
        raise InvalidInput(f"{name} contains non-finite entries")
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise InvalidInput(f"{name} must be strictly increasing")
    return vals


@dataclass(frozen=True)
class SweepSpec:
    alpha_grid: tuple[float, ...]
    b_grid: tuple[float, ...]
    sigma_grid: tuple[float, ...]
    mode: SweepMode = SweepMode.ANALYTIC
    output_path: str | None = None
    seed: int = DEFAULT_SEED
    mc: McOptions = field(default_factory=McOptions)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha_grid", _validated_grid("alpha_grid", tuple(self.alpha_grid)))
        object.__setattr__(self, "b_grid", _validated_grid("b_grid", tuple(self.b_grid)))
        object.__setattr__(self, "sigma_grid", _validated_grid("sigma_grid", tuple(self.sigma_grid)))
        if any(a <= 0.0 for a in self.alpha_grid):
            raise InvalidInput("every alpha in the grid must be positive")
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", SweepMode(self.mode))


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    b: float
    sigma: float
    lambda1: float | None
    lambda2: float | None
    regime: str
    sigma0: float | None
    method: str
    error: float | str | None


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]

    def slice(self, alpha: float, b: float, method: str | None = None) -> tuple[SweepRow, ...]:
        return tuple(
            r
            for r in self.rows
            if r.alpha == alpha and r.b == b and (method is None or r.method == method)
        )


def derived_seed(seed: int, ia: int, ib: int, isg: int) -> int:
    """Stable per-grid-point seed: hash of (master seed, grid indices)."""
    import numpy as np

    ss = np.random.SeedSequence(entropy=(seed, ia, ib, isg))
    return int(ss.generate_state(1, np.uint64)[0])


def _sigma0_or_none(alpha: float, b: float) -> float | None:
    return critical_sigma(alpha, b) if b != 0.0 else None


def _analytic_row(alpha: float, b: float, sigma: float) -> SweepRow:
    base = dict(alpha=alpha, b=b, sigma=sigma, method="quadrature")
    try:
        p = Parameters(alpha, b, sigma)
        regime = classify(p)
        pair = lyapunov_pair(p)
    except ShearLyapError as exc:
        return SweepRow(
            lambda1=None,
            lambda2=None,
            regime="",
            sigma0=_sigma0_or_none(alpha, b),
            error=type(exc).__name__,
            **base,
        )
    return SweepRow(
        lambda1=pair.lambda1,
        lambda2=pair.lambda2,
        regime=regime.kind.value,
        sigma0=regime.sigma0,
        error=pair.error,
        **base,
    )


def _mc_row(alpha: float, b: float, sigma: float, mc: McOptions, seed: int) -> SweepRow:
    from .estimators import mc_lyapunov

    base = dict(alpha=alpha, b=b, sigma=sigma, method="monte_carlo")
    try:
        p = Parameters(alpha, b, sigma)
        lam, s12 = mc_lyapunov(p, mc.coupling, mc.T, mc.dt, mc.n_traj, seed)
    except ShearLyapError as exc:
        return SweepRow(
            lambda1=None,
            lambda2=None,
            regime="",
            sigma0=_sigma0_or_none(alpha, b),
            error=type(exc).__name__,
            **base,
        )
    # under statistical resolution the sign is undecided
    if abs(lam.value) <= 3.0 * lam.stderr:
        regime = RegimeKind.CRITICAL
    elif lam.value > 0.0:
        regime = RegimeKind.RANDOM_STRANGE_ATTRACTOR
    else:
        regime = RegimeKind.RANDOM_EQUILIBRIUM
    return SweepRow(
        lambda1=lam.value,
        lambda2=s12.value - lam.value,
        regime=regime.value,
        sigma0=_sigma0_or_none(alpha, b),
        error=lam.stderr,
        **base,
    )


def _check_sign_structure(spec: SweepSpec, rows: list[SweepRow]) -> None:
    """Along each (alpha, b) slice the analytic sign sequence must read
    (-)* 0? (+)*: negatives, at most one near-zero, then positives."""
    for alpha, b in product(spec.alpha_grid, spec.b_grid):
        signs = [
            0 if abs(r.lambda1) <= CLASSIFY_TOL else int(math.copysign(1.0, r.lambda1))
            for r in rows
            if r.method == "quadrature" and r.alpha == alpha and r.b == b and r.lambda1 is not None
        ]
        expected = sorted(signs)
        if signs != expected or expected.count(0) > 1:
            raise NonConvergence(
                f"sign structure violated on slice alpha={alpha}, b={b}: {signs}"
            )


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate the grid; rows come back in lexicographic
    (alpha, b, sigma, method) order regardless of worker scheduling."""
    points = list(
        product(enumerate(spec.alpha_grid), enumerate(spec.b_grid), enumerate(spec.sigma_grid))
    )

    def work(point) -> list[SweepRow]:
        (ia, alpha), (ib, b), (isg, sigma) = point
        rows: list[SweepRow] = []
        if spec.mode in (SweepMode.ANALYTIC, SweepMode.BOTH):
            rows.append(_analytic_row(alpha, b, sigma))
        if spec.mode in (SweepMode.MONTE_CARLO, SweepMode.BOTH):
            rows.append(_mc_row(alpha, b, sigma, spec.mc, derived_seed(spec.seed, ia, ib, isg)))
        return rows

    if len(points) == 1:
        chunks = [work(points[0])]
    else:
        with ThreadPoolExecutor(max_workers=min(worker_count(), len(points))) as pool:
            chunks = list(pool.map(work, points))
    rows = [row for chunk in chunks for row in chunk]
    if spec.mode in (SweepMode.ANALYTIC, SweepMode.BOTH):
        _check_sign_structure(spec, rows)
    return SweepResult(rows=tuple(rows))


@dataclass(frozen=True)
class BifurcationCurve:
    """sigma0(alpha, b) over an alpha grid at fixed shear b."""

    b: float
    points: tuple[tuple[float, float], ...]  # (alpha, sigma0)


def bifurcation_curve(alpha_grid, b: float) -> BifurcationCurve:
    alphas = _validated_grid("alpha_grid", tuple(alpha_grid))
    if any(a <= 0.0 for a in alphas):
        raise InvalidInput("every alpha must be positive")
    if b == 0.0 or not math.isfinite(b):
        raise InvalidInput(f"b must be a nonzero real, got {b!r}")
    points = tuple((a, critical_sigma(a, b)) for a in alphas)
    if any(x[1] >= y[1] for x, y in zip(points, points[1:])):
        raise NonConvergence("bifurcation curve failed to increase with alpha")
    return BifurcationCurve(b=b, points=points)
