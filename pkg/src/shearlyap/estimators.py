"""Monte Carlo exponent estimators and the pullback-attractor sampler.

Three independent routes to the top exponent live in this package:
tangent-growth Monte Carlo (here), the ergodic time average of the
projective-angle integrand (here), and stationary-density quadrature
(``fokker_planck``).  They must agree within their combined error bars;
the analytic quadrature route is the precision reference.

Ensembles run trajectory-per-worker on compiled kernels (numba,
nogil), so thread pools give real parallelism.  Every estimator is
bit-reproducible for a fixed (seed, n_traj, dt, T).
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .analytic import Parameters
from .config import worker_count
from .couplings import PhaseCoupling
from .errors import InsufficientHorizonWarning, InvalidInput, NonFiniteState
from .sde import DEFAULT_RENORM_EVERY, NoiseStream

__all__ = [
    "Estimate",
    "mc_lyapunov",
    "fk_time_average",
    "reduced_linear_growth",
    "pullback_sample",
    "PullbackSample",
    "cylinder_distance",
]


@dataclass(frozen=True)
class Estimate:
    """Ensemble mean with CLT standard error."""

    value: float
    stderr: float
    n_samples: int
    horizon: float
    dt: float

    def __post_init__(self) -> None:
        if self.n_samples < 2:
            raise InvalidInput("an Estimate needs at least 2 samples for a stderr")
        if not self.stderr >= 0.0:
            raise InvalidInput(f"stderr must be nonnegative, got {self.stderr!r}")


def _make_estimate(samples: np.ndarray, T: float, dt: float) -> Estimate:
    value = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(len(samples)))
    if stderr > abs(value) and value != 0.0:
        warnings.warn(
            f"standard error {stderr:.3g} exceeds |estimate| {abs(value):.3g}; "
            "consider a longer horizon",
            InsufficientHorizonWarning,
            stacklevel=3,
        )
    return Estimate(value=value, stderr=stderr, n_samples=len(samples), horizon=T, dt=dt)


def _check_ensemble_args(p: Parameters, T: float, dt: float, n_traj: int) -> tuple[int, int]:
    """Validate horizon arguments; return (n_steps, measure_from)."""
    if not (T > 0.0 and dt > 0.0 and math.isfinite(T) and math.isfinite(dt)):
        raise InvalidInput("T and dt must be positive reals")
    if T < 100.0 / p.alpha:
        raise InvalidInput(
            f"horizon T={T} too short: need at least 100/alpha = {100.0 / p.alpha}"
        )
    if n_traj < 2:
        raise InvalidInput("need at least 2 trajectories")
    n_steps = max(1, round(T / dt))
    burn = max(0.1 * T, 20.0 / p.alpha)
    measure_from = min(n_steps - 1, round(burn / dt))
    return n_steps, measure_from


def _padded_increments(noise: NoiseStream, n_steps: int, m: int) -> np.ndarray:
    """Increments as an (n_steps, 2) array; unused drivers are zero."""
    dW = noise.increments(n_steps, m)
    if m == 1:
        dW = np.hstack([dW, np.zeros_like(dW)])
    return dW


def _run_ensemble(task, n_traj: int) -> list:
    with ThreadPoolExecutor(max_workers=min(worker_count(), n_traj)) as pool:
        return list(pool.map(task, range(n_traj)))


def mc_lyapunov(
    p: Parameters,
    c: PhaseCoupling,
    T: float,
    dt: float,
    n_traj: int,
    seed: int,
) -> tuple[Estimate, Estimate]:
    """(lambda1, lambda1+lambda2) from tangent-frame growth rates.

    Each trajectory carries two tangent vectors, Gram-Schmidt
    renormalized on a fixed cadence; the leading log-norm rate
    estimates lambda1 and the log-area rate the exponent sum.  The
    first max(10% of T, 20/alpha) time units are discarded.
    """
    n_steps, measure_from = _check_ensemble_args(p, T, dt, n_traj)
    window = (n_steps - measure_from) * dt
    kind = c.kind.code
    # Generic initial frame: the coordinate axes lie in invariant
    # subspaces at degenerate parameters (v_theta = 0 stays there when
    # b = 0), which would measure the wrong exponent.
    s = math.sqrt(0.5)

    def one(i: int) -> tuple[float, float]:
        dW = _padded_increments(NoiseStream(seed, i, dt), n_steps, c.m)
        out = _kernels.run_tangent(
            0.0, 0.0, s, s, -s, s,
            p.alpha, p.b, p.sigma, kind, dW, dt,
            DEFAULT_RENORM_EVERY, measure_from,
        )
        log1, area = out[6], out[7]
        if not (math.isfinite(log1) and math.isfinite(area)):
            raise NonFiniteState(f"trajectory {i} left the representable range")
        return log1 / window, area / window

    rates = np.array(_run_ensemble(one, n_traj))
    return (
        _make_estimate(rates[:, 0], T, dt),
        _make_estimate(rates[:, 1], T, dt),
    )


def fk_time_average(
    p: Parameters,
    c: PhaseCoupling,
    T: float,
    dt: float,
    n_traj: int,
    seed: int,
) -> Estimate:
    """lambda1 as the ergodic time average of the angle integrand q(phi).

    phi follows its projective SDE jointly with (y, theta); under the
    unit derivative-sum condition the stationary average of q over the
    angle process is exactly the top exponent.
    """
    n_steps, measure_from = _check_ensemble_args(p, T, dt, n_traj)
    window = (n_steps - measure_from) * dt
    kind = c.kind.code

    def one(i: int) -> float:
        dW = _padded_increments(NoiseStream(seed, i, dt), n_steps, c.m)
        out = _kernels.run_angle_average(
            0.0, 0.0, 1.0, p.alpha, p.b, p.sigma, kind, dW, dt, measure_from
        )
        qsum = out[3]
        if not math.isfinite(qsum):
            raise NonFiniteState(f"trajectory {i} left the representable range")
        return qsum / window

    return _make_estimate(np.array(_run_ensemble(one, n_traj)), T, dt)


def reduced_linear_growth(
    p: Parameters,
    T: float,
    dt: float,
    n_traj: int,
    seed: int,
    transformed: bool = False,
) -> Estimate:
    """Top-exponent estimate from the angle-free linear tangent system."""
    n_steps, measure_from = _check_ensemble_args(p, T, dt, n_traj)
    window = (n_steps - measure_from) * dt

    def one(i: int) -> float:
        dW = NoiseStream(seed, i, dt).increments(n_steps, 1)
        out = _kernels.run_reduced(
            1.0, 0.0, p.alpha, p.b, p.sigma, transformed, dW, dt,
            DEFAULT_RENORM_EVERY, measure_from,
        )
        if not math.isfinite(out[2]):
            raise NonFiniteState(f"trajectory {i} left the representable range")
        return out[2] / window

    return _make_estimate(np.array(_run_ensemble(one, n_traj)), T, dt)


def cylinder_distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Distance on the cylinder: euclidean in y, arc metric in theta."""
    dy = a[0] - b[0]
    dth = abs(a[1] - b[1]) % 1.0
    dth = min(dth, 1.0 - dth)
    return math.hypot(dy, dth)


@dataclass(frozen=True)
class PullbackSample:
    """Final point cloud plus the diameter history under shared noise."""

    points: np.ndarray  # (n_points, 2): y, theta
    times: np.ndarray
    diameters: np.ndarray

    @property
    def final_diameter(self) -> float:
        return float(self.diameters[-1])


def pullback_sample(
    p: Parameters,
    c: PhaseCoupling,
    n_points: int,
    T: float,
    dt: float,
    seed: int,
    n_snapshots: int = 400,
) -> PullbackSample:
    """Evolve a cloud of initial conditions under one shared noise path.

    Initial amplitudes are spread over +-2 stationary standard
    deviations (2 sigma / sqrt(2 alpha)), phases over the whole circle.
    A shrinking diameter diagnoses synchronization (lambda1 < 0); a
    persistent one, a spread-out random attractor (lambda1 > 0).  At
    least 10 points are recommended for a meaningful diameter.
    """
    if n_points < 1:
        raise InvalidInput("need at least one point")
    if not (T > 0.0 and dt > 0.0):
        raise InvalidInput("T and dt must be positive")
    n_steps = max(1, round(T / dt))

    init_rng = NoiseStream(seed, 0, dt).generator()
    spread = 2.0 * p.sigma / math.sqrt(2.0 * p.alpha)
    ys = init_rng.uniform(-spread, spread, size=n_points)
    ths = init_rng.uniform(0.0, 1.0, size=n_points)

    dW = _padded_increments(NoiseStream(seed, 1, dt), n_steps, c.m)
    snap_every = max(1, n_steps // n_snapshots)
    n_snaps = n_steps // snap_every + 1
    diameters = np.zeros(n_snaps)
    status = _kernels.run_pullback(
        ys, ths, p.alpha, p.b, p.sigma, c.kind.code, dW, dt, snap_every, diameters
    )
    if status != 0:
        raise NonFiniteState("a cloud point left the representable range")
    times = np.arange(n_snaps) * (snap_every * dt)
    return PullbackSample(
        points=np.column_stack([ys, ths]), times=times, diameters=diameters
    )
