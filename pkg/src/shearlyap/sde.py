"""Stratonovich integration of the cylinder SDE and its tangent flows.

State lives on the cylinder: amplitude y in R, phase theta in [0,1).
The drift is (-alpha*y, 1 + b*y); noise sigma * f_i(theta) enters the
amplitude only.  Because the diffusion never depends on y, the base
equation reads the same in Ito form, but every step here is the Heun
predictor-corrector scheme, which converges to the Stratonovich
solution and is applied uniformly to the tangent and projective-angle
equations where the distinction matters.

Single-step operations are plain Python (exactly mirroring the
compiled ensemble kernels in ``_kernels``); trajectory ensembles for
estimation should go through ``estimators``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .analytic import Parameters
from .couplings import PhaseCoupling
from .errors import InvalidInput, NonFiniteState

__all__ = [
    "NoiseStream",
    "CylinderState",
    "step_system",
    "step_phi",
    "step_reduced_linear",
    "sample_trajectory",
    "TrajectoryRecord",
]

# Tangent frames are re-orthonormalized whenever the leading norm
# leaves this band (and on the ensemble kernels' fixed cadence).
RENORM_BAND = (1e-6, 1e6)
DEFAULT_RENORM_EVERY = 10


def _wrap_unit(x: float) -> float:
    if not math.isfinite(x):
        raise NonFiniteState("state left the representable range (is dt too large?)")
    return x - math.floor(x)


@dataclass(frozen=True)
class NoiseStream:
    """Reproducible Wiener-increment source for one trajectory.

    Identical (seed, stream_id) give bit-identical increments; distinct
    stream_ids give independent streams of the same master seed.
    """

    seed: int
    stream_id: int = 0
    dt: float = 1e-3

    def __post_init__(self) -> None:
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise InvalidInput(f"seed must be an integer in [0, 2^64), got {self.seed!r}")
        if not (isinstance(self.stream_id, int) and self.stream_id >= 0):
            raise InvalidInput(f"stream_id must be a nonnegative integer, got {self.stream_id!r}")
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise InvalidInput(f"dt must be a positive real, got {self.dt!r}")

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        )

    def increments(self, n_steps: int, m: int) -> np.ndarray:
        """(n_steps, m) array of N(0, dt) Wiener increments."""
        if n_steps < 1 or m < 1:
            raise InvalidInput("n_steps and m must be positive")
        return self.generator().normal(0.0, math.sqrt(self.dt), size=(n_steps, m))


@dataclass(frozen=True)
class CylinderState:
    """Point on the cylinder, optionally carrying a tangent frame.

    ``v`` is the leading tangent vector (amplitude, phase components);
    ``w`` an optional second vector for area (determinant) tracking.
    ``log_norm`` and ``area_log`` accumulate log|v| and log|det| flushed
    at renormalization events.
    """

    y: float
    theta: float
    v: tuple[float, float] | None = None
    w: tuple[float, float] | None = None
    log_norm: float = 0.0
    area_log: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta < 1.0):
            raise InvalidInput(f"theta must lie in [0,1), got {self.theta!r}")
        if self.v is not None and self.v[0] == 0.0 and self.v[1] == 0.0:
            raise InvalidInput("tangent vector must be nonzero")
        if self.w is not None and self.v is None:
            raise InvalidInput("second tangent vector requires a first one")


def _require_finite(*values: float) -> None:
    for x in values:
        if not math.isfinite(x):
            raise NonFiniteState(
                "state left the representable range (is dt too large?)"
            )


def step_system(
    s: CylinderState,
    p: Parameters,
    c: PhaseCoupling,
    dW: Sequence[float],
    dt: float,
    renormalize: bool | None = None,
) -> CylinderState:
    """One Heun step of the cylinder SDE, tangent frame included.

    The tangent update freezes the driving path and applies the
    trajectory Jacobian, evaluating coupling derivatives at the
    predictor point for the corrector stage.  ``renormalize`` forces
    (True) or suppresses (False) frame renormalization; the default
    renormalizes only when |v| leaves the safe band.
    """
    if len(dW) != c.m:
        raise InvalidInput(f"expected {c.m} Wiener increments, got {len(dW)}")
    if not dt > 0.0:
        raise InvalidInput(f"dt must be positive, got {dt!r}")
    alpha, b, sigma = p.alpha, p.b, p.sigma
    y, th = s.y, s.theta

    f = c.values(th)
    ay = -alpha * y
    ath = 1.0 + b * y
    noise_y = sigma * sum(fi * g for fi, g in zip(f, dW))
    yp = y + ay * dt + noise_y
    thp = th + ath * dt
    fp = c.values(_wrap_unit(thp))

    y_new = y + 0.5 * (ay - alpha * yp) * dt + 0.5 * sigma * sum(
        (fi + fpi) * g for fi, fpi, g in zip(f, fp, dW)
    )
    th_new = _wrap_unit(th + 0.5 * (ath + 1.0 + b * yp) * dt)
    _require_finite(y_new, th_new)

    if s.v is None:
        return replace(s, y=y_new, theta=th_new)

    d = c.derivatives(th)
    dp = c.derivatives(_wrap_unit(thp))

    def advance(u1: float, u2: float) -> tuple[float, float]:
        t1 = u1 - alpha * u1 * dt + sigma * sum(di * g for di, g in zip(d, dW)) * u2
        t2 = u2 + b * u1 * dt
        n1 = u1 + 0.5 * (-alpha * u1 - alpha * t1) * dt + 0.5 * sigma * sum(
            (di * u2 + dpi * t2) * g for di, dpi, g in zip(d, dp, dW)
        )
        n2 = u2 + 0.5 * b * (u1 + t1) * dt
        return n1, n2

    v = advance(*s.v)
    _require_finite(*v)
    w = advance(*s.w) if s.w is not None else None
    if w is not None:
        _require_finite(*w)

    log_norm, area_log = s.log_norm, s.area_log
    nv = math.hypot(*v)
    need = renormalize if renormalize is not None else not (
        RENORM_BAND[0] <= nv <= RENORM_BAND[1]
    )
    if need:
        if nv == 0.0:
            raise NonFiniteState("tangent vector collapsed to zero")
        v_hat = (v[0] / nv, v[1] / nv)
        log_norm += math.log(nv)
        if w is not None:
            dot = v_hat[0] * w[0] + v_hat[1] * w[1]
            w_perp = (w[0] - dot * v_hat[0], w[1] - dot * v_hat[1])
            nw = math.hypot(*w_perp)
            if nw == 0.0:
                raise NonFiniteState("tangent frame became degenerate")
            area_log += math.log(nv) + math.log(nw)
            w = (w_perp[0] / nw, w_perp[1] / nw)
        v = v_hat
    return CylinderState(
        y=y_new, theta=th_new, v=v, w=w, log_norm=log_norm, area_log=area_log
    )


def step_phi(
    phi: float,
    theta: float,
    p: Parameters,
    c: PhaseCoupling,
    dW: Sequence[float],
    dt: float,
) -> float:
    """One Heun step of the projective angle phi in [0, pi).

    d(phi) = alpha cos sin + b cos^2 drives the drift; each Wiener
    driver enters through -sigma f_i'(theta) sin^2(phi).  theta is held
    at the supplied value for the step.
    """
    if len(dW) != c.m:
        raise InvalidInput(f"expected {c.m} Wiener increments, got {len(dW)}")
    if not dt > 0.0:
        raise InvalidInput(f"dt must be positive, got {dt!r}")
    d = c.derivatives(_wrap_unit(theta))
    alpha, b, sigma = p.alpha, p.b, p.sigma

    def drift(x: float) -> float:
        return alpha * math.cos(x) * math.sin(x) + b * math.cos(x) ** 2

    s2 = math.sin(phi) ** 2
    noise = -sigma * s2 * sum(di * g for di, g in zip(d, dW))
    php = phi + drift(phi) * dt + noise
    s2p = math.sin(php) ** 2
    phi_new = phi + 0.5 * (drift(phi) + drift(php)) * dt - 0.5 * sigma * sum(
        (di * s2 + di * s2p) * g for di, g in zip(d, dW)
    )
    _require_finite(phi_new)
    return phi_new - math.pi * math.floor(phi_new / math.pi)


def step_reduced_linear(
    v: Sequence[float],
    p: Parameters,
    dW: float,
    dt: float,
    transformed: bool = False,
) -> tuple[float, float]:
    """One Heun step of the angle-free linear tangent system.

    ``transformed=False``: dv = [[-a,0],[b,0]] v dt + sigma [[0,1],[0,0]] v o dW.
    ``transformed=True`` uses the component-swapped, sigma-rescaled
    coordinates dv = [[0, sigma*b],[0,-a]] v dt + [[0,0],[1,0]] v o dW,
    which leave the Lyapunov exponents unchanged.
    """
    if not dt > 0.0:
        raise InvalidInput(f"dt must be positive, got {dt!r}")
    alpha, b, sigma = p.alpha, p.b, p.sigma
    v1, v2 = float(v[0]), float(v[1])

    if transformed:
        drift = lambda x1, x2: (sigma * b * x2, -alpha * x2)
        noise = lambda x1, x2: (0.0, x1)
    else:
        drift = lambda x1, x2: (-alpha * x1, b * x1)
        noise = lambda x1, x2: (sigma * x2, 0.0)

    a1, a2 = drift(v1, v2)
    n1, n2 = noise(v1, v2)
    p1 = v1 + a1 * dt + n1 * dW
    p2 = v2 + a2 * dt + n2 * dW
    ap1, ap2 = drift(p1, p2)
    np1, np2 = noise(p1, p2)
    out = (
        v1 + 0.5 * (a1 + ap1) * dt + 0.5 * (n1 + np1) * dW,
        v2 + 0.5 * (a2 + ap2) * dt + 0.5 * (n2 + np2) * dW,
    )
    _require_finite(*out)
    return out


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    y: float
    theta: float
    v_y: float
    v_theta: float
    log_norm: float


def sample_trajectory(
    p: Parameters,
    c: PhaseCoupling,
    state: CylinderState,
    T: float,
    dt: float,
    noise: NoiseStream,
    record_every: int = 1,
) -> list[TrajectoryRecord]:
    """Step a single trajectory, recording every ``record_every`` steps.

    Python-speed; meant for trajectory dumps and debugging, not for
    ensemble estimation.
    """
    if not (T > 0.0 and dt > 0.0 and record_every >= 1):
        raise InvalidInput("need T > 0, dt > 0, record_every >= 1")
    n_steps = max(1, round(T / dt))
    dWs = noise.increments(n_steps, c.m)
    if state.v is None:
        state = replace(state, v=(1.0, 0.0))

    def rec(t: float, s: CylinderState) -> TrajectoryRecord:
        return TrajectoryRecord(t, s.y, s.theta, s.v[0], s.v[1], s.log_norm)

    out = [rec(0.0, state)]
    for k in range(n_steps):
        state = step_system(state, p, c, dWs[k], dt)
        if (k + 1) % record_every == 0 or k == n_steps - 1:
            out.append(rec((k + 1) * dt, state))
    return out
