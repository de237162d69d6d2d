"""Adaptive quadrature for the integrals behind the exponent formulas.

Two entry points: ``integrate_interval`` for finite intervals and
``integrate_half_line`` for [0, inf) integrands that decay at least
exponentially, optionally carrying an inverse-square-root factor at 0.
The singular factor is removed by the substitution u = t**2 and the
improper limit by truncating once sampled tail mass is provably below
a tenth of the tolerance.

Error control is Richardson-style step halving (adaptive Simpson):
accept a panel when its halved-step correction is within the local
error budget, otherwise split.  Deliberately free of numpy/scipy so
callers pay no heavy import cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import InvalidInput, NonConvergence

__all__ = ["QuadratureSpec", "integrate_interval", "integrate_half_line"]

# Proxy abscissa standing in for t = 0 after the u = t**2 substitution;
# 2*t*f(t**2) is continuous at 0 but f itself may not be evaluable there.
_ZERO_PROXY = 1e-12

# Truncation search gives up beyond this point; an integrand still fat
# at 2**40 does not satisfy the decay precondition.
_MAX_TRUNCATION = 2.0**40


@dataclass(frozen=True)
class QuadratureSpec:
    """Absolute error target, refinement budget, and endpoint behaviour.

    ``singularity_at_zero`` marks half-line integrands with a u**(-1/2)
    factor: u**(1/2) * f(u) must extend continuously to 0.
    """

    tolerance: float = 1e-10
    max_refinements: int = 30
    singularity_at_zero: bool = False

    def __post_init__(self) -> None:
        if not (self.tolerance > 0.0 and math.isfinite(self.tolerance)):
            raise InvalidInput(f"tolerance must be positive, got {self.tolerance}")
        if self.max_refinements < 1:
            raise InvalidInput(
                f"max_refinements must be >= 1, got {self.max_refinements}"
            )


def _checked(f: Callable[[float], float]) -> Callable[[float], float]:
    def g(x: float) -> float:
        v = f(x)
        if not math.isfinite(v):
            raise InvalidInput(f"integrand returned non-finite value {v!r} at x={x!r}")
        return v

    return g


def _adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    fa: float,
    fm: float,
    fb: float,
    whole: float,
    tol: float,
    depth: int,
) -> float:
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    correction = (left + right - whole) / 15.0
    # Second disjunct: the correction is pure roundoff for this panel,
    # so further splitting cannot improve it.
    if abs(correction) <= tol or abs(correction) <= 8.0 * math.ulp(abs(left) + abs(right)):
        return left + right + correction
    if depth <= 0:
        raise NonConvergence(
            f"refinement budget exhausted on [{a!r}, {b!r}] "
            f"(residual {abs(correction):.3e} > {tol:.3e})"
        )
    half = 0.5 * tol
    return _adaptive_simpson(
        f, a, m, fa, flm, fm, left, half, depth - 1
    ) + _adaptive_simpson(f, m, b, fm, frm, fb, right, half, depth - 1)


def _simpson_on(f: Callable[[float], float], a: float, b: float, tol: float, depth: int) -> float:
    fa = f(a)
    fm = f(0.5 * (a + b))
    fb = f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth)


def _simpson_panels(
    f: Callable[[float], float], breakpoints: list[float], tol: float, depth: int
) -> float:
    per_panel = tol / (len(breakpoints) - 1)
    return sum(
        _simpson_on(f, a, b, per_panel, depth)
        for a, b in zip(breakpoints, breakpoints[1:])
    )


def integrate_interval(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Integrate a continuous f over [a, b] to the spec's absolute tolerance."""
    spec = spec or QuadratureSpec()
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidInput(f"bounds must be finite, got [{a!r}, {b!r}]")
    if not a < b:
        raise InvalidInput(f"need a < b, got [{a!r}, {b!r}]")
    # A uniform initial split keeps features narrower than (b-a)/2 from
    # hiding between the first refinement's nodes.
    panels = [a + (b - a) * k / 8.0 for k in range(9)]
    return _simpson_panels(_checked(f), panels, spec.tolerance, spec.max_refinements)


def _truncation_point(g: Callable[[float], float], start: float, tol: float) -> float:
    """Smallest power-of-two multiple T of `start` whose sampled tail is negligible.

    The bound max|g| on [T, 2T] times 2T over-counts the true tail for
    any integrand decaying at least exponentially past its final peak,
    which is what the half-line precondition guarantees.
    """
    T = max(start, 1.0)
    while T <= _MAX_TRUNCATION:
        peak = 0.0
        for k in range(9):
            peak = max(peak, abs(g(T * (1.0 + 0.125 * k))))
        if peak * 2.0 * T < 0.1 * tol:
            return 2.0 * T
        T *= 2.0
    raise NonConvergence(
        "no decay detected while searching for a truncation point; "
        "the integrand does not satisfy the half-line preconditions"
    )


def integrate_half_line(
    f: Callable[[float], float],
    spec: QuadratureSpec | None = None,
    peak_hint: float = 0.0,
) -> float:
    """Integrate f over [0, inf).

    With ``singularity_at_zero`` set, f may carry a u**(-1/2) factor;
    the substitution u = t**2 makes the transformed integrand regular
    at 0.  ``peak_hint`` (in the original u coordinate) tells the
    truncation search where the last local maximum sits, so integrands
    that are negligible near 0 but peaked far out are not cut short.
    """
    spec = spec or QuadratureSpec()
    if not (math.isfinite(peak_hint) and peak_hint >= 0.0):
        raise InvalidInput(f"peak_hint must be a nonnegative real, got {peak_hint!r}")
    fc = _checked(f)

    # u = t**2 uniformly: it removes the u**(-1/2) singularity when the
    # flag is set, and turns any half-integer power at 0 (where plain
    # Simpson stalls) into a polynomial factor otherwise.
    def g(t: float) -> float:
        t = max(t, _ZERO_PROXY)
        return 2.0 * t * fc(t * t)

    t_peak = math.sqrt(peak_hint)
    start = 2.0 * t_peak if peak_hint > 1.0 else 1.0
    T = _truncation_point(g, start, spec.tolerance)

    # Initial panels that no relevant feature can slip through: a dyadic
    # ladder toward 0 (integrands concentrated near the origin relative
    # to T) and a cluster of nodes around the transformed peak.
    points = {0.0, T}
    points.update(T / 2.0**k for k in range(1, 9))
    if t_peak > 0.0:
        points.update(
            x * t_peak for x in (0.5, 0.9, 1.0, 1.1, 1.5, 2.0) if x * t_peak < T
        )
    return _simpson_panels(g, sorted(points), spec.tolerance, spec.max_refinements)
