"""Bracketed scalar root finding (Brent's method).

Bisection safeguarded by inverse-quadratic / secant steps, after Brent
(1973).  Kept dependency-free so the fast CLI paths never pay the
scipy import cost; cross-checked against scipy.optimize.brentq in the
test suite.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import BracketFailure, InvalidInput, NonConvergence

__all__ = ["brent"]


def brent(
    f: Callable[[float], float],
    a: float,
    b: float,
    xtol: float = 1e-12,
    max_iter: int = 100,
) -> float:
    """Root of f in [a, b]; f(a) and f(b) must have opposite signs.

    Returns x with bracket width below ``xtol`` (plus a relative term
    at machine precision).  Deterministic: same inputs, same bits.
    """
    if not (xtol > 0.0 and math.isfinite(xtol)):
        raise InvalidInput(f"xtol must be positive, got {xtol}")
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise BracketFailure(
            f"no sign change on [{a!r}, {b!r}]: f(a)={fa!r}, f(b)={fb!r}"
        )
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if math.copysign(1.0, fb) == math.copysign(1.0, fc):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * math.ulp(abs(b)) + 0.5 * xtol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                # secant
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                # inverse quadratic
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += math.copysign(tol1, xm)
        fb = f(b)
    raise NonConvergence(f"root not bracketed to {xtol} within {max_iter} iterations")
