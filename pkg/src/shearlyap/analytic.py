"""Closed-form Lyapunov exponents of the noisy limit cycle.

The model: amplitude-phase dynamics on the cylinder R x S^1,

    dy     = -alpha * y dt + sigma * sum_i f_i(theta) o dW^i
    dtheta = (1 + b * y) dt

with dissipation alpha > 0, shear b, noise amplitude sigma, and phase
couplings satisfying sum_i f_i'(theta)**2 = 1.  Under that condition
the two Lyapunov exponents have closed forms driven by a stationary
amplitude density on (0, inf):

    lambda_{1,2} = -alpha/2 +- (|b*sigma|/2) * integral v * m(v) dv

where m is proportional to v**(-1/2) * exp(-|b*sigma| v**3 / 6
+ alpha**2 v / (2|b*sigma|)).  The sign of lambda_1 is controlled by a
single combined parameter c = alpha**3 / (sigma*b)**2: it is the sign
of ``sign_function(c)``, positive below the universal root c0 ~ 0.2823
and negative above, which yields the critical noise amplitude

    sigma0(alpha, b) = alpha**(3/2) / (sqrt(c0) * |b|).

Everything here is pure math on top of the in-package quadrature and
root finding; exponents too large for exp() are shifted by the
integrand's peak value before exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import BracketFailure, DegenerateNoise, InvalidInput, NonConvergence
from .quadrature import QuadratureSpec, integrate_half_line
from .rootfind import brent

__all__ = [
    "Parameters",
    "Method",
    "LyapunovPair",
    "RegimeKind",
    "Regime",
    "density_m",
    "lyapunov_pair",
    "sign_function",
    "find_critical_ratio",
    "critical_sigma",
    "classify",
    "q_integrand",
    "CLASSIFY_TOL",
]

# Default absolute tolerance for classifying lambda1 as zero: one order
# above the worst-case propagated quadrature error.
CLASSIFY_TOL = 1e-7

# The two quadrature routes for lambda1 (amplitude density vs rescaled
# density) are algebraically identical; disagreement beyond this bound
# means a quadrature failure.
_CROSS_CHECK_TOL = 1e-9

# Internal quadrature tolerance for exponent integrals.  All integrands
# are peak-normalized to O(1), so 1e-12 absolute keeps the propagated
# error in lambda1 below ~1e-10 even at |b*sigma| ~ 60.
_PAIR_TOL = 1e-12

_C0_BRACKET = (0.05, 1.0)


@dataclass(frozen=True)
class Parameters:
    """Dissipation alpha > 0, shear b, noise amplitude sigma >= 0."""

    alpha: float
    b: float
    sigma: float

    def __post_init__(self) -> None:
        for name in ("alpha", "b", "sigma"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise InvalidInput(f"{name} must be a finite real, got {v!r}")
        if not self.alpha > 0.0:
            raise InvalidInput(f"alpha must be positive, got {self.alpha}")
        if self.sigma < 0.0:
            raise InvalidInput(f"sigma must be nonnegative, got {self.sigma}")

    @property
    def noise_shear(self) -> float:
        """|b * sigma|, the effective noise amplitude after rescaling."""
        return abs(self.b * self.sigma)

    @property
    def combined_ratio(self) -> float:
        """alpha**3 / (sigma*b)**2, the parameter deciding sign(lambda1)."""
        bs = self.noise_shear
        if bs == 0.0:
            raise DegenerateNoise("sigma * b == 0 has no combined ratio")
        return self.alpha**3 / (bs * bs)


class Method(str, Enum):
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"
    FOKKER_PLANCK = "fokker_planck"
    TIME_AVERAGE = "time_average"


@dataclass(frozen=True)
class LyapunovPair:
    lambda1: float
    lambda2: float
    method: Method
    error: float

    def __post_init__(self) -> None:
        if self.lambda1 < self.lambda2:
            raise InvalidInput(
                f"lambda1 ({self.lambda1}) must dominate lambda2 ({self.lambda2})"
            )
        if self.error < 0.0:
            raise InvalidInput(f"error must be nonnegative, got {self.error}")

    @property
    def lambda_sum(self) -> float:
        return self.lambda1 + self.lambda2


class RegimeKind(str, Enum):
    RANDOM_EQUILIBRIUM = "random_equilibrium"
    CRITICAL = "critical"
    RANDOM_STRANGE_ATTRACTOR = "random_strange_attractor"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    lambda1: float
    sigma0: float


def _shifted_exponent(v: float, alpha: float, bs: float) -> float:
    """Exponent of the stationary amplitude weight, peak-shifted to 0.

    -bs*v^3/6 + alpha^2 v/(2 bs) - alpha^3/(3 bs^2) in factored form:
    the raw terms can reach +-10^3 while their sum stays O(1), and that
    cancellation noise would cap the attainable quadrature accuracy.
    """
    vstar = alpha / bs
    d = v - vstar
    return -bs / 6.0 * d * d * (v + 2.0 * vstar)


@lru_cache(maxsize=None)
def _weight_integrals(alpha: float, bs: float, tol: float, max_ref: int) -> tuple[float, float]:
    """(Z, I1): zeroth and first moments of the peak-shifted weight."""
    spec_sing = QuadratureSpec(tolerance=tol, max_refinements=max_ref, singularity_at_zero=True)
    spec_reg = QuadratureSpec(tolerance=tol, max_refinements=max_ref)
    vstar = alpha / bs

    def w(v: float) -> float:
        return math.exp(_shifted_exponent(v, alpha, bs)) / math.sqrt(v)

    def vw(v: float) -> float:
        return math.sqrt(v) * math.exp(_shifted_exponent(v, alpha, bs))

    z = integrate_half_line(w, spec_sing, peak_hint=vstar)
    i1 = integrate_half_line(vw, spec_reg, peak_hint=vstar)
    return z, i1


def density_m(v: float, p: Parameters, spec: QuadratureSpec | None = None) -> float:
    """Normalized stationary amplitude density at v > 0.

    The normalizing integral is computed once per (alpha, |b*sigma|)
    and cached process-wide.
    """
    bs = p.noise_shear
    if bs == 0.0:
        raise DegenerateNoise("density undefined when sigma * b == 0")
    if not v > 0.0:
        raise InvalidInput(f"density argument must be positive, got {v!r}")
    spec = spec or QuadratureSpec(tolerance=_PAIR_TOL)
    z, _ = _weight_integrals(p.alpha, bs, spec.tolerance, spec.max_refinements)
    return math.exp(_shifted_exponent(v, p.alpha, bs)) / math.sqrt(v) / z


@lru_cache(maxsize=None)
def _pair_values(alpha: float, bs: float, tol: float, max_ref: int) -> tuple[float, float, float]:
    """(lambda1, lambda2, error_estimate) for given alpha and |b*sigma|."""
    z, i1 = _weight_integrals(alpha, bs, tol, max_ref)
    m1 = i1 / z
    gap = 0.5 * bs * m1
    lam1 = -0.5 * alpha + gap
    lam2 = -0.5 * alpha - gap

    # Independent route: rescale v = (alpha/bs) u so the weight depends
    # on the combined ratio c alone; lambda1 = (alpha/2) (m1~ - 1).
    c = alpha**3 / (bs * bs)
    zt, it = _ratio_weight_integrals(c, tol, max_ref)
    lam1_alt = 0.5 * alpha * (it / zt - 1.0)
    if abs(lam1 - lam1_alt) > _CROSS_CHECK_TOL * max(1.0, alpha):
        raise NonConvergence(
            f"lambda1 cross-check failed: {lam1!r} (amplitude density) vs "
            f"{lam1_alt!r} (rescaled density)"
        )
    err = 0.5 * bs * tol * (1.0 + m1) / z
    return lam1, lam2, err


def _ratio_exponent(u: float, c: float) -> float:
    """-c*(u^3/6 - u/2) - c/3 in cancellation-free factored form."""
    d = u - 1.0
    return -c / 6.0 * d * d * (u + 2.0)


@lru_cache(maxsize=None)
def _ratio_weight_integrals(c: float, tol: float, max_ref: int) -> tuple[float, float]:
    """Moments of the rescaled weight u**(-1/2) exp(-c(u^3/6 - u/2) - c/3)."""
    spec_sing = QuadratureSpec(tolerance=tol, max_refinements=max_ref, singularity_at_zero=True)
    spec_reg = QuadratureSpec(tolerance=tol, max_refinements=max_ref)

    def w(u: float) -> float:
        return math.exp(_ratio_exponent(u, c)) / math.sqrt(u)

    def uw(u: float) -> float:
        return math.sqrt(u) * math.exp(_ratio_exponent(u, c))

    z = integrate_half_line(w, spec_sing, peak_hint=1.0)
    i1 = integrate_half_line(uw, spec_reg, peak_hint=1.0)
    return z, i1


def lyapunov_pair(p: Parameters, spec: QuadratureSpec | None = None) -> LyapunovPair:
    """Both Lyapunov exponents by quadrature of the amplitude density.

    lambda1 + lambda2 = -alpha holds by construction; the value of
    lambda1 is cross-checked internally against the rescaled-density
    route to 1e-9.
    """
    bs = p.noise_shear
    if bs == 0.0:
        raise DegenerateNoise(
            "closed form requires sigma * b != 0; use the Monte Carlo route "
            "(lambda1 = 0, lambda2 = -alpha) for the degenerate case"
        )
    tol = spec.tolerance if spec else _PAIR_TOL
    max_ref = spec.max_refinements if spec else 30
    lam1, lam2, err = _pair_values(p.alpha, bs, tol, max_ref)
    return LyapunovPair(lambda1=lam1, lambda2=lam2, method=Method.QUADRATURE, error=err)


def sign_function(ratio: float, spec: QuadratureSpec | None = None) -> float:
    """Integral sharing the sign of lambda1, as a function of the combined ratio.

    Strictly decreasing in the ratio, positive below the universal root
    and negative above it.  Any (alpha, b, sigma) with
    alpha**3/(sigma*b)**2 == ratio has sign(lambda1) == sign of this.
    """
    if not (ratio > 0.0 and math.isfinite(ratio)):
        raise InvalidInput(f"ratio must be a positive real, got {ratio!r}")
    spec = spec or QuadratureSpec(
        tolerance=1e-12, max_refinements=30, singularity_at_zero=True
    )
    if not spec.singularity_at_zero:
        spec = QuadratureSpec(spec.tolerance, spec.max_refinements, True)

    def integrand(u: float) -> float:
        # (sqrt(u) - 1/sqrt(u)) * exp(-ratio*(u^3/6 - u/2)), computed
        # peak-shifted and rescaled afterwards to dodge overflow.
        return (u - 1.0) / math.sqrt(u) * math.exp(_ratio_exponent(u, ratio))

    shifted = integrate_half_line(integrand, spec, peak_hint=1.0)
    return shifted * math.exp(ratio / 3.0)


def find_critical_ratio(tol: float = 1e-10) -> float:
    """Root of ``sign_function`` on the standard bracket, to width tol.

    Deterministic; this is the universal constant (~0.2823) entering
    the bifurcation curve.
    """
    if not (tol > 0.0 and math.isfinite(tol)):
        raise InvalidInput(f"tol must be positive, got {tol!r}")
    lo, hi = _C0_BRACKET
    g_lo = sign_function(lo)
    g_hi = sign_function(hi)
    if not (g_lo > 0.0 > g_hi):
        raise BracketFailure(
            f"bracket [{lo}, {hi}] does not straddle the root: "
            f"f(lo)={g_lo!r}, f(hi)={g_hi!r}"
        )
    return brent(sign_function, lo, hi, xtol=tol)


@lru_cache(maxsize=1)
def _critical_ratio_cached() -> float:
    return find_critical_ratio(1e-10)


def critical_sigma(alpha: float, b: float) -> float:
    """The noise amplitude where lambda1 changes sign: alpha^{3/2}/(sqrt(c0)|b|)."""
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0.0):
        raise InvalidInput(f"alpha must be a positive real, got {alpha!r}")
    if not (isinstance(b, (int, float)) and math.isfinite(b)) or b == 0.0:
        raise InvalidInput(f"b must be a nonzero real, got {b!r}")
    return alpha**1.5 / (math.sqrt(_critical_ratio_cached()) * abs(b))


def classify(p: Parameters, tol: float = CLASSIFY_TOL) -> Regime:
    """Regime by the sign of lambda1 within an absolute tolerance band."""
    if not (tol > 0.0 and math.isfinite(tol)):
        raise InvalidInput(f"tol must be positive, got {tol!r}")
    pair = lyapunov_pair(p)
    if pair.lambda1 > tol:
        kind = RegimeKind.RANDOM_STRANGE_ATTRACTOR
    elif pair.lambda1 < -tol:
        kind = RegimeKind.RANDOM_EQUILIBRIUM
    else:
        kind = RegimeKind.CRITICAL
    return Regime(kind=kind, lambda1=pair.lambda1, sigma0=critical_sigma(p.alpha, p.b))


def q_integrand(phi: float, p: Parameters) -> float:
    """Projective-angle integrand whose stationary average is lambda1."""
    cos = math.cos(phi)
    sin = math.sin(phi)
    return (
        -p.alpha * cos * cos
        + p.b * cos * sin
        + 0.5 * p.sigma * p.sigma * (1.0 - 2.0 * cos * cos) * sin * sin
    )
