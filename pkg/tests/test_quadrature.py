import math

import numpy as np
import pytest
from scipy.integrate import quad

from shearlyap.errors import InvalidInput, NonConvergence
from shearlyap.quadrature import QuadratureSpec, integrate_half_line, integrate_interval

TIGHT = QuadratureSpec(tolerance=1e-12)
SINGULAR = QuadratureSpec(tolerance=1e-10, singularity_at_zero=True)


class TestSpecValidation:
    def test_defaults(self):
        s = QuadratureSpec()
        assert s.tolerance == 1e-10 and s.max_refinements == 30
        assert not s.singularity_at_zero

    @pytest.mark.parametrize("tol", [0.0, -1e-3, math.nan])
    def test_bad_tolerance(self, tol):
        with pytest.raises(InvalidInput):
            QuadratureSpec(tolerance=tol)

    def test_bad_refinements(self):
        with pytest.raises(InvalidInput):
            QuadratureSpec(max_refinements=0)


class TestHalfLine:
    def test_gamma_one(self):
        assert integrate_half_line(lambda u: math.exp(-u), TIGHT) == pytest.approx(1.0, abs=1e-12)

    def test_gamma_half_singular(self):
        f = lambda u: math.exp(-u) / math.sqrt(u)
        assert integrate_half_line(f, SINGULAR) == pytest.approx(math.sqrt(math.pi), abs=1e-10)

    def test_gamma_three_halves(self):
        f = lambda u: math.sqrt(u) * math.exp(-u)
        spec = QuadratureSpec(tolerance=1e-10)
        assert integrate_half_line(f, spec) == pytest.approx(0.5 * math.sqrt(math.pi), abs=1e-10)

    def test_peaked_far_from_origin(self):
        # A narrow bump at u = 40 is invisible to samples near u ~ 1;
        # the peak hint keeps the truncation search from stopping early.
        f = lambda u: math.exp(-2.0 * (u - 40.0) ** 2)
        got = integrate_half_line(f, TIGHT, peak_hint=40.0)
        assert got == pytest.approx(math.sqrt(math.pi / 2.0), abs=1e-11)

    def test_non_finite_integrand_rejected(self):
        f = lambda u: math.inf if 0.9 < u < 1.1 else math.exp(-u)
        with pytest.raises(InvalidInput):
            integrate_half_line(f, TIGHT)

    def test_no_decay_raises(self):
        with pytest.raises(NonConvergence):
            integrate_half_line(lambda u: 1.0 / (1.0 + u), TIGHT)

    def test_bad_peak_hint(self):
        with pytest.raises(InvalidInput):
            integrate_half_line(lambda u: math.exp(-u), TIGHT, peak_hint=-1.0)


class TestInterval:
    def test_sine(self):
        assert integrate_interval(math.sin, 0.0, math.pi, TIGHT) == pytest.approx(2.0, abs=1e-12)

    def test_constant(self):
        assert integrate_interval(lambda x: 1.0, 0.0, math.pi, TIGHT) == pytest.approx(math.pi, abs=1e-12)

    def test_sin_fourth(self):
        f = lambda x: math.sin(x) ** 4
        assert integrate_interval(f, 0.0, math.pi, TIGHT) == pytest.approx(3.0 * math.pi / 8.0, abs=1e-12)

    def test_bounds_must_be_ordered(self):
        with pytest.raises(InvalidInput):
            integrate_interval(math.sin, 1.0, 1.0)

    def test_budget_exhaustion(self):
        spec = QuadratureSpec(tolerance=1e-14, max_refinements=1)
        with pytest.raises(NonConvergence):
            integrate_interval(lambda x: math.sin(40.0 * x) ** 2, 0.0, 10.0, spec)


class TestProperties:
    def test_linearity_on_random_integrands(self):
        # Random polynomial-times-Gaussian integrands on the half line.
        rng = np.random.default_rng(20240817)
        for _ in range(5):
            ca = rng.normal(size=3)
            cb = rng.normal(size=3)
            x, y = rng.normal(size=2)
            fa = lambda u: (ca[0] + ca[1] * u + ca[2] * u * u) * math.exp(-u * u)
            fb = lambda u: (cb[0] + cb[1] * u + cb[2] * u * u) * math.exp(-0.5 * u * u)
            combo = lambda u: x * fa(u) + y * fb(u)
            lhs = integrate_half_line(combo, TIGHT)
            rhs = x * integrate_half_line(fa, TIGHT) + y * integrate_half_line(fb, TIGHT)
            assert abs(lhs - rhs) <= 2.0 * TIGHT.tolerance * (1.0 + abs(x) + abs(y))

    @pytest.mark.parametrize("k", [0.5, 2.0, 8.0])
    def test_truncation_soundness_cubic_decay(self, k):
        f = lambda u: 3.0 * math.exp(-k * u**3 / 6.0)
        half = integrate_half_line(f, TIGHT)
        # Doubling a generous truncation point moves the integral value
        # by less than the tolerance.
        T = (6.0 / k * 50.0) ** (1.0 / 3.0)
        at_T = integrate_interval(f, 0.0, T, TIGHT)
        at_2T = integrate_interval(f, 0.0, 2.0 * T, TIGHT)
        assert abs(at_2T - at_T) < TIGHT.tolerance
        assert half == pytest.approx(at_2T, abs=2.0 * TIGHT.tolerance)

    def test_singular_flag_matches_manual_substitution(self):
        # f(u) = u^{-1/2} g(u) with smooth g: flag path vs 2 g(t^2) dt.
        g = lambda u: math.exp(-u) * (1.0 + 0.5 * u)
        f = lambda u: g(u) / math.sqrt(u)
        flagged = integrate_half_line(f, QuadratureSpec(1e-11, singularity_at_zero=True))
        direct = integrate_interval(lambda t: 2.0 * g(t * t), 0.0, 12.0, QuadratureSpec(1e-11))
        assert flagged == pytest.approx(direct, abs=1e-11)

    def test_against_scipy_oracle(self):
        f = lambda u: math.cos(u) * math.exp(-u)
        expected, _ = quad(f, 0, np.inf)
        assert integrate_half_line(f, TIGHT) == pytest.approx(expected, abs=1e-10)
