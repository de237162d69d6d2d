import math

import numpy as np
import pytest

from shearlyap.analytic import Parameters, lyapunov_pair
from shearlyap.couplings import TENT, TRIG_PAIR
from shearlyap.errors import InsufficientHorizonWarning, InvalidInput
from shearlyap.estimators import (
    Estimate,
    cylinder_distance,
    fk_time_average,
    mc_lyapunov,
    pullback_sample,
    reduced_linear_growth,
)

# Combined-error comparison threshold: 3 sigma plus a small absolute
# floor for the zero-variance deterministic corners (identical
# trajectories at sigma = 0).
FLOOR = 1e-6


def within(dev: float, *stderrs: float) -> bool:
    return abs(dev) <= 3.0 * math.fsum(stderrs) + FLOOR


def trace_tolerance(p: Parameters, dt: float, stderr: float) -> float:
    """Tolerance for the exponent-sum identity.

    The log-determinant of the tangent flow is pathwise deterministic
    (-alpha t exactly), so its ensemble stderr reflects only roundoff
    and cannot absorb the Heun scheme's weak O(dt^2) bias.  Measured
    bias is ~(0.15 alpha^3 + 0.26 (b sigma)^2) dt^2; allow 4x that.
    """
    return 3.0 * stderr + (p.alpha**3 + (p.b * p.sigma) ** 2) * dt * dt


class TestMcLyapunov:
    def test_agrees_with_quadrature(self):
        p = Parameters(1.0, 2.0, 2.0)
        ref = lyapunov_pair(p).lambda1
        lam, s12 = mc_lyapunov(p, TENT, T=300.0, dt=1e-3, n_traj=16, seed=101)
        assert within(lam.value - ref, lam.stderr)
        assert abs(s12.value + p.alpha) <= trace_tolerance(p, 1e-3, s12.stderr)

    def test_noise_free_limit(self):
        # sigma = 0: Jacobian eigen-rates are {0, -alpha} exactly
        p = Parameters(1.0, 2.0, 0.0)
        lam, s12 = mc_lyapunov(p, TENT, T=150.0, dt=1e-3, n_traj=4, seed=5)
        assert within(lam.value, lam.stderr)
        assert abs(s12.value + p.alpha) <= trace_tolerance(p, 1e-3, s12.stderr)

    def test_shear_free_limit(self):
        # b = 0: the phase tangent component is conserved, no growth
        p = Parameters(1.0, 0.0, 1.0)
        lam, _ = mc_lyapunov(p, TENT, T=200.0, dt=1e-3, n_traj=8, seed=6)
        assert within(lam.value, lam.stderr)

    def test_bit_reproducible(self):
        p = Parameters(1.0, 2.0, 1.0)
        kw = dict(T=120.0, dt=1e-3, n_traj=4, seed=9)
        a = mc_lyapunov(p, TENT, **kw)
        b = mc_lyapunov(p, TENT, **kw)
        assert a == b

    def test_dt_refinement(self):
        p = Parameters(1.0, 2.0, 2.0)
        coarse, _ = mc_lyapunov(p, TENT, T=200.0, dt=2e-3, n_traj=16, seed=33)
        fine, _ = mc_lyapunov(p, TENT, T=200.0, dt=1e-3, n_traj=16, seed=33)
        tol = max(2.0 * (coarse.stderr + fine.stderr), 1e-3 * abs(fine.value))
        assert abs(coarse.value - fine.value) <= tol

    def test_horizon_precondition(self):
        with pytest.raises(InvalidInput):
            mc_lyapunov(Parameters(1.0, 2.0, 1.0), TENT, T=50.0, dt=1e-3, n_traj=4, seed=1)

    def test_needs_two_trajectories(self):
        with pytest.raises(InvalidInput):
            mc_lyapunov(Parameters(1.0, 2.0, 1.0), TENT, T=200.0, dt=1e-3, n_traj=1, seed=1)

    def test_estimate_invariants(self):
        with pytest.raises(InvalidInput):
            Estimate(value=0.1, stderr=0.01, n_samples=1, horizon=10.0, dt=1e-3)
        with pytest.raises(InvalidInput):
            Estimate(value=0.1, stderr=-1.0, n_samples=4, horizon=10.0, dt=1e-3)


class TestFkTimeAverage:
    def test_subcritical_sign_and_value(self):
        p = Parameters(1.0, 2.0, 0.5)
        ref = lyapunov_pair(p).lambda1
        est = fk_time_average(p, TENT, T=300.0, dt=1e-3, n_traj=16, seed=77)
        assert est.value < 0.0
        assert within(est.value - ref, est.stderr)

    def test_agrees_with_tangent_route(self):
        p = Parameters(1.0, 2.0, 2.0)
        lam, _ = mc_lyapunov(p, TENT, T=200.0, dt=1e-3, n_traj=12, seed=55)
        fk = fk_time_average(p, TENT, T=200.0, dt=1e-3, n_traj=12, seed=56)
        assert within(lam.value - fk.value, lam.stderr, fk.stderr)

    def test_trig_coupling(self):
        p = Parameters(1.0, 2.0, 2.0)
        ref = lyapunov_pair(p).lambda1
        est = fk_time_average(p, TRIG_PAIR, T=200.0, dt=1e-3, n_traj=12, seed=58)
        assert within(est.value - ref, est.stderr)

    def test_warns_when_noise_dominates(self):
        # At the critical point the estimate is statistically zero.
        p = Parameters(1.0, 2.0, 0.9410263993844464)
        with pytest.warns(InsufficientHorizonWarning):
            fk_time_average(p, TENT, T=110.0, dt=1e-3, n_traj=4, seed=2)


class TestReducedLinear:
    def test_matches_full_system_exponent(self):
        p = Parameters(1.0, 2.0, 2.0)
        ref = lyapunov_pair(p).lambda1
        est = reduced_linear_growth(p, T=300.0, dt=1e-3, n_traj=16, seed=21)
        assert within(est.value - ref, est.stderr)

    def test_transformed_coordinates_equivalent(self):
        p = Parameters(1.0, 2.0, 1.5)
        direct = reduced_linear_growth(p, T=200.0, dt=1e-3, n_traj=12, seed=31)
        swapped = reduced_linear_growth(p, T=200.0, dt=1e-3, n_traj=12, seed=32, transformed=True)
        assert within(direct.value - swapped.value, direct.stderr, swapped.stderr)


class TestOrnsteinUhlenbeckAmplitude:
    def test_stationary_variance_trig(self):
        # With the trig pair, sum f_i(theta)^2 = 1/(2 pi)^2 identically,
        # so y is an exact OU process with effective amplitude
        # sigma/(2 pi) and stationary variance sigma^2 / (8 pi^2 alpha).
        from shearlyap import _kernels
        from shearlyap.sde import NoiseStream

        p = Parameters(1.0, 2.0, 2.0)
        n_steps = 60_000
        finals = []
        for i in range(220):
            dW = NoiseStream(404, i, 1e-3).increments(n_steps, 2)
            out = _kernels.run_tangent(
                0.0, 0.0, 1.0, 0.0, 0.0, 1.0,
                p.alpha, p.b, p.sigma, 1, dW, 1e-3, 10, 0,
            )
            finals.append(out[0])
        finals = np.array(finals)
        expected = p.sigma**2 / (8.0 * math.pi**2 * p.alpha)
        var = float(np.var(finals, ddof=1))
        se = expected * math.sqrt(2.0 / (len(finals) - 1))
        assert abs(var - expected) < 3.0 * se


class TestPullback:
    def test_synchronization_below_threshold(self):
        p = Parameters(1.0, 2.0, 0.5)
        s = pullback_sample(p, TENT, n_points=30, T=200.0, dt=1e-3, seed=13)
        assert s.final_diameter < 1e-4

    def test_spread_above_threshold(self):
        p = Parameters(1.0, 2.0, 2.0)
        s = pullback_sample(p, TENT, n_points=30, T=200.0, dt=1e-3, seed=13)
        assert s.final_diameter > 0.1

    def test_single_point_has_zero_diameter(self):
        p = Parameters(1.0, 2.0, 2.0)
        s = pullback_sample(p, TENT, n_points=1, T=1.0, dt=1e-3, seed=13)
        assert np.all(s.diameters == 0.0)

    def test_series_shape_and_determinism(self):
        p = Parameters(1.0, 2.0, 1.0)
        a = pullback_sample(p, TENT, n_points=12, T=5.0, dt=1e-3, seed=99)
        b = pullback_sample(p, TENT, n_points=12, T=5.0, dt=1e-3, seed=99)
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.diameters, b.diameters)
        assert len(a.times) == len(a.diameters)
        assert a.times[0] == 0.0

    def test_initial_spread_band(self):
        p = Parameters(1.0, 2.0, 1.0)
        s = pullback_sample(p, TENT, n_points=200, T=1.0, dt=1e-2, seed=1)
        # all initial amplitudes inside +-2 stationary standard deviations
        # is not directly observable from the final cloud; check the
        # diameter never exceeds the initial bound plus dynamics slack
        assert s.diameters[0] <= 2.0 * (2.0 * p.sigma / math.sqrt(2.0 * p.alpha)) + 1.0


class TestCylinderDistance:
    def test_wraparound(self):
        assert cylinder_distance((0.0, 0.05), (0.0, 0.95)) == pytest.approx(0.1)

    def test_plain(self):
        assert cylinder_distance((1.0, 0.2), (0.0, 0.2)) == pytest.approx(1.0)
