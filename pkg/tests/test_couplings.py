import math

import numpy as np
import pytest

from shearlyap.couplings import SINE4, TENT, TRIG_PAIR, CouplingKind, PhaseCoupling, coupling_eval
from shearlyap.errors import InvalidInput

ALL = [TENT, TRIG_PAIR, SINE4]

# Dense grid avoiding the piecewise-linear kink angles.
THETA_GRID = np.linspace(0.0013, 0.9987, 1201)


class TestTent:
    def test_rising_branch(self):
        vals, ders = coupling_eval(TENT, 0.25)
        assert vals == (0.25,) and ders == (1.0,)

    def test_falling_branch(self):
        vals, ders = coupling_eval(TENT, 0.75)
        assert vals == (0.25,) and ders == (-1.0,)

    def test_kink_convention(self):
        # sign(1/2 - theta) with sign(0) = +1
        assert TENT.derivatives(0.5) == (1.0,)
        assert TENT.derivatives(np.nextafter(0.5, 1.0))[0] == -1.0

    def test_m(self):
        assert TENT.m == 1


class TestTrigPair:
    def test_derivative_sum_exact(self):
        for th in THETA_GRID:
            d = TRIG_PAIR.derivatives(float(th))
            assert abs(d[0] ** 2 + d[1] ** 2 - 1.0) < 1e-14

    def test_values_scaled_to_unit_period(self):
        v = TRIG_PAIR.values(0.0)
        assert v[0] == pytest.approx(1.0 / (2.0 * math.pi)) and v[1] == 0.0

    def test_m(self):
        assert TRIG_PAIR.m == 2


class TestSine4:
    def test_quarter_points(self):
        assert SINE4.values(0.25) == (0.25,)
        assert SINE4.values(0.5) == (0.0,)
        assert SINE4.values(0.75) == (-0.25,)

    def test_slopes(self):
        assert SINE4.derivatives(0.1) == (1.0,)
        assert SINE4.derivatives(0.5) == (-1.0,)
        assert SINE4.derivatives(0.9) == (1.0,)

    def test_tracks_sine_shape(self):
        # piecewise-linear approximant of sin(2 pi theta)/4-with-slope-1:
        # same signs and extrema locations
        for th in (0.125, 0.375, 0.625, 0.875):
            f = SINE4.values(th)[0]
            assert math.copysign(1.0, f) == math.copysign(1.0, math.sin(2.0 * math.pi * th))


class TestShared:
    @pytest.mark.parametrize("c", ALL, ids=lambda c: c.kind.value)
    def test_unit_derivative_sum(self, c):
        for th in THETA_GRID:
            d = c.derivatives(float(th))
            assert sum(x * x for x in d) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("c", ALL, ids=lambda c: c.kind.value)
    def test_continuity_on_circle(self, c):
        left = c.values(np.nextafter(1.0, 0.0))
        right = c.values(0.0)
        for a, b in zip(left, right):
            assert a == pytest.approx(b, abs=1e-12)

    @pytest.mark.parametrize("c", ALL, ids=lambda c: c.kind.value)
    def test_wraps_theta(self, c):
        assert c.values(1.25) == c.values(0.25)

    def test_from_name(self):
        assert PhaseCoupling.from_name("tent") is not None
        assert PhaseCoupling.from_name("trig").kind is CouplingKind.TRIG_PAIR
        with pytest.raises(InvalidInput):
            PhaseCoupling.from_name("fourier")

    def test_kernel_codes_are_stable(self):
        assert [k.code for k in CouplingKind] == [0, 1, 2]
