"""Phase-coupling families f_i driving the amplitude noise.

All three families satisfy sum_i f_i'(theta)**2 = 1 for almost every
theta in [0,1), the condition under which the closed-form exponents
hold:

* ``tent``: one driver, continuous piecewise-linear hat with |f'| = 1,
  kinks at 0 and 1/2.  Derivative convention at the kinks is
  sign(1/2 - theta) with sign(0) = +1; trajectories hit the kink set
  with probability zero, so the choice cannot affect the tangent flow.
* ``trig``: two drivers, f1 = cos(2 pi theta)/(2 pi),
  f2 = sin(2 pi theta)/(2 pi).  The 1/(2 pi) scaling makes the
  derivative sum exactly 1 on the unit-period circle.
* ``sine4``: one driver, the four-segment piecewise-linear approximant
  of a sine wave (slopes +1, -1, -1, +1 on successive quarters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidInput

__all__ = ["CouplingKind", "PhaseCoupling", "coupling_eval", "TENT", "TRIG_PAIR", "SINE4"]

TWO_PI = 2.0 * math.pi


class CouplingKind(str, Enum):
    TENT = "tent"
    TRIG_PAIR = "trig"
    SINE4 = "sine4"

    @property
    def code(self) -> int:
        """Stable integer id used by the compiled kernels."""
        return {"tent": 0, "trig": 1, "sine4": 2}[self.value]


def _wrap_unit(theta: float) -> float:
    return theta - math.floor(theta)


@dataclass(frozen=True)
class PhaseCoupling:
    kind: CouplingKind

    @property
    def m(self) -> int:
        """Number of independent Wiener drivers."""
        return 2 if self.kind is CouplingKind.TRIG_PAIR else 1

    def values(self, theta: float) -> tuple[float, ...]:
        theta = _wrap_unit(theta)
        if self.kind is CouplingKind.TENT:
            return (theta if theta <= 0.5 else 1.0 - theta,)
        if self.kind is CouplingKind.TRIG_PAIR:
            return (math.cos(TWO_PI * theta) / TWO_PI, math.sin(TWO_PI * theta) / TWO_PI)
        if theta <= 0.25:
            return (theta,)
        if theta <= 0.75:
            return (0.5 - theta,)
        return (theta - 1.0,)

    def derivatives(self, theta: float) -> tuple[float, ...]:
        theta = _wrap_unit(theta)
        if self.kind is CouplingKind.TENT:
            return (1.0 if theta <= 0.5 else -1.0,)
        if self.kind is CouplingKind.TRIG_PAIR:
            return (-math.sin(TWO_PI * theta), math.cos(TWO_PI * theta))
        return (1.0 if theta <= 0.25 or theta > 0.75 else -1.0,)

    @classmethod
    def from_name(cls, name: str) -> "PhaseCoupling":
        try:
            return cls(CouplingKind(name))
        except ValueError:
            valid = ", ".join(k.value for k in CouplingKind)
            raise InvalidInput(f"unknown coupling {name!r} (valid: {valid})") from None


TENT = PhaseCoupling(CouplingKind.TENT)
TRIG_PAIR = PhaseCoupling(CouplingKind.TRIG_PAIR)
SINE4 = PhaseCoupling(CouplingKind.SINE4)


def coupling_eval(c: PhaseCoupling, theta: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """(f_i(theta), f_i'(theta)) for all drivers of the coupling."""
    return c.values(theta), c.derivatives(theta)
