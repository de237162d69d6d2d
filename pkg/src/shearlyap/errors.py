"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: invalid input -> 1,
numerical non-convergence -> 2, I/O failure -> 3.
"""


class ShearLyapError(Exception):
    """Base class for all package errors."""


class InvalidInput(ShearLyapError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateNoise(InvalidInput):
    """sigma * b == 0: the closed-form exponent formulas are undefined.

    The noise-free / shear-free cases must go through the Monte Carlo
    route instead, where lambda1 = 0 and lambda2 = -alpha.
    """


class NonConvergence(ShearLyapError, RuntimeError):
    """A numerical routine exhausted its budget before reaching tolerance."""


class BracketFailure(NonConvergence):
    """A root-finding bracket does not straddle a sign change."""


class SingularDiscretization(NonConvergence):
    """The discretized stationary operator has no clean 1-d null space."""


class NonFiniteState(NonConvergence):
    """An SDE trajectory left the representable range (dt too large?)."""


class IoFailure(ShearLyapError, OSError):
    """Reading or writing a result file failed."""


class InsufficientHorizonWarning(UserWarning):
    """A Monte Carlo estimate's standard error exceeds its magnitude."""
