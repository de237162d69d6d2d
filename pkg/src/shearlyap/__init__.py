"""Lyapunov exponents of a stochastically driven limit cycle on a cylinder.

Computes, cross-validates, and sweeps the exponents of the amplitude-phase
SDE dy = -alpha*y dt + sigma*sum f_i(theta) o dW^i, dtheta = (1+b*y) dt,
and locates the shear-induced chaos bifurcation where the top exponent
changes sign.

Submodules are imported lazily on attribute access so that light paths
(closed forms, CLI startup) never pay for numba/scipy/fastapi.
"""

from importlib import import_module

__version__ = "0.1.0"

_SUBMODULES = (
    "analytic",
    "cli",
    "client",
    "couplings",
    "emit",
    "errors",
    "estimators",
    "fokker_planck",
    "quadrature",
    "rootfind",
    "sde",
    "sweep",
)


def __getattr__(name: str):
    if name in _SUBMODULES:
        module = import_module(f".{name}", __name__)
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(_SUBMODULES))
