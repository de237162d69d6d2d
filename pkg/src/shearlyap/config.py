"""Shared runtime defaults and environment knobs."""

from __future__ import annotations

import os

# Environment variable overriding the worker-pool size used for sweep
# points and trajectory ensembles.
WORKERS_ENV = "SHEARLYAP_WORKERS"

# Estimation defaults, shared by the CLI flags and service models.
DEFAULT_DT = 1e-3
DEFAULT_HORIZON = 2000.0
DEFAULT_N_TRAJ = 64
DEFAULT_SEED = 1
DEFAULT_FP_GRID = 2000
DEFAULT_N_POINTS = 100
DEFAULT_PULLBACK_HORIZON = 200.0


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            n = int(raw)
        except ValueError:
            n = 0
        if n >= 1:
            return n
    return os.cpu_count() or 1
