"""Compiled inner loops for trajectory ensembles.

All kernels advance Stratonovich dynamics with the Heun
predictor-corrector scheme and accumulate the logarithmic growth
bookkeeping needed by the exponent estimators.  Coupling families are
selected by the integer codes of ``couplings.CouplingKind``; Wiener
increments always arrive as an (n_steps, 2) array, with the unused
second column zeroed for single-driver couplings.

numba is optional: without it the same functions run as plain Python
(correct, far slower).
"""

from __future__ import annotations

import math

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco

TWO_PI = 2.0 * math.pi

# Renormalization band for tangent norms; outside it the frame is
# re-orthonormalized regardless of cadence.
_NORM_LO = 1e-12  # squared-norm bounds, i.e. |v| in [1e-6, 1e6]
_NORM_HI = 1e12


@njit(cache=True, nogil=True)
def _coupling_f(kind: int, theta: float) -> tuple[float, float]:
    if kind == 0:  # tent
        if theta <= 0.5:
            return theta, 0.0
        return 1.0 - theta, 0.0
    elif kind == 1:  # trig pair
        a = TWO_PI * theta
        return math.cos(a) / TWO_PI, math.sin(a) / TWO_PI
    else:  # 4-segment sine approximant
        if theta <= 0.25:
            return theta, 0.0
        elif theta <= 0.75:
            return 0.5 - theta, 0.0
        return theta - 1.0, 0.0


@njit(cache=True, nogil=True)
def _coupling_df(kind: int, theta: float) -> tuple[float, float]:
    if kind == 0:
        return (1.0 if theta <= 0.5 else -1.0), 0.0
    elif kind == 1:
        a = TWO_PI * theta
        return -math.sin(a), math.cos(a)
    else:
        if theta <= 0.25 or theta > 0.75:
            return 1.0, 0.0
        return -1.0, 0.0


@njit(cache=True, nogil=True)
def _q_angle(phi: float, alpha: float, b: float, sigma: float) -> float:
    c = math.cos(phi)
    s = math.sin(phi)
    return -alpha * c * c + b * c * s + 0.5 * sigma * sigma * (1.0 - 2.0 * c * c) * s * s


@njit(cache=True, nogil=True)
def run_tangent(
    y: float,
    th: float,
    v1: float,
    v2: float,
    w1: float,
    w2: float,
    alpha: float,
    b: float,
    sigma: float,
    kind: int,
    dW,
    dt: float,
    renorm_every: int,
    measure_from: int,
):
    """Advance state plus a two-vector tangent frame; return growth sums.

    Gram-Schmidt renormalization flushes log|v| into ``log1`` and
    log|det| into ``area``; both are reset when the measuring window
    opens at step ``measure_from``.
    """
    n = dW.shape[0]
    log1 = 0.0
    area = 0.0
    for step in range(n):
        if step == measure_from and step > 0:
            # flush burn-in growth, then restart the accumulators
            r1 = math.sqrt(v1 * v1 + v2 * v2)
            v1 /= r1
            v2 /= r1
            dot = v1 * w1 + v2 * w2
            w1 -= dot * v1
            w2 -= dot * v2
            r2 = math.sqrt(w1 * w1 + w2 * w2)
            w1 /= r2
            w2 /= r2
            log1 = 0.0
            area = 0.0
        g0 = dW[step, 0]
        g1 = dW[step, 1]
        f1, f2 = _coupling_f(kind, th)
        d1, d2 = _coupling_df(kind, th)

        ay = -alpha * y
        ath = 1.0 + b * y
        noise_y = sigma * (f1 * g0 + f2 * g1)
        yp = y + ay * dt + noise_y
        thp = th + ath * dt
        tv1 = v1 + (-alpha * v1) * dt + sigma * (d1 * g0 + d2 * g1) * v2
        tv2 = v2 + b * v1 * dt
        tw1 = w1 + (-alpha * w1) * dt + sigma * (d1 * g0 + d2 * g1) * w2
        tw2 = w2 + b * w1 * dt

        thp_w = thp - math.floor(thp)
        f1p, f2p = _coupling_f(kind, thp_w)
        d1p, d2p = _coupling_df(kind, thp_w)

        y_new = y + 0.5 * (ay - alpha * yp) * dt + 0.5 * sigma * (
            (f1 + f1p) * g0 + (f2 + f2p) * g1
        )
        th_new = th + 0.5 * (ath + 1.0 + b * yp) * dt
        v1_new = v1 + 0.5 * (-alpha * v1 - alpha * tv1) * dt + 0.5 * sigma * (
            (d1 * v2 + d1p * tv2) * g0 + (d2 * v2 + d2p * tv2) * g1
        )
        v2_new = v2 + 0.5 * b * (v1 + tv1) * dt
        w1_new = w1 + 0.5 * (-alpha * w1 - alpha * tw1) * dt + 0.5 * sigma * (
            (d1 * w2 + d1p * tw2) * g0 + (d2 * w2 + d2p * tw2) * g1
        )
        w2_new = w2 + 0.5 * b * (w1 + tw1) * dt

        y = y_new
        th = th_new - math.floor(th_new)
        v1 = v1_new
        v2 = v2_new
        w1 = w1_new
        w2 = w2_new

        nv = v1 * v1 + v2 * v2
        if (
            (step + 1) % renorm_every == 0
            or nv < _NORM_LO
            or nv > _NORM_HI
            or step == n - 1
        ):
            if not (math.isfinite(nv) and nv > 0.0):
                return y, th, v1, v2, w1, w2, math.nan, math.nan
            r1 = math.sqrt(nv)
            v1 /= r1
            v2 /= r1
            dot = v1 * w1 + v2 * w2
            w1 -= dot * v1
            w2 -= dot * v2
            r2 = math.sqrt(w1 * w1 + w2 * w2)
            if not (math.isfinite(r2) and r2 > 0.0):
                return y, th, v1, v2, w1, w2, math.nan, math.nan
            w1 /= r2
            w2 /= r2
            if step >= measure_from:
                log1 += math.log(r1)
                area += math.log(r1) + math.log(r2)
    if not (math.isfinite(y) and math.isfinite(th)):
        return y, th, v1, v2, w1, w2, math.nan, math.nan
    return y, th, v1, v2, w1, w2, log1, area


@njit(cache=True, nogil=True)
def run_angle_average(
    y: float,
    th: float,
    phi: float,
    alpha: float,
    b: float,
    sigma: float,
    kind: int,
    dW,
    dt: float,
    measure_from: int,
):
    """Joint (y, theta, phi) trajectory; returns the time average of the
    angle integrand q(phi) over the measuring window."""
    n = dW.shape[0]
    qsum = 0.0
    for step in range(n):
        g0 = dW[step, 0]
        g1 = dW[step, 1]
        f1, f2 = _coupling_f(kind, th)
        d1, d2 = _coupling_df(kind, th)
        cphi = math.cos(phi)
        sphi = math.sin(phi)
        s2 = sphi * sphi

        ay = -alpha * y
        ath = 1.0 + b * y
        aphi = alpha * cphi * sphi + b * cphi * cphi
        noise_y = sigma * (f1 * g0 + f2 * g1)
        noise_phi = -sigma * s2 * (d1 * g0 + d2 * g1)

        yp = y + ay * dt + noise_y
        thp = th + ath * dt
        php = phi + aphi * dt + noise_phi

        thp_w = thp - math.floor(thp)
        f1p, f2p = _coupling_f(kind, thp_w)
        d1p, d2p = _coupling_df(kind, thp_w)
        cp = math.cos(php)
        sp = math.sin(php)
        s2p = sp * sp
        aphip = alpha * cp * sp + b * cp * cp

        y_new = y + 0.5 * (ay - alpha * yp) * dt + 0.5 * sigma * (
            (f1 + f1p) * g0 + (f2 + f2p) * g1
        )
        th_new = th + 0.5 * (ath + 1.0 + b * yp) * dt
        phi_new = phi + 0.5 * (aphi + aphip) * dt - 0.5 * sigma * (
            (d1 * s2 + d1p * s2p) * g0 + (d2 * s2 + d2p * s2p) * g1
        )

        q_old = _q_angle(phi, alpha, b, sigma)
        y = y_new
        th = th_new - math.floor(th_new)
        phi = phi_new - math.pi * math.floor(phi_new / math.pi)
        if step >= measure_from:
            qsum += 0.5 * (q_old + _q_angle(phi, alpha, b, sigma)) * dt
    if not (math.isfinite(y) and math.isfinite(phi)):
        return y, th, phi, math.nan
    return y, th, phi, qsum


@njit(cache=True, nogil=True)
def run_reduced(
    v1: float,
    v2: float,
    alpha: float,
    b: float,
    sigma: float,
    transformed: bool,
    dW,
    dt: float,
    renorm_every: int,
    measure_from: int,
):
    """Reduced linear tangent system (no angle dependence); log-growth sum."""
    n = dW.shape[0]
    log1 = 0.0
    for step in range(n):
        if step == measure_from and step > 0:
            r = math.sqrt(v1 * v1 + v2 * v2)
            v1 /= r
            v2 /= r
            log1 = 0.0
        g = dW[step, 0]
        if transformed:
            a1 = sigma * b * v2
            a2 = -alpha * v2
            n1 = 0.0
            n2 = v1
        else:
            a1 = -alpha * v1
            a2 = b * v1
            n1 = sigma * v2
            n2 = 0.0
        p1 = v1 + a1 * dt + n1 * g
        p2 = v2 + a2 * dt + n2 * g
        if transformed:
            ap1 = sigma * b * p2
            ap2 = -alpha * p2
            np1 = 0.0
            np2 = p1
        else:
            ap1 = -alpha * p1
            ap2 = b * p1
            np1 = sigma * p2
            np2 = 0.0
        v1 = v1 + 0.5 * (a1 + ap1) * dt + 0.5 * (n1 + np1) * g
        v2 = v2 + 0.5 * (a2 + ap2) * dt + 0.5 * (n2 + np2) * g
        nv = v1 * v1 + v2 * v2
        if (step + 1) % renorm_every == 0 or nv < _NORM_LO or nv > _NORM_HI or step == n - 1:
            if not (math.isfinite(nv) and nv > 0.0):
                return v1, v2, math.nan
            r = math.sqrt(nv)
            v1 /= r
            v2 /= r
            if step >= measure_from:
                log1 += math.log(r)
    return v1, v2, log1


@njit(cache=True, nogil=True)
def _cloud_diameter(ys, ths) -> float:
    n = ys.shape[0]
    best = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dy = ys[i] - ys[j]
            dth = abs(ths[i] - ths[j])
            if dth > 0.5:
                dth = 1.0 - dth
            d = math.sqrt(dy * dy + dth * dth)
            if d > best:
                best = d
    return best


@njit(cache=True, nogil=True)
def run_pullback(
    ys,
    ths,
    alpha: float,
    b: float,
    sigma: float,
    kind: int,
    dW,
    dt: float,
    snap_every: int,
    diameters,
):
    """Evolve a point cloud under one shared noise path.

    ``diameters[k]`` receives the cloud diameter (cylinder metric,
    max over pairs) after k*snap_every steps; slot 0 is the initial
    diameter.  Returns 0 on success, 1 if any point left the
    representable range.
    """
    n_steps = dW.shape[0]
    n_pts = ys.shape[0]
    diameters[0] = _cloud_diameter(ys, ths)
    snap = 1
    for step in range(n_steps):
        g0 = dW[step, 0]
        g1 = dW[step, 1]
        for i in range(n_pts):
            y = ys[i]
            th = ths[i]
            f1, f2 = _coupling_f(kind, th)
            ay = -alpha * y
            ath = 1.0 + b * y
            noise_y = sigma * (f1 * g0 + f2 * g1)
            yp = y + ay * dt + noise_y
            thp = th + ath * dt
            thp_w = thp - math.floor(thp)
            f1p, f2p = _coupling_f(kind, thp_w)
            y_new = y + 0.5 * (ay - alpha * yp) * dt + 0.5 * sigma * (
                (f1 + f1p) * g0 + (f2 + f2p) * g1
            )
            th_new = th + 0.5 * (ath + 1.0 + b * yp) * dt
            if not (math.isfinite(y_new) and math.isfinite(th_new)):
                return 1
            ys[i] = y_new
            ths[i] = th_new - math.floor(th_new)
        if (step + 1) % snap_every == 0 and snap < diameters.shape[0]:
            diameters[snap] = _cloud_diameter(ys, ths)
            snap += 1
    return 0
