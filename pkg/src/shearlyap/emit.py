"""Deterministic result serialization: CSV, JSON, and SVG charts.

Floats are written with ``repr`` (shortest round-tripping form), so
emitting the same result twice gives byte-identical files and a
JSON round trip (parse, re-emit) reproduces the bytes exactly.  The
SVG renderer is hand-rolled: no plotting dependency embeds timestamps
or generated ids, keeping output reproducible.
"""

from __future__ import annotations

import json
from typing import Sequence

from .errors import InvalidInput, IoFailure
from .fokker_planck import DensityGrid
from .sde import TrajectoryRecord
from .sweep import BifurcationCurve, SweepResult, SweepRow

__all__ = ["emit", "sweep_to_json", "parse_sweep_json", "FORMATS"]

FORMATS = ("csv", "json", "svg")

SWEEP_HEADER = "alpha,b,sigma,lambda1,lambda2,regime,sigma0,method,error"

_PALETTE = ("#1f6fb2", "#d0541e", "#348a4b", "#8353a8", "#b02b48", "#5b6670")


def _fmt(x: float | str | None) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return repr(float(x))


def _write(path: str, text: str) -> str:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path!r}: {exc}") from exc
    return path


# ---------------------------------------------------------------- CSV

def _sweep_csv(result: SweepResult) -> str:
    lines = [SWEEP_HEADER]
    for r in result.rows:
        lines.append(
            ",".join(
                (
                    _fmt(r.alpha),
                    _fmt(r.b),
                    _fmt(r.sigma),
                    _fmt(r.lambda1),
                    _fmt(r.lambda2),
                    r.regime,
                    _fmt(r.sigma0),
                    r.method,
                    _fmt(r.error),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _curve_csv(curve: BifurcationCurve) -> str:
    lines = ["alpha,sigma0"]
    lines += [f"{_fmt(a)},{_fmt(s)}" for a, s in curve.points]
    return "\n".join(lines) + "\n"


def _density_csv(grid: DensityGrid) -> str:
    lines = ["phi,p"]
    lines += [f"{_fmt(x)},{_fmt(v)}" for x, v in zip(grid.phi, grid.p)]
    return "\n".join(lines) + "\n"


def _diameter_csv(sample) -> str:
    lines = ["t,diameter"]
    lines += [f"{_fmt(t)},{_fmt(d)}" for t, d in zip(sample.times, sample.diameters)]
    return "\n".join(lines) + "\n"


def _trajectory_csv(records: Sequence[TrajectoryRecord]) -> str:
    lines = ["t,y,theta,v_y,v_theta,log_norm"]
    lines += [
        ",".join(_fmt(x) for x in (r.t, r.y, r.theta, r.v_y, r.v_theta, r.log_norm))
        for r in records
    ]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- JSON

def sweep_to_json(result: SweepResult) -> str:
    rows = [
        {
            "alpha": r.alpha,
            "b": r.b,
            "sigma": r.sigma,
            "lambda1": r.lambda1,
            "lambda2": r.lambda2,
            "regime": r.regime,
            "sigma0": r.sigma0,
            "method": r.method,
            "error": r.error,
        }
        for r in result.rows
    ]
    return json.dumps({"rows": rows}, indent=2) + "\n"


def parse_sweep_json(text: str) -> SweepResult:
    try:
        payload = json.loads(text)
        rows = tuple(SweepRow(**row) for row in payload["rows"])
    except (ValueError, TypeError, KeyError) as exc:
        raise InvalidInput(f"not a sweep result document: {exc}") from exc
    return SweepResult(rows=rows)


def _curve_json(curve: BifurcationCurve) -> str:
    return json.dumps(
        {"b": curve.b, "points": [{"alpha": a, "sigma0": s} for a, s in curve.points]},
        indent=2,
    ) + "\n"


def _density_json(grid: DensityGrid) -> str:
    return json.dumps(
        {
            "n": grid.n,
            "flux": grid.flux,
            "phi": list(map(float, grid.phi)),
            "p": list(map(float, grid.p)),
        },
        indent=2,
    ) + "\n"


def _diameter_json(sample) -> str:
    return json.dumps(
        {
            "times": list(map(float, sample.times)),
            "diameters": list(map(float, sample.diameters)),
            "final_diameter": float(sample.diameters[-1]),
            "points": [[float(y), float(th)] for y, th in sample.points],
        },
        indent=2,
    ) + "\n"


def _trajectory_json(records: Sequence[TrajectoryRecord]) -> str:
    return json.dumps(
        {
            "records": [
                {
                    "t": r.t,
                    "y": r.y,
                    "theta": r.theta,
                    "v_y": r.v_y,
                    "v_theta": r.v_theta,
                    "log_norm": r.log_norm,
                }
                for r in records
            ]
        },
        indent=2,
    ) + "\n"


# ---------------------------------------------------------------- SVG

def _svg_chart(
    series: list[tuple[str, Sequence[float], Sequence[float]]],
    markers: list[tuple[float, float]],
    zero_line: bool,
    x_label: str,
    y_label: str,
) -> str:
    width, height = 640, 420
    left, right, top, bottom = 70.0, 620.0, 20.0, 370.0
    xs = [x for _, sx, _ in series for x in sx] + [m[0] for m in markers]
    ys = [y for _, _, sy in series for y in sy] + [m[1] for m in markers]
    if not xs:
        raise InvalidInput("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if zero_line:
        y_lo, y_hi = min(y_lo, 0.0), max(y_hi, 0.0)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad_x = 0.05 * (x_hi - x_lo)
    pad_y = 0.05 * (y_hi - y_lo)
    x_lo, x_hi = x_lo - pad_x, x_hi + pad_x
    y_lo, y_hi = y_lo - pad_y, y_hi + pad_y

    def px(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * (right - left)

    def py(y: float) -> float:
        return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{left}" y="{top}" width="{right-left}" height="{bottom-top}" '
        'fill="white" stroke="#222" stroke-width="1"/>',
    ]
    for k in range(5):
        xv = x_lo + (x_hi - x_lo) * k / 4.0
        yv = y_lo + (y_hi - y_lo) * k / 4.0
        out.append(
            f'<text x="{px(xv):.2f}" y="{bottom+18:.2f}" font-size="11" '
            f'text-anchor="middle">{xv:.4g}</text>'
        )
        out.append(
            f'<text x="{left-8:.2f}" y="{py(yv)+4:.2f}" font-size="11" '
            f'text-anchor="end">{yv:.4g}</text>'
        )
    out.append(
        f'<text x="{(left+right)/2:.2f}" y="{height-8}" font-size="13" '
        f'text-anchor="middle">{x_label}</text>'
    )
    out.append(
        f'<text x="16" y="{(top+bottom)/2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {(top+bottom)/2:.2f})">{y_label}</text>'
    )
    if zero_line and y_lo < 0.0 < y_hi:
        out.append(
            f'<line x1="{left}" y1="{py(0.0):.2f}" x2="{right}" y2="{py(0.0):.2f}" '
            'stroke="#888" stroke-width="1" stroke-dasharray="5,4"/>'
        )
    for idx, (label, sx, sy) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(sx, sy))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )
        if label:
            out.append(
                f'<text x="{right-6:.2f}" y="{top+16+14*idx:.2f}" font-size="11" '
                f'text-anchor="end" fill="{color}">{label}</text>'
            )
    for mx, my in markers:
        out.append(
            f'<circle cx="{px(mx):.2f}" cy="{py(my):.2f}" r="4" fill="none" '
            'stroke="#b02b48" stroke-width="1.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _sweep_svg(result: SweepResult) -> str:
    """Top exponent against noise amplitude, one line per (alpha, b)
    slice, with the zero level and the critical amplitude marked."""
    slices: dict[tuple[float, float], list[SweepRow]] = {}
    for r in result.rows:
        if r.lambda1 is None:
            continue
        if r.method != "quadrature" and any(
            s.method == "quadrature" for s in result.rows if s.lambda1 is not None
        ):
            continue
        slices.setdefault((r.alpha, r.b), []).append(r)
    if not slices:
        raise InvalidInput("sweep has no plottable rows")
    series = []
    markers = []
    for (alpha, b), rows in sorted(slices.items()):
        rows = sorted(rows, key=lambda r: r.sigma)
        series.append(
            (f"alpha={alpha:.4g}, b={b:.4g}", [r.sigma for r in rows], [r.lambda1 for r in rows])
        )
        s0 = rows[0].sigma0
        if s0 is not None and rows[0].sigma <= s0 <= rows[-1].sigma:
            markers.append((s0, 0.0))
    return _svg_chart(series, markers, True, "sigma", "lambda1")


def _curve_svg(curve: BifurcationCurve) -> str:
    xs = [a for a, _ in curve.points]
    ys = [s for _, s in curve.points]
    return _svg_chart([(f"b={curve.b:.4g}", xs, ys)], [], False, "alpha", "sigma0")


def _density_svg(grid: DensityGrid) -> str:
    return _svg_chart(
        [("", list(map(float, grid.phi)), list(map(float, grid.p)))], [], False, "phi", "p"
    )


def _diameter_svg(sample) -> str:
    return _svg_chart(
        [("", list(map(float, sample.times)), list(map(float, sample.diameters)))],
        [],
        False,
        "t",
        "diameter",
    )


# ------------------------------------------------------------ dispatch

def emit(obj, format: str, path: str) -> str:
    """Write a result object to ``path`` in the requested format."""
    from .estimators import PullbackSample

    if format not in FORMATS:
        raise InvalidInput(f"unknown format {format!r} (valid: {', '.join(FORMATS)})")
    if isinstance(obj, SweepResult):
        text = {"csv": _sweep_csv, "json": sweep_to_json, "svg": _sweep_svg}[format](obj)
    elif isinstance(obj, BifurcationCurve):
        text = {"csv": _curve_csv, "json": _curve_json, "svg": _curve_svg}[format](obj)
    elif isinstance(obj, DensityGrid):
        text = {"csv": _density_csv, "json": _density_json, "svg": _density_svg}[format](obj)
    elif isinstance(obj, PullbackSample):
        text = {"csv": _diameter_csv, "json": _diameter_json, "svg": _diameter_svg}[format](obj)
    elif isinstance(obj, Sequence) and obj and isinstance(obj[0], TrajectoryRecord):
        if format == "svg":
            raise InvalidInput("trajectory dumps support csv and json only")
        text = {"csv": _trajectory_csv, "json": _trajectory_json}[format](obj)
    else:
        raise InvalidInput(f"cannot emit object of type {type(obj).__name__}")
    return _write(path, text)
