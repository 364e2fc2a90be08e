"""Sweep output: deterministic CSV and a first-party SVG chart.

The CSV is the authoritative artifact: header exactly matches the
SweepRow field names, floats are written with shortest round-trip repr,
and timing columns are zeroed unless requested so repeated runs are
byte-identical.  The SVG is a minimal twin-axis line chart (fidelity and
gate time versus magnon frequency ratio) with no external dependencies.
"""

from __future__ import annotations

import dataclasses
import math
from xml.sax.saxutils import escape

from .sweep import SweepRow

__all__ = ["CSV_SCHEMA_VERSION", "emit_csv", "format_csv", "emit_svg", "format_svg"]

CSV_SCHEMA_VERSION = 1


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def format_csv(rows: list[SweepRow], timings: bool = False) -> str:
    """Render sweep rows as CSV text with a versioned schema comment."""
    if not rows:
        raise ValueError("no sweep rows to emit")
    names = SweepRow.field_names()
    lines = [f"# magnon-gates sweep csv schema v{CSV_SCHEMA_VERSION}"]
    lines.append(",".join(names))
    for row in rows:
        record = dataclasses.asdict(row)
        if not timings:
            record["wall_time_s"] = 0.0
        values = []
        for name in names:
            val = record[name]
            text = _fmt(val)
            if isinstance(val, str) and ("," in text or '"' in text):
                text = '"' + text.replace('"', '""') + '"'
            values.append(text)
        lines.append(",".join(values))
    return "\n".join(lines) + "\n"


def emit_csv(rows: list[SweepRow], path: str, timings: bool = False) -> str:
    text = format_csv(rows, timings=timings)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    step = 10.0 ** math.floor(math.log10(span / n))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if span / (step * mult) <= n:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(round(t, 12))
        t += step
    return out


def format_svg(rows: list[SweepRow], title: str = "gate sweep") -> str:
    """Twin-axis line chart: fidelity (left) and gate time in us (right)."""
    good = [r for r in rows if not r.error and math.isfinite(r.avg_fidelity)]
    if not good:
        raise ValueError("no successful sweep rows to plot")
    width, height = 720, 460
    ml, mr, mt, mb = 70, 70, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    xs = [r.omega_m_ratio for r in good]
    f = [r.avg_fidelity for r in good]
    tg = [r.T_gate_s * 1e6 for r in good]
    x0, x1 = min(xs), max(xs)
    f0, f1 = min(f), max(f)
    g0, g1 = min(tg), max(tg)
    if x1 == x0:
        x1 = x0 + 1e-9
    pad = 0.05 * (f1 - f0 or 1e-6)
    f0, f1 = f0 - pad, f1 + pad
    pad = 0.05 * (g1 - g0 or 1e-6)
    g0, g1 = g0 - pad, g1 + pad

    def sx(x):
        return ml + pw * (x - x0) / (x1 - x0)

    def sf(y):
        return mt + ph * (1.0 - (y - f0) / (f1 - f0))

    def sg(y):
        return mt + ph * (1.0 - (y - g0) / (g1 - g0))

    def polyline(pts, color):
        path = " ".join(f"{px:.2f},{py:.2f}" for px, py in pts)
        return (f'<polyline fill="none" stroke="{color}" stroke-width="1.8" '
                f'points="{path}"/>')

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" font-size="15" '
        f'font-family="sans-serif">{escape(title)}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
    ]
    for t in _ticks(x0, x1):
        if x0 <= t <= x1:
            px = sx(t)
            parts.append(f'<line x1="{px:.2f}" y1="{mt + ph}" x2="{px:.2f}" '
                         f'y2="{mt + ph + 5}" stroke="#333"/>')
            parts.append(f'<text x="{px:.2f}" y="{mt + ph + 18}" text-anchor="middle" '
                         f'font-size="11" font-family="sans-serif">{t:g}</text>')
    for t in _ticks(f0, f1):
        if f0 <= t <= f1:
            py = sf(t)
            parts.append(f'<line x1="{ml - 5}" y1="{py:.2f}" x2="{ml}" y2="{py:.2f}" '
                         f'stroke="#1f77b4"/>')
            parts.append(f'<text x="{ml - 8}" y="{py + 4:.2f}" text-anchor="end" '
                         f'font-size="11" font-family="sans-serif" fill="#1f77b4">{t:g}</text>')
    for t in _ticks(g0, g1):
        if g0 <= t <= g1:
            py = sg(t)
            parts.append(f'<line x1="{ml + pw}" y1="{py:.2f}" x2="{ml + pw + 5}" '
                         f'y2="{py:.2f}" stroke="#2ca02c"/>')
            parts.append(f'<text x="{ml + pw + 8}" y="{py + 4:.2f}" text-anchor="start" '
                         f'font-size="11" font-family="sans-serif" fill="#2ca02c">{t:g}</text>')
    parts.append(polyline([(sx(x), sf(y)) for x, y in zip(xs, f)], "#1f77b4"))
    parts.append(polyline([(sx(x), sg(y)) for x, y in zip(xs, tg)], "#2ca02c"))
    parts.append(f'<text x="{ml + pw / 2:.0f}" y="{height - 12}" text-anchor="middle" '
                 f'font-size="12" font-family="sans-serif">magnon frequency ratio</text>')
    parts.append(f'<text x="18" y="{mt + ph / 2:.0f}" font-size="12" font-family="sans-serif" '
                 f'fill="#1f77b4" transform="rotate(-90 18 {mt + ph / 2:.0f})" '
                 f'text-anchor="middle">average fidelity</text>')
    parts.append(f'<text x="{width - 14}" y="{mt + ph / 2:.0f}" font-size="12" '
                 f'font-family="sans-serif" fill="#2ca02c" '
                 f'transform="rotate(90 {width - 14} {mt + ph / 2:.0f})" '
                 f'text-anchor="middle">gate time (us)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg(rows: list[SweepRow], path: str, title: str = "gate sweep") -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_svg(rows, title=title))
    return path
