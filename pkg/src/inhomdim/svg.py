"""Minimal SVG line charts (axes, ticks, polylines, legend) with no plotting dependency."""

from html import escape

import numpy as np

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


def _ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return [float(v) for v in np.arange(start, hi + step * 1e-9, step)]


def line_chart(series, title="", xlabel="", ylabel="", width=640, height=420) -> str:
    """Render ``series`` = [{"x", "y", "label", "dashed"?}, ...] as an SVG string.

    None entries in ``y`` break the polyline.
    """
    left, right, top, bottom = 64, 16, 36, 48
    xs = np.concatenate([np.asarray(s["x"], dtype=float) for s in series])
    ys = np.concatenate([np.asarray([v for v in s["y"] if v is not None], dtype=float)
                         for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1
    pad = 0.05 * (y1 - y0 or 1)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (y1 - y) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{px(t):.2f}" y1="{top + ph}" x2="{px(t):.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{top + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 5}" y1="{py(t):.2f}" x2="{left}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    if title:
        out.append(f'<text x="{width / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {top + ph / 2})">{escape(ylabel)}</text>')
    for n, s in enumerate(series):
        color = s.get("color", _COLORS[n % len(_COLORS)])
        dash = ' stroke-dasharray="6 4"' if s.get("dashed") else ""
        run = []
        runs = [run]
        for x, y in zip(s["x"], s["y"]):
            if y is None:
                run = []
                runs.append(run)
            else:
                run.append(f"{px(float(x)):.2f},{py(float(y)):.2f}")
        for r in runs:
            if len(r) > 1:
                out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} '
                           f'points="{" ".join(r)}"/>')
        ly = top + 14 + 16 * n
        out.append(f'<line x1="{left + 10}" y1="{ly}" x2="{left + 34}" y2="{ly}" stroke="{color}"{dash}/>')
        out.append(f'<text x="{left + 40}" y="{ly + 4}">{escape(s.get("label", ""))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
