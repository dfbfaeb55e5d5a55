"""Minimal deterministic SVG line charts from CSV columns."""

from __future__ import annotations

import csv
import math
from xml.sax.saxutils import escape

__all__ = ["plot_svg", "PlotError"]

_W, _H = 640.0, 420.0
_ML, _MR, _MT, _MB = 70.0, 160.0, 30.0, 50.0
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


class PlotError(ValueError):
    pass


def _read(path, x_col, y_cols):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise PlotError(f"{path}: no data rows")
    header, body = rows[0], rows[1:]
    missing = [c for c in [x_col, *y_cols] if c not in header]
    if missing:
        raise PlotError(f"{path}: missing columns {', '.join(missing)}")
    idx = {c: header.index(c) for c in [x_col, *y_cols]}

    def num(s):
        try:
            return float(s)
        except ValueError:
            return math.nan

    xs = [num(r[idx[x_col]]) for r in body]
    ys = {c: [num(r[idx[c]]) for r in body] for c in y_cols}
    return xs, ys


def plot_svg(csv_path, x_col: str, y_cols, out_path, loglog: bool = False, title: str | None = None) -> str:
    """Render ``y_cols`` against ``x_col`` as polylines.

    In log-log mode nonpositive or missing values break the line. Point
    coordinates are written with full double precision so that output is
    reproducible and geometrically faithful. Nothing is written on error.
    """
    y_cols = list(y_cols)
    if not y_cols:
        raise PlotError("no y columns given")
    xs, ys = _read(csv_path, x_col, y_cols)
    tf = (lambda v: math.log10(v) if v > 0 else math.nan) if loglog else (lambda v: v)
    tx = [tf(v) if math.isfinite(v) else math.nan for v in xs]
    ty = {c: [tf(v) if math.isfinite(v) else math.nan for v in ys[c]] for c in y_cols}
    fx = [v for v in tx if math.isfinite(v)]
    fy = [v for c in y_cols for v, u in zip(ty[c], tx) if math.isfinite(v) and math.isfinite(u)]
    if not fx or not fy:
        raise PlotError(f"{csv_path}: nothing to plot")
    x0, x1 = min(fx), max(fx)
    y0, y1 = min(fy), max(fy)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(v):
        return _ML + (v - x0) / (x1 - x0) * pw

    def py(v):
        return _MT + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W:g}" height="{_H:g}" viewBox="0 0 {_W:g} {_H:g}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{_ML:g}" y="{_MT:g}" width="{pw:g}" height="{ph:g}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{_ML:g}" y="20" font-size="14">{escape(title)}</text>')
    lab = (lambda v: f"1e{v:g}") if loglog else (lambda v: f"{v:.4g}")
    for v in (x0, x1):
        out.append(f'<text x="{px(v):.3f}" y="{_H - _MB + 18:g}" font-size="11" text-anchor="middle">{lab(v)}</text>')
    for v in (y0, y1):
        out.append(f'<text x="{_ML - 6:g}" y="{py(v) + 4:.3f}" font-size="11" text-anchor="end">{lab(v)}</text>')
    out.append(f'<text x="{_ML + pw / 2:g}" y="{_H - 12:g}" font-size="12" text-anchor="middle">{escape(x_col)}</text>')
    for i, c in enumerate(y_cols):
        color = _COLORS[i % len(_COLORS)]
        seg = []
        segs = []
        for u, v in zip(tx, ty[c]):
            if math.isfinite(u) and math.isfinite(v):
                seg.append(f"{px(u)!r},{py(v)!r}")
            elif seg:
                segs.append(seg)
                seg = []
        if seg:
            segs.append(seg)
        for s in segs:
            out.append(f'<polyline data-series="{escape(c)}" fill="none" stroke="{color}" points="{" ".join(s)}"/>')
        ly = _MT + 16 * (i + 1)
        out.append(f'<line x1="{_W - _MR + 10:g}" y1="{ly:g}" x2="{_W - _MR + 30:g}" y2="{ly:g}" stroke="{color}"/>')
        out.append(f'<text x="{_W - _MR + 34:g}" y="{ly + 4:g}" font-size="11">{escape(c)}</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    with open(out_path, "w") as fh:
        fh.write(text)
    return str(out_path)
