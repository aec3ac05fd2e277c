"""Static SVG 1.1 line plots: one polyline per curve, plain axes and labels."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .algebra import blade_name

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]

WIDTH, HEIGHT = 640, 400
MARGIN = {"left": 70, "right": 130, "top": 30, "bottom": 50}


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:.4g}"


def line_plot(x: np.ndarray, curves: dict[str, np.ndarray], title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """Render ``curves`` (label -> y values) against shared ``x``."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for y in curves.values()]
    x0, x1 = float(x.min()), float(x.max())
    y0 = min(0.0, min(float(y.min()) for y in ys)) if ys else 0.0
    y1 = max(float(y.max()) for y in ys) if ys else 1.0
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(v):
        return MARGIN["left"] + (v - x0) / (x1 - x0) * pw

    def py(v):
        return MARGIN["top"] + (y1 - v) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    bx, by = MARGIN["left"], MARGIN["top"] + ph
    out.append(f'<line x1="{bx}" y1="{by}" x2="{bx + pw}" y2="{by}" stroke="black"/>')
    out.append(f'<line x1="{bx}" y1="{MARGIN["top"]}" x2="{bx}" y2="{by}" stroke="black"/>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{bx}" y1="{_fmt(py(0))}" x2="{bx + pw}" y2="{_fmt(py(0))}" '
                   'stroke="#bbbbbb" stroke-dasharray="4,3"/>')
    for t in np.linspace(x0, x1, 5):
        out.append(f'<text x="{_fmt(px(t))}" y="{by + 18}" font-size="11" text-anchor="middle">{_tick(t)}</text>')
    for t in np.linspace(y0, y1, 5):
        out.append(f'<text x="{bx - 6}" y="{_fmt(py(t) + 4)}" font-size="11" text-anchor="end">{_tick(t)}</text>')
    if title:
        out.append(f'<text x="{bx + pw / 2:.1f}" y="18" font-size="13" text-anchor="middle">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{bx + pw / 2:.1f}" y="{HEIGHT - 10}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        cy = MARGIN["top"] + ph / 2
        out.append(f'<text x="16" y="{cy:.1f}" font-size="12" text-anchor="middle" '
                   f'transform="rotate(-90 16 {cy:.1f})">{escape(ylabel)}</text>')
    for k, (label, y) in enumerate(curves.items()):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, np.asarray(y, dtype=float)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = MARGIN["top"] + 14 + 16 * k
        lx = bx + pw + 10
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 24}" y="{ly}" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def axis_slice(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """1-D line through the grid centre along ``axis``; keeps the trailing coefficient axis."""
    ndim = values.ndim - 1
    index = [s // 2 for s in values.shape[:ndim]]
    index[axis] = slice(None)
    return values[tuple(index)]


def spectrum_plot(spec, axis: int = 0) -> str:
    """Blade components and modulus of a spectrum along one frequency axis."""
    w = spec.wgrid.axes()[axis]
    line = axis_slice(spec.values, axis)
    curves = {"|F|": np.sqrt(np.sum(line * line, axis=-1))}
    for m in range(spec.sig.dim):
        if np.any(line[:, m]):
            curves[blade_name(m)] = line[:, m]
    return line_plot(w, curves, title=f"spectrum in {spec.sig}", xlabel=f"w{axis + 1}", ylabel="coefficient")
