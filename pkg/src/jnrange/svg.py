"""Minimal SVG writer for range plots.

Geometry is written in data coordinates (the same 17-digit numbers as the
CSV files) inside a group whose transform maps data space to the canvas.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
SIZE = 480
MARGIN = 40


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def render(curves, markers=(), title: str = "") -> str:
    """``curves``: list of (complex points, label); ``markers``: list of (complex, label)."""
    pts = [np.asarray(c, dtype=complex) for c, _ in curves] + [np.array([z]) for z, _ in markers]
    allp = np.concatenate(pts) if pts else np.zeros(1, dtype=complex)
    lo_x, hi_x = allp.real.min(), allp.real.max()
    lo_y, hi_y = allp.imag.min(), allp.imag.max()
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12) * 1.1
    cx, cy = (lo_x + hi_x) / 2, (lo_y + hi_y) / 2
    scale = (SIZE - 2 * MARGIN) / span
    tx = SIZE / 2 - scale * cx
    ty = SIZE / 2 + scale * cy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE + 20 * len(curves)}" '
        f'viewBox="0 0 {SIZE} {SIZE + 20 * len(curves)}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE + 20 * len(curves)}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{escape(title)}</text>')
    out.append(f'<g transform="matrix({_fmt(scale)} 0 0 {_fmt(-scale)} {_fmt(tx)} {_fmt(ty)})">')
    for i, (c, _) in enumerate(curves):
        c = np.asarray(c, dtype=complex)
        coords = " ".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in c)
        out.append(
            f'<polygon points="{coords}" fill="none" stroke="{COLORS[i % len(COLORS)]}" '
            f'stroke-width="1.5" vector-effect="non-scaling-stroke"/>'
        )
    r = 4.0 / scale
    for z, _ in markers:
        out.append(
            f'<circle cx="{_fmt(z.real)}" cy="{_fmt(z.imag)}" r="{_fmt(r)}" fill="black"/>'
        )
    out.append("</g>")
    for i, (_, label) in enumerate(curves):
        y = SIZE + 14 + 20 * i
        out.append(
            f'<text x="{MARGIN}" y="{y}" font-family="sans-serif" font-size="12" '
            f'fill="{COLORS[i % len(COLORS)]}">{escape(label)}</text>'
        )
    if markers:
        labels = ", ".join(label for _, label in markers)
        out.append(
            f'<text x="{SIZE // 2}" y="{SIZE + 14}" font-family="sans-serif" font-size="12">'
            f'&#9679; {escape(labels)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
