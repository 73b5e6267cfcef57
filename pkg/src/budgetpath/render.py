"""Deterministic SVG rendering of scenarios and solved paths."""

from __future__ import annotations

import numpy as np

from .scenario import (
    METHOD_GRAPH,
    METHOD_REFINED,
    METHOD_STRAIGHT,
    PathSolution,
    Scenario,
)

_STYLE = {
    METHOD_GRAPH: ("#1f77b4", "graph path"),
    METHOD_REFINED: ("#d62728", "refined path"),
    METHOD_STRAIGHT: ("#555555", "straight path"),
}
_REGION_FILL = "#f7d774"
_REGION_EDGE = "#9a7b16"


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def render_svg(scn: Scenario, solutions: list[PathSolution], size: int = 720) -> str:
    """Figure with regions, the dashed straight baseline, and solution paths.

    Output bytes depend only on the inputs, so re-rendering the same data
    is bit-identical.
    """
    pts = [scn.start, scn.end]
    for poly in scn.polytopes:
        pts.extend(poly.vertices)
    for sol in solutions:
        pts.extend(sol.waypoints)
    arr = np.asarray(pts, dtype=float)
    lo = arr.min(axis=0)
    hi = arr.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = 0.06 * float(max(span))
    lo -= pad
    hi += pad
    span = hi - lo

    scale = size / float(max(span))
    width = span[0] * scale
    height = span[1] * scale

    def sx(x: float) -> str:
        return _fmt((x - lo[0]) * scale)

    def sy(y: float) -> str:
        return _fmt(height - (y - lo[1]) * scale)

    def path_of(points) -> str:
        return " ".join(f"{sx(p[0])},{sy(p[1])}" for p in points)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>',
    ]

    for poly in scn.polytopes:
        out.append(
            f'<polygon points="{path_of(poly.vertices)}" fill="{_REGION_FILL}" '
            f'stroke="{_REGION_EDGE}" stroke-width="1.2" fill-opacity="0.85"/>'
        )
        c = poly.centroid()
        out.append(
            f'<text x="{sx(c[0])}" y="{sy(c[1])}" font-size="11" fill="#6b5511" '
            f'text-anchor="middle">{poly.id}</text>'
        )

    out.append(
        f'<polyline points="{path_of([scn.start, scn.end])}" fill="none" '
        'stroke="#000000" stroke-width="1.2" stroke-dasharray="6,5"/>'
    )

    for sol in solutions:
        color, _ = _STYLE[sol.method_tag]
        out.append(
            f'<polyline points="{path_of(sol.waypoints)}" fill="none" '
            f'stroke="{color}" stroke-width="2.0"/>'
        )

    for label, p, color in (("S", scn.start, "#2ca02c"), ("E", scn.end, "#9467bd")):
        out.append(f'<circle cx="{sx(p[0])}" cy="{sy(p[1])}" r="4" fill="{color}"/>')
        out.append(
            f'<text x="{_fmt(float(sx(p[0])) + 7)}" y="{sy(p[1])}" font-size="12" '
            f'fill="{color}">{label}</text>'
        )

    legend = [("straight baseline", "#000000")]
    legend += [
        (f"{_STYLE[s.method_tag][1]} ({s.total_length:.4f})", _STYLE[s.method_tag][0])
        for s in solutions
    ]
    y0 = 16
    for i, (text, color) in enumerate(legend):
        y = y0 + 16 * i
        out.append(
            f'<line x1="10" y1="{y}" x2="34" y2="{y}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="40" y="{y + 4}" font-size="12" fill="#222222">{text}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
