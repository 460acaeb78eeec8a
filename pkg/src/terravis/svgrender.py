"""SVG rendering of terrains and maps (fixed 1000x400 viewBox, y up)."""

from __future__ import annotations

from typing import List, Optional

from .geometry import Terrain, ViewpointSet
from .intervals import IntervalMap

WIDTH, HEIGHT, MARGIN = 1000.0, 400.0, 20.0

PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]
INVISIBLE_COLOR = "#c8c8c8"


def _fmt(v: float) -> str:
    return f"{v:.3f}"


class _Projection:
    """Uniform scale into the viewBox with the y axis flipped upright."""

    def __init__(self, terrain: Terrain):
        xs = terrain.xs
        ys = terrain.ys
        span_x = float(xs[-1] - xs[0]) or 1.0
        span_y = float(ys.max() - ys.min()) or 1.0
        self.scale = min((WIDTH - 2 * MARGIN) / span_x,
                         (HEIGHT - 2 * MARGIN) / span_y)
        self.x0 = float(xs[0])
        self.y0 = float(ys.min())

    def pt(self, x: float, y: float) -> str:
        px = MARGIN + (x - self.x0) * self.scale
        py = HEIGHT - MARGIN - (y - self.y0) * self.scale
        return f"{_fmt(px)},{_fmt(py)}"


def _label_color(label, owner_order: dict) -> str:
    if label is None or label is False or label == frozenset():
        return INVISIBLE_COLOR
    if label is True:
        return PALETTE[0]
    if isinstance(label, frozenset):
        label = min(label)
    return PALETTE[owner_order.get(label, 0) % len(PALETTE)]


def render_svg(terrain: Terrain, viewpoints: ViewpointSet,
               imap: Optional[IntervalMap] = None) -> str:
    """Terrain polyline, viewpoint markers, and colored map intervals."""
    proj = _Projection(terrain)
    body: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {WIDTH:g} {HEIGHT:g}">',
        f'<rect width="{WIDTH:g}" height="{HEIGHT:g}" fill="#ffffff"/>',
    ]
    xs, ys = terrain._xs_list, terrain._ys_list

    if imap is not None:
        owner_order = {v: i for i, v in enumerate(viewpoints)}
        for left, right, label in imap.intervals():
            pts = [proj.pt(left.x, left.y)]
            for i in range(len(xs)):
                if left.x < xs[i] < right.x:
                    pts.append(proj.pt(xs[i], ys[i]))
            pts.append(proj.pt(right.x, right.y))
            color = _label_color(label, owner_order)
            body.append(f'<polyline points="{" ".join(pts)}" fill="none" '
                        f'stroke="{color}" stroke-width="6"/>')
        for bp in imap.interior_breakpoints():
            x, y = proj.pt(bp.x, bp.y).split(",")
            body.append(f'<line x1="{x}" y1="{_fmt(float(y) - 8)}" x2="{x}" '
                        f'y2="{_fmt(float(y) + 8)}" stroke="#000000" '
                        f'stroke-width="1"/>')

    chain = " ".join(proj.pt(x, y) for x, y in zip(xs, ys))
    body.append(f'<polyline points="{chain}" fill="none" stroke="#000000" '
                f'stroke-width="1.5"/>')
    for v in viewpoints:
        x, y = proj.pt(xs[v], ys[v]).split(",")
        body.append(f'<circle cx="{x}" cy="{y}" r="4" fill="#d62728" '
                    f'stroke="#000000" stroke-width="0.8"/>')
    body.append("</svg>")
    return "\n".join(body) + "\n"
