"""Per-viewpoint viewsheds and the visibility / colored visibility maps.

Viewsheds are computed by an angular walk away from the viewpoint keeping
the running maximum sight-line slope; the walk is O(n) per direction. The
colored map is the common refinement of all viewshed interval lists.
"""

from __future__ import annotations

from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from .geometry import (
    MODES,
    Mode,
    Terrain,
    TerrainPoint,
    ViewpointSet,
    _mirror_terrain,
    point_at_x,
)
from .intervals import ColoredMap, IntervalMap
from .tolerance import get_epsilon

Interval = Tuple[TerrainPoint, TerrainPoint]

_FULL, _PART, _NONE = 2, 1, 0


def _walk_right(terrain: Terrain, a: int, eps: float) -> List[Interval]:
    """Maximal visible intervals at x >= x_a, starting at the viewpoint itself."""
    n = terrain.n
    vp = terrain.vertex_point(a)
    if a == n - 1:
        return [(vp, vp)]
    xs, ys = terrain.xs, terrain.ys
    px, py = float(xs[a]), float(ys[a])
    dx = xs[a + 1:] - px
    dy = ys[a + 1:] - py
    slopes = dy / dx
    run_max = np.maximum.accumulate(slopes)

    k = n - 1 - a  # number of edges to the right
    states = np.empty(k, dtype=np.int8)
    states[0] = _FULL
    if k > 1:
        blocker = run_max[:-1]
        g_left = dy[:-1] - blocker * dx[:-1]
        g_right = dy[1:] - blocker * dx[1:]
        left_ok = g_left >= -eps
        right_ok = g_right >= -eps
        st = np.where(left_ok & right_ok, _FULL,
                      np.where(~left_ok & (g_right > eps), _PART, _NONE))
        states[1:] = st

    intervals: List[Interval] = []
    open_start: Optional[TerrainPoint] = vp
    bounds = np.flatnonzero(np.diff(states)) + 1
    runs = np.concatenate(([0], bounds, [k]))
    xs_l = terrain._xs_list
    for ri in range(len(runs) - 1):
        r0, r1 = int(runs[ri]), int(runs[ri + 1])
        state = int(states[r0])
        if state == _FULL:
            if open_start is None:
                open_start = terrain.vertex_point(a + r0)
        elif state == _NONE:
            if open_start is not None:
                intervals.append((open_start, terrain.vertex_point(a + r0)))
                open_start = None
        else:
            # partial edges are isolated: left endpoint hidden, ray crossed inside
            for r in range(r0, r1):
                if open_start is not None:
                    intervals.append((open_start, terrain.vertex_point(a + r)))
                blocker_r = float(run_max[r - 1])
                gl = float(dy[r - 1] - blocker_r * dx[r - 1])
                gr = float(dy[r] - blocker_r * dx[r])
                u = gl / (gl - gr)
                x0, x1 = xs_l[a + r], xs_l[a + r + 1]
                x_star = x0 + u * (x1 - x0)
                open_start = terrain.point_on_edge(a + r, min(max(x_star, x0), x1))
    if open_start is not None:
        intervals.append((open_start, terrain.vertex_point(n - 1)))
    return intervals


def _walk_left(terrain: Terrain, a: int, eps: float) -> List[Interval]:
    """Mirror of _walk_right for x <= x_a, returned left-to-right."""
    mirrored = _mirror_terrain(terrain)
    got = _walk_right(mirrored, terrain.n - 1 - a, eps)
    out: List[Interval] = []
    for s, e in reversed(got):
        out.append((point_at_x(terrain, -e.x, eps), point_at_x(terrain, -s.x, eps)))
    return out


def viewshed(terrain: Terrain, v: int, mode: Mode = "both",
             eps: Optional[float] = None) -> List[Interval]:
    """Maximal closed intervals of the terrain visible from viewpoint vertex v.

    In mode "left" ("right") the result is clipped at the viewpoint, which is
    always included in its own viewshed.
    """
    if eps is None:
        eps = get_epsilon()
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "left":
        return _walk_left(terrain, v, eps)
    if mode == "right":
        return _walk_right(terrain, v, eps)
    left = _walk_left(terrain, v, eps)
    right = _walk_right(terrain, v, eps)
    if not left:
        return right
    if not right:
        return left
    return left[:-1] + [(left[-1][0], right[0][1])] + right[1:]


def _merge_closed(intervals: List[Interval], eps: float) -> List[Interval]:
    """Union of closed intervals, merged when overlapping or touching."""
    items = sorted(intervals, key=lambda iv: iv[0].x)
    out: List[Interval] = []
    for s, e in items:
        if out and s.x <= out[-1][1].x + eps:
            if e.x > out[-1][1].x:
                out[-1] = (out[-1][0], e)
        else:
            out.append((s, e))
    return out


def compute_vis(terrain: Terrain, viewpoints: ViewpointSet, mode: Mode = "both",
                eps: Optional[float] = None) -> IntervalMap:
    """Visible/invisible partition: the union of all viewpoint viewsheds."""
    if eps is None:
        eps = get_epsilon()
    all_ivs: List[Interval] = []
    for v in viewpoints:
        all_ivs.extend(viewshed(terrain, v, mode, eps))
    all_ivs = [iv for iv in all_ivs if iv[1].x - iv[0].x > eps]
    merged = _merge_closed(all_ivs, eps)

    bps: List[TerrainPoint] = [terrain.leftmost()]
    labels: List[bool] = []
    x_min, x_max = terrain.x_min, terrain.x_max
    for s, e in merged:
        if s.x > x_min + eps:
            labels.append(False)
            bps.append(s)
        labels.append(True)
        if e.x < x_max - eps:
            bps.append(e)
    if not merged:
        labels.append(False)
    elif merged[-1][1].x < x_max - eps:
        labels.append(False)
    bps.append(terrain.rightmost())
    return IntervalMap(tuple(bps), tuple(labels))


def compute_colvis(terrain: Terrain, viewpoints: ViewpointSet, mode: Mode = "both",
                   eps: Optional[float] = None) -> ColoredMap:
    """Common refinement of all viewsheds with per-breakpoint delta sets.

    Built by merging the per-viewpoint interval lists; breakpoints are the
    viewshed endpoints interior to the terrain, each carrying the viewpoints
    gained and lost there.
    """
    if eps is None:
        eps = get_epsilon()
    events: List[Tuple[float, TerrainPoint, int, int]] = []  # (x, point, +-1, viewpoint)
    for v in viewpoints:
        for s, e in viewshed(terrain, v, mode, eps):
            if e.x - s.x <= eps:
                continue  # point-visibility only: no open interval is affected
            events.append((s.x, s, +1, v))
            events.append((e.x, e, -1, v))
    events.sort(key=lambda t: (t[0], -t[2]))

    x_min, x_max = terrain.x_min, terrain.x_max
    active: set = set()
    bps: List[TerrainPoint] = [terrain.leftmost()]
    labels: List[FrozenSet[int]] = []
    deltas: List[Tuple[FrozenSet[int], FrozenSet[int]]] = []
    changes = 0

    i = 0
    while i < len(events):
        x0 = events[i][0]
        gains: set = set()
        losses: set = set()
        pos = events[i][1]
        while i < len(events) and events[i][0] <= x0 + eps:
            _, p, kind, v = events[i]
            if kind > 0:
                gains.add(v)
            else:
                losses.add(v)
            pos = p
            i += 1
        both = gains & losses
        gains -= both
        losses -= both
        if x0 <= x_min + eps:
            active |= gains
            active -= losses
            continue
        if x0 >= x_max - eps:
            continue
        if not gains and not losses:
            continue
        labels.append(frozenset(active))
        bps.append(pos)
        deltas.append((frozenset(gains), frozenset(losses)))
        changes += len(gains) + len(losses)
        active |= gains
        active -= losses
    labels.append(frozenset(active))
    bps.append(terrain.rightmost())
    return ColoredMap(tuple(bps), tuple(labels), tuple(deltas), changes)
