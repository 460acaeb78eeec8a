"""Terrain model and visibility/distance primitives.

A terrain is an x-monotone polygonal chain in the plane. Two points on the
chain see each other when the segment between them has no point strictly
below the chain; touching (grazing) contact still counts as visible.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from math import hypot
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    InvalidViewpointError,
    NonMonotoneError,
    OutOfRangeError,
    TooShortError,
)
from .tolerance import get_epsilon

Metric = str  # "euclidean" | "geodesic" | "link"
Mode = str    # "both" | "left" | "right"

METRICS = ("euclidean", "geodesic", "link")
MODES = ("both", "left", "right")

# spans longer than this switch the inner visibility test to numpy
_VECTOR_THRESHOLD = 96


@dataclass(frozen=True)
class TerrainPoint:
    """A point on the terrain: containing edge index plus coordinates.

    Vertices are represented canonically with the lower of their two
    adjacent edge indices (vertex 0 uses edge 0).
    """

    edge: int
    x: float
    y: float

    def coords(self) -> Tuple[float, float]:
        return (self.x, self.y)


class Terrain:
    """Immutable x-monotone chain with cumulative arc lengths."""

    __slots__ = ("xs", "ys", "cum_len", "n", "_xs_list", "_ys_list")

    def __init__(self, xs: np.ndarray, ys: np.ndarray, cum_len: np.ndarray):
        self.xs = xs
        self.ys = ys
        self.cum_len = cum_len
        self.n = len(xs)
        self._xs_list = xs.tolist()
        self._ys_list = ys.tolist()

    @property
    def vertices(self) -> List[Tuple[float, float]]:
        return list(zip(self._xs_list, self._ys_list))

    @property
    def x_min(self) -> float:
        return self._xs_list[0]

    @property
    def x_max(self) -> float:
        return self._xs_list[-1]

    def vertex_point(self, i: int) -> TerrainPoint:
        edge = i - 1 if i > 0 else 0
        return TerrainPoint(edge, self._xs_list[i], self._ys_list[i])

    def point_on_edge(self, edge: int, x: float) -> TerrainPoint:
        x0, x1 = self._xs_list[edge], self._xs_list[edge + 1]
        t = (x - x0) / (x1 - x0)
        y = self._ys_list[edge] + t * (self._ys_list[edge + 1] - self._ys_list[edge])
        return TerrainPoint(edge, x, y)

    def y_at(self, x: float) -> float:
        return point_at_x(self, x).y

    def arc_position(self, p: TerrainPoint) -> float:
        """Arc length from the leftmost vertex to p."""
        e = p.edge
        return float(self.cum_len[e]) + hypot(p.x - self._xs_list[e], p.y - self._ys_list[e])

    def leftmost(self) -> TerrainPoint:
        return self.vertex_point(0)

    def rightmost(self) -> TerrainPoint:
        return self.vertex_point(self.n - 1)

    def __repr__(self) -> str:
        return f"Terrain(n={self.n}, x=[{self.x_min}, {self.x_max}])"


@dataclass(frozen=True)
class ViewpointSet:
    """Sorted distinct vertex indices carrying the viewpoints."""

    indices: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)


def make_viewpoints(terrain: Terrain, indices: Iterable[int]) -> ViewpointSet:
    """Validate vertex indices and build a ViewpointSet (sorted, distinct)."""
    idx = sorted(int(i) for i in indices)
    for i in idx:
        if i < 0 or i >= terrain.n:
            raise InvalidViewpointError(f"vertex index {i} out of range 0..{terrain.n - 1}")
    if len(set(idx)) != len(idx):
        raise InvalidViewpointError("duplicate viewpoint vertex")
    if len(idx) >= terrain.n:
        raise InvalidViewpointError("need m < n viewpoints")
    return ViewpointSet(tuple(idx))


def validate_terrain(raw_vertices: Sequence[Sequence[float]]) -> Terrain:
    """Build a Terrain from raw (x, y) pairs.

    Raises TooShortError for fewer than 2 vertices and NonMonotoneError
    at the first edge whose x-step is not strictly positive.
    """
    if len(raw_vertices) < 2:
        raise TooShortError("terrain needs at least 2 vertices")
    xs = np.asarray([float(v[0]) for v in raw_vertices])
    ys = np.asarray([float(v[1]) for v in raw_vertices])
    dx = np.diff(xs)
    bad = np.flatnonzero(dx <= 0)
    if bad.size:
        raise NonMonotoneError(int(bad[0]))
    seg = np.hypot(dx, np.diff(ys))
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    return Terrain(xs, ys, cum)


def point_at_x(terrain: Terrain, x: float, eps: Optional[float] = None) -> TerrainPoint:
    """The unique terrain point at a given x (binary search + interpolation)."""
    if eps is None:
        eps = get_epsilon()
    xs = terrain._xs_list
    if x < xs[0] - eps or x > xs[-1] + eps:
        raise OutOfRangeError(f"x={x} outside [{xs[0]}, {xs[-1]}]")
    i = bisect_left(xs, x)
    if i < len(xs) and abs(xs[i] - x) <= eps:
        return terrain.vertex_point(i)
    if i > 0 and abs(xs[i - 1] - x) <= eps:
        return terrain.vertex_point(i - 1)
    edge = min(max(i - 1, 0), terrain.n - 2)
    return terrain.point_on_edge(edge, x)


def sees(terrain: Terrain, a: TerrainPoint, b: TerrainPoint,
         eps: Optional[float] = None) -> bool:
    """True iff the segment ab has no point strictly below the terrain.

    Symmetric; grazing contact counts as visible. Only vertices strictly
    between a and b can block, so the test is a walk over that span.
    """
    if eps is None:
        eps = get_epsilon()
    if a.x > b.x:
        a, b = b, a
    xs = terrain._xs_list
    lo = bisect_right(xs, a.x)
    hi = bisect_left(xs, b.x)
    if lo >= hi:
        return True
    dx = b.x - a.x
    if dx <= 0:
        return True
    slope = (b.y - a.y) / dx
    if hi - lo > _VECTOR_THRESHOLD:
        vx = terrain.xs[lo:hi]
        vy = terrain.ys[lo:hi]
        return bool(np.max(vy - (a.y + slope * (vx - a.x))) <= eps)
    ys = terrain._ys_list
    ax, ay = a.x, a.y
    for i in range(lo, hi):
        if ys[i] - (ay + slope * (xs[i] - ax)) > eps:
            return False
    return True


def sees_in_mode(terrain: Terrain, v: int, q: TerrainPoint, mode: Mode = "both",
                 eps: Optional[float] = None) -> bool:
    """Visibility from viewpoint vertex v restricted to a viewing direction.

    In mode "left" a viewpoint sees only itself and points to its left;
    symmetric for "right".
    """
    if eps is None:
        eps = get_epsilon()
    xv = terrain._xs_list[v]
    if mode == "left" and q.x > xv + eps:
        return False
    if mode == "right" and q.x < xv - eps:
        return False
    return sees(terrain, terrain.vertex_point(v), q, eps)


def ray_first_hit(terrain: Terrain, origin: Tuple[float, float],
                  through: Tuple[float, float], side: str,
                  eps: Optional[float] = None) -> Optional[TerrainPoint]:
    """First terrain point strictly beyond `through` struck by the ray origin->through.

    The ray "strikes" where it stops grazing and would pass strictly below
    the surface: the returned point is the boundary of the first below-terrain
    stretch (entering it, or emerging from it when the ray starts below).
    Returns None if the ray escapes past the terrain end.
    """
    if eps is None:
        eps = get_epsilon()
    ox, oy = origin
    tx, ty = through
    if abs(tx - ox) <= eps:
        return None
    slope = (ty - oy) / (tx - ox)

    def ray_y(x: float) -> float:
        return oy + slope * (x - ox)

    xs = terrain._xs_list
    ys = terrain._ys_list
    if side == "right":
        start = tx
        if start >= xs[-1] - eps:
            return None
        piece_xs = [start] + [x for x in xs[bisect_right(xs, start):]]
    elif side == "left":
        # mirror the walk by negating x
        mirrored = _mirror_terrain(terrain)
        hit = ray_first_hit(mirrored, (-ox, oy), (-tx, ty), "right", eps)
        if hit is None:
            return None
        return point_at_x(terrain, -hit.x, eps)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    g_prev = ray_y(start) - point_at_x(terrain, start, eps).y
    x_prev = start
    started_below = g_prev < -eps
    below = started_below
    for x in piece_xs[1:]:
        g = ray_y(x) - point_at_x(terrain, x, eps).y
        if not below and g < -eps:
            # entering below: zero crossing inside (x_prev, x]
            t = g_prev / (g_prev - g) if g_prev > 0 else 0.0
            x_hit = x_prev + t * (x - x_prev)
            if x_hit > tx + eps:
                return point_at_x(terrain, x_hit, eps)
            # dives below essentially at `through`: wait for emergence
            below = True
        elif below and g > eps:
            # emerging from below
            t = g_prev / (g_prev - g)
            x_hit = x_prev + t * (x - x_prev)
            if x_hit > tx + eps:
                return point_at_x(terrain, x_hit, eps)
            below = False
        elif below and -eps <= g <= eps:
            if x > tx + eps:
                return point_at_x(terrain, x, eps)
            below = False
        g_prev, x_prev = g, x
    return None


_MIRROR_CACHE: dict = {}


def _mirror_terrain(terrain: Terrain) -> Terrain:
    key = id(terrain)
    cached = _MIRROR_CACHE.get(key)
    if cached is not None and cached[0] is terrain:
        return cached[1]
    xs = -terrain.xs[::-1]
    ys = terrain.ys[::-1].copy()
    seg = np.hypot(np.diff(xs), np.diff(ys))
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    m = Terrain(xs, ys, cum)
    _MIRROR_CACHE.clear()
    _MIRROR_CACHE[key] = (terrain, m)
    return m


def link_between(terrain: Terrain, xa: float, xb: float) -> int:
    """Number of terrain vertices strictly inside the open x-interval."""
    if xa > xb:
        xa, xb = xb, xa
    xs = terrain._xs_list
    return max(bisect_left(xs, xb) - bisect_right(xs, xa), 0)


def metric_distance(terrain: Terrain, metric: Metric, a: TerrainPoint,
                    b: TerrainPoint) -> float:
    """Distance between two terrain points under the chosen metric.

    euclidean: straight-line distance; geodesic: arc length along the chain;
    link: vertices strictly inside the open portion between the points (two
    points on one closed edge are at link distance 0).
    """
    if metric == "euclidean":
        return hypot(a.x - b.x, a.y - b.y)
    if metric == "geodesic":
        return abs(terrain.arc_position(a) - terrain.arc_position(b))
    if metric == "link":
        return float(link_between(terrain, a.x, b.x))
    raise ValueError(f"unknown metric {metric!r}")


def metric_key(terrain: Terrain, metric: Metric, v: int, q: TerrainPoint) -> float:
    """Order-equivalent distance key from viewpoint vertex v to terrain point q.

    Euclidean uses the squared distance (no square roots in comparisons).
    """
    if metric == "euclidean":
        dx = terrain._xs_list[v] - q.x
        dy = terrain._ys_list[v] - q.y
        return dx * dx + dy * dy
    if metric == "geodesic":
        return abs(float(terrain.cum_len[v]) - terrain.arc_position(q))
    if metric == "link":
        return float(link_between(terrain, terrain._xs_list[v], q.x))
    raise ValueError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class BisectorCrossing:
    """One intersection of a viewpoint-pair bisector with the terrain."""

    point: TerrainPoint
    at_vertex: Optional[int]  # vertex index when the crossing sits on a vertex
    tangent: bool             # chain touches the bisector without crossing it


def bisector_crossings(terrain: Terrain, pi: Tuple[float, float],
                       pj: Tuple[float, float],
                       eps: Optional[float] = None) -> List[BisectorCrossing]:
    """All intersections of the perpendicular bisector of (pi, pj) with the chain.

    The signed quantity tested per vertex is (half) the squared-distance
    difference d^2(., pi) - d^2(., pj), normalized to length units. Runs of
    consecutive on-bisector vertices collapse to one crossing; a crossing is
    tangent when the chain keeps the same sign on both sides.
    """
    if eps is None:
        eps = get_epsilon()
    ax, ay = pi
    bx, by = pj
    dx, dy = bx - ax, by - ay
    norm = hypot(dx, dy)
    if norm <= eps:
        return []
    mx, my = (ax + bx) / 2.0, (ay + by) / 2.0
    g = ((terrain.xs - mx) * dx + (terrain.ys - my) * dy) / norm

    zero = np.abs(g) <= eps
    sign = np.where(zero, 0, np.sign(g)).astype(np.int8)
    crossings: List[BisectorCrossing] = []

    # interior crossings of edges with strictly opposite endpoint signs
    prod = sign[:-1] * sign[1:]
    interior = np.flatnonzero(prod < 0)
    # vertex-touch crossings (runs of zeros)
    zero_idx = np.flatnonzero(zero)

    events: List[Tuple[float, int, int]] = []  # (x, edge_or_vertex, kind 0=interior,1=vertex)
    for e in interior.tolist():
        events.append((0.0, e, 0))
    k = 0
    while k < len(zero_idx):
        start = k
        while k + 1 < len(zero_idx) and zero_idx[k + 1] == zero_idx[k] + 1:
            k += 1
        events.append((0.0, int(zero_idx[start]), 1))
        k += 1

    xs = terrain._xs_list
    out: List[Tuple[float, BisectorCrossing]] = []
    for _, idx, kind in events:
        if kind == 0:
            g0, g1 = float(g[idx]), float(g[idx + 1])
            t = g0 / (g0 - g1)
            x = xs[idx] + t * (xs[idx + 1] - xs[idx])
            out.append((x, BisectorCrossing(terrain.point_on_edge(idx, x), None, False)))
        else:
            # run of zero vertices starting at idx; find outer signs
            left = idx - 1
            right = idx
            while right + 1 < terrain.n and zero[right + 1]:
                right += 1
            s_left = sign[left] if left >= 0 else 0
            s_right = sign[right + 1] if right + 1 < terrain.n else 0
            tangent = s_left != 0 and s_left == s_right
            out.append((xs[idx], BisectorCrossing(terrain.vertex_point(idx), idx, tangent)))
    out.sort(key=lambda item: item[0])
    return [c for _, c in out]


_SCAN_CHUNK = 4096


def first_crossing_outward(terrain: Terrain, pi: Tuple[float, float],
                           pj: Tuple[float, float], start: int, side: str,
                           eps: Optional[float] = None
                           ) -> Optional[BisectorCrossing]:
    """First bisector-terrain crossing strictly beyond vertex `start`.

    Scans outward (left or right) in chunks with early exit; the squared
    distance difference is strictly negative at `start` (a viewpoint is
    closer to itself), so the first non-negative vertex value brackets the
    crossing. Equivalent to picking the extreme element of
    bisector_crossings on that side, but output-sensitive.
    """
    if eps is None:
        eps = get_epsilon()
    ax, ay = pi
    bx, by = pj
    dvx, dvy = bx - ax, by - ay
    eps_g = eps * hypot(dvx, dvy)
    mx, my = (ax + bx) / 2.0, (ay + by) / 2.0
    xs, ys = terrain.xs, terrain.ys
    n = terrain.n

    def g_at(k: int) -> float:
        return (float(xs[k]) - mx) * dvx + (float(ys[k]) - my) * dvy

    def classify_vertex(k: int, outer_known: float) -> BisectorCrossing:
        # walk over the (rare) run of on-bisector vertices to the far side
        lo = hi = k
        while lo - 1 >= 0 and abs(g_at(lo - 1)) <= eps_g:
            lo -= 1
        while hi + 1 < n and abs(g_at(hi + 1)) <= eps_g:
            hi += 1
        s_left = g_at(lo - 1) if lo - 1 >= 0 else 0.0
        s_right = g_at(hi + 1) if hi + 1 < n else 0.0
        tangent = (s_left > eps_g and s_right > eps_g) or \
                  (s_left < -eps_g and s_right < -eps_g)
        return BisectorCrossing(terrain.vertex_point(lo), lo, tangent)

    if side == "right":
        a = start + 1
        prev_g = g_at(start)
        while a < n:
            b = min(a + _SCAN_CHUNK, n)
            g = (xs[a:b] - mx) * dvx + (ys[a:b] - my) * dvy
            hits = np.flatnonzero(g > -eps_g)
            if hits.size:
                k = a + int(hits[0])
                gk = float(g[int(hits[0])])
                if gk > eps_g:
                    g_before = float(g[int(hits[0]) - 1]) if hits[0] > 0 else prev_g
                    t = g_before / (g_before - gk)
                    x = float(xs[k - 1]) + t * (float(xs[k]) - float(xs[k - 1]))
                    return BisectorCrossing(terrain.point_on_edge(k - 1, x), None, False)
                return classify_vertex(k, prev_g)
            prev_g = float(g[-1])
            a = b
        return None
    if side == "left":
        b = start
        prev_g = g_at(start)
        while b > 0:
            a = max(b - _SCAN_CHUNK, 0)
            g = (xs[a:b] - mx) * dvx + (ys[a:b] - my) * dvy
            hits = np.flatnonzero(g > -eps_g)
            if hits.size:
                k = a + int(hits[-1])
                gk = float(g[int(hits[-1])])
                if gk > eps_g:
                    g_after = float(g[int(hits[-1]) + 1]) \
                        if int(hits[-1]) + 1 < b - a else prev_g
                    t = gk / (gk - g_after)
                    x = float(xs[k]) + t * (float(xs[k + 1]) - float(xs[k]))
                    return BisectorCrossing(terrain.point_on_edge(k, x), None, False)
                return classify_vertex(k, prev_g)
            prev_g = float(g[0])
            b = a
        return None
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


@dataclass
class GeneralPositionReport:
    """Violations of the three standing geometric assumptions."""

    collinear_triples: List[Tuple[int, int, int]]
    edge_on_bisector: List[Tuple[int, int, int]]
    triple_equidistant: List[Tuple[TerrainPoint, int, int, int]]

    def is_clean(self) -> bool:
        return not (self.collinear_triples or self.edge_on_bisector
                    or self.triple_equidistant)


def check_general_position(terrain: Terrain, viewpoints: ViewpointSet,
                           eps: Optional[float] = None) -> GeneralPositionReport:
    """Report collinear vertex triples, edges inside a bisector, and terrain
    points equidistant from three or more viewpoints.

    Advisory: callers may proceed on violating inputs (tie-breaks are
    documented where they matter), but degenerate instances can exercise
    conventions the underlying analysis assumes away.
    """
    if eps is None:
        eps = get_epsilon()
    xs, ys = terrain.xs, terrain.ys
    n = terrain.n

    collinear: List[Tuple[int, int, int]] = []
    for i in range(n - 2):
        dx = xs[i + 1:] - xs[i]
        dy = ys[i + 1:] - ys[i]
        lens = np.hypot(dx, dy)
        order = np.argsort(dy / dx, kind="stable")
        for a, b in zip(order[:-1], order[1:]):
            cross = dx[a] * dy[b] - dy[a] * dx[b]
            if abs(cross) <= eps * lens[a] * lens[b]:
                j, k = sorted((int(a), int(b)))
                collinear.append((i, i + 1 + j, i + 1 + k))

    pts = {v: (float(xs[v]), float(ys[v])) for v in viewpoints}
    pairs = [(i, j) for ii, i in enumerate(viewpoints)
             for j in list(viewpoints)[ii + 1:]]

    edge_on: List[Tuple[int, int, int]] = []
    per_pair: dict = {}
    for i, j in pairs:
        ax, ay = pts[i]
        bx, by = pts[j]
        dx_, dy_ = bx - ax, by - ay
        norm = hypot(dx_, dy_)
        mx, my = (ax + bx) / 2.0, (ay + by) / 2.0
        g = ((xs - mx) * dx_ + (ys - my) * dy_) / norm
        on_line = np.abs(g) <= eps
        both = np.flatnonzero(on_line[:-1] & on_line[1:])
        for e in both.tolist():
            edge_on.append((int(e), i, j))
        per_pair[(i, j)] = bisector_crossings(terrain, pts[i], pts[j], eps)

    triples: List[Tuple[TerrainPoint, int, int, int]] = []
    seen = set()
    pair_list = list(per_pair.items())
    for a in range(len(pair_list)):
        (i1, j1), cs1 = pair_list[a]
        for b in range(a + 1, len(pair_list)):
            (i2, j2), cs2 = pair_list[b]
            shared = {i1, j1} & {i2, j2}
            if not shared:
                continue
            for c1 in cs1:
                for c2 in cs2:
                    if abs(c1.point.x - c2.point.x) <= eps:
                        trio = tuple(sorted({i1, j1, i2, j2}))
                        key = (trio, round(c1.point.x / max(eps, 1e-12)))
                        if key not in seen:
                            seen.add(key)
                            triples.append((c1.point, *trio))
    return GeneralPositionReport(collinear, edge_on, triples)
