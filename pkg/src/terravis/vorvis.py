"""Voronoi visibility maps via a left-to-right sweep over precomputed events.

Events are the colored-map breakpoints (visibility gains/losses) plus, per
viewpoint pair, the at-most-two bisector-terrain crossings at which both
viewpoints can be visible. The sweep keeps the visible viewpoints in a
balanced tree keyed by current distance; the closest one owns the region.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from math import hypot
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from .errors import InconsistentEventListError, InvalidKError, NoViewpointsError
from .geometry import (
    Metric,
    Mode,
    Terrain,
    TerrainPoint,
    ViewpointSet,
    first_crossing_outward,
    point_at_x,
    sees_in_mode,
)
from .intervals import ColoredMap, KOrderMap, SweepStats, VoronoiMap
from .tolerance import get_epsilon
from .viewshed import compute_colvis
from .visible_set import VisibleSet


@dataclass(frozen=True)
class Event:
    """All sweep stops at one terrain point, coalesced into one record."""

    position: TerrainPoint
    gains: FrozenSet[int] = frozenset()
    losses: FrozenSet[int] = frozenset()
    bisectors: Tuple[Tuple[int, int], ...] = ()
    is_end: bool = False


@dataclass(frozen=True)
class EventList:
    """Events sorted by x; the final element marks the terrain's right end."""

    events: Tuple[Event, ...]
    initial_visible: FrozenSet[int]
    metric: Metric
    mode: Mode

    def __post_init__(self):
        xs = [e.position.x for e in self.events]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("event positions not strictly increasing")
        if not self.events or not self.events[-1].is_end:
            raise ValueError("event list must end with the terrain-end sentinel")
        if any(e.is_end for e in self.events[:-1]):
            raise ValueError("terrain-end sentinel must be unique and last")
        for e in self.events:
            if e.gains & e.losses:
                raise ValueError("viewpoint both gained and lost at one event")


def candidate_type3_events(terrain: Terrain, p_i: int, p_j: int,
                           metric: Metric = "euclidean", mode: Mode = "both",
                           eps: Optional[float] = None,
                           stats: Optional[SweepStats] = None) -> List[TerrainPoint]:
    """Candidate bisector-crossing events for one viewpoint pair (0..2 points).

    Euclidean: with p_i the lower viewpoint, only the right-most crossing left
    of p_i and the left-most crossing right of it can be events; tangent
    touches are subsumed by p_i's visibility loss and dropped. Geodesic: the
    single point halving the arc length between the viewpoints. Link: the
    equidistant vertex (odd vertex count between), or the right endpoint of
    the equidistant open edge (even count), which is where the index-tie-broken
    nearest viewpoint actually changes. Every candidate must be visible from
    both viewpoints under the viewing mode.
    """
    if eps is None:
        eps = get_epsilon()
    if p_i == p_j:
        raise ValueError("need two distinct viewpoints")

    cands: List[TerrainPoint] = []
    if metric == "euclidean":
        pi = (terrain._xs_list[p_i], terrain._ys_list[p_i])
        pj = (terrain._xs_list[p_j], terrain._ys_list[p_j])
        if abs(pi[1] - pj[1]) <= eps:
            # vertical bisector: the single crossing sits between the viewpoints
            cands = [point_at_x(terrain, (pi[0] + pj[0]) / 2.0, eps)]
        else:
            # scan outward from the lower viewpoint; orient the signed
            # distance difference so it starts negative at the scan base
            low, low_pos, high_pos = (p_i, pi, pj) if pi[1] < pj[1] else (p_j, pj, pi)
            picked = [first_crossing_outward(terrain, low_pos, high_pos, low, "left", eps),
                      first_crossing_outward(terrain, low_pos, high_pos, low, "right", eps)]
            cands = [c.point for c in picked if c is not None and not c.tangent]
    elif metric == "geodesic":
        s_target = (float(terrain.cum_len[p_i]) + float(terrain.cum_len[p_j])) / 2.0
        cum = terrain.cum_len
        e = min(max(int(bisect_right(cum, s_target)) - 1, 0), terrain.n - 2)
        seg = float(cum[e + 1] - cum[e])
        t = (s_target - float(cum[e])) / seg if seg > 0 else 0.0
        x0, x1 = terrain._xs_list[e], terrain._xs_list[e + 1]
        cands = [terrain.point_on_edge(e, x0 + t * (x1 - x0))]
    elif metric == "link":
        a, b = sorted((p_i, p_j))
        between = b - a - 1
        if between % 2 == 1:
            cands = [terrain.vertex_point((a + b) // 2)]
        else:
            cands = [terrain.vertex_point((a + b + 1) // 2)]
    else:
        raise ValueError(f"unknown metric {metric!r}")

    out: List[TerrainPoint] = []
    for q in cands:
        if stats is not None:
            stats.ray_queries += 2
        if sees_in_mode(terrain, p_i, q, mode, eps) and \
           sees_in_mode(terrain, p_j, q, mode, eps):
            out.append(q)
    return out


def build_event_list(terrain: Terrain, viewpoints: ViewpointSet,
                     colored: ColoredMap, metric: Metric = "euclidean",
                     mode: Mode = "both", eps: Optional[float] = None,
                     stats: Optional[SweepStats] = None) -> EventList:
    """Merge colored-map breakpoints with all pairwise crossing candidates.

    Same-position records (within eps) coalesce into composite events; the
    list ends with a sentinel at the terrain's rightmost point.
    """
    if eps is None:
        eps = get_epsilon()
    raw: List[Tuple[float, TerrainPoint, Optional[Tuple], Optional[Tuple]]] = []
    for bp, (gained, lost) in zip(colored.interior_breakpoints(), colored.deltas):
        raw.append((bp.x, bp, (gained, lost), None))
    idx = list(viewpoints)
    for ii in range(len(idx)):
        for jj in range(ii + 1, len(idx)):
            i, j = idx[ii], idx[jj]
            for q in candidate_type3_events(terrain, i, j, metric, mode, eps, stats):
                raw.append((q.x, q, None, (i, j)))
    raw.sort(key=lambda t: t[0])

    end_point = terrain.rightmost()
    x_max = end_point.x
    events: List[Event] = []
    i = 0
    while i < len(raw):
        x0 = raw[i][0]
        if x0 >= x_max - eps:
            break  # anything this far right folds into the sentinel
        gains: set = set()
        losses: set = set()
        bis: List[Tuple[int, int]] = []
        pos = raw[i][1]
        while i < len(raw) and raw[i][0] <= x0 + eps:
            _, p, delta, pair = raw[i]
            if delta is not None:
                gains |= delta[0]
                losses |= delta[1]
                pos = p  # prefer the colored-map point as the canonical position
            elif pair not in bis:
                bis.append(pair)
            i += 1
        both = gains & losses  # sub-tolerance visibility sliver: cancel
        events.append(Event(pos, frozenset(gains - both), frozenset(losses - both),
                            tuple(sorted(bis))))
    events.append(Event(end_point, is_end=True))
    return EventList(tuple(events), colored.labels[0], metric, mode)


def _reinsert_position(terrain: Terrain, q: TerrainPoint, next_x: float,
                       eps: float) -> TerrainPoint:
    """Terrain point infinitesimally right of q but left of the next event.

    Built without vertex snapping: when q sits on a vertex the nudged point
    must land strictly inside the following edge so that distance keys (link
    counts in particular) take their post-crossing values.
    """
    delta = min(eps, (next_x - q.x) / 2.0)
    x = q.x + delta
    if x <= q.x:  # delta below representable resolution
        x = float(np.nextafter(q.x, np.inf))
    x = min(x, terrain.x_max)
    xs = terrain._xs_list
    edge = min(max(bisect_right(xs, x) - 1, 0), terrain.n - 2)
    return terrain.point_on_edge(edge, x)


def sweep_vorvis(terrain: Terrain, viewpoints: ViewpointSet, event_list: EventList,
                 metric: Optional[Metric] = None,
                 eps: Optional[float] = None) -> VoronoiMap:
    """Left-to-right sweep emitting an interval whenever the closest visible
    viewpoint changes; invisible stretches get owner None."""
    if eps is None:
        eps = get_epsilon()
    if metric is None:
        metric = event_list.metric
    stats = SweepStats()
    tree = VisibleSet(terrain, metric, stats)
    left_pt = terrain.leftmost()
    for v in sorted(event_list.initial_visible):
        tree.insert(v, left_pt)

    t_left = left_pt
    p_star = tree.min()
    bps: List[TerrainPoint] = [left_pt]
    labels: List[Optional[int]] = []
    events = event_list.events
    for k, ev in enumerate(events):
        stats.events_processed += 1
        if ev.is_end:
            bps.append(ev.position)
            labels.append(p_star)
            break
        q = ev.position
        for v in sorted(ev.losses):
            if v not in tree:
                raise InconsistentEventListError(
                    f"viewpoint {v} lost at x={q.x} but not currently visible")
            tree.remove(v)
        for v in sorted(ev.gains):
            tree.insert(v, q)
        if ev.bisectors:
            pos2 = _reinsert_position(terrain, q, events[k + 1].position.x, eps)
            for i, j in ev.bisectors:
                if i in tree and j in tree:
                    tree.remove(i)
                    tree.insert(i, pos2)
        p_min = tree.min()
        if p_min != p_star:
            if q.x > t_left.x:
                bps.append(q)
                labels.append(p_star)
                t_left = q
            p_star = p_min
    global _LAST_STATS
    _LAST_STATS = stats
    return VoronoiMap(tuple(bps), tuple(labels), metric=metric,
                      mode=event_list.mode, stats=stats)


def compute_vorvis(terrain: Terrain, viewpoints: ViewpointSet,
                   metric: Metric = "euclidean", mode: Mode = "both",
                   eps: Optional[float] = None) -> VoronoiMap:
    """Colored map -> candidates -> event list -> sweep, end to end."""
    if eps is None:
        eps = get_epsilon()
    stats = SweepStats()
    colored = compute_colvis(terrain, viewpoints, mode, eps)
    event_list = build_event_list(terrain, viewpoints, colored, metric, mode, eps, stats)
    result = sweep_vorvis(terrain, viewpoints, event_list, metric, eps)
    result.stats.ray_queries += stats.ray_queries
    return result


def compute_kvorvis(terrain: Terrain, viewpoints: ViewpointSet, k: int,
                    metric: Metric = "euclidean", mode: Mode = "both",
                    eps: Optional[float] = None) -> KOrderMap:
    """Map of the sets of the k closest visible viewpoints.

    Sweep variant that additionally tracks the number of visible viewpoints
    and the farthest member of the current top set; gains are admitted in
    distance order, evicting the farthest member while a newcomer beats it.
    For k = m the result re-merges to the colored visibility map.
    """
    if eps is None:
        eps = get_epsilon()
    m = len(viewpoints)
    if k < 1 or k > m:
        raise InvalidKError(f"k={k} outside 1..{m}")

    stats = SweepStats()
    colored = compute_colvis(terrain, viewpoints, mode, eps)
    event_list = build_event_list(terrain, viewpoints, colored, metric, mode, eps, stats)
    tree = VisibleSet(terrain, metric, stats)
    left_pt = terrain.leftmost()
    for v in sorted(event_list.initial_visible):
        tree.insert(v, left_pt)

    top: set = set(tree.first(min(k, len(tree))))
    p_max: Optional[int] = None
    if top:
        p_max = max(top, key=lambda v: tree.key(v, left_pt))

    bps: List[TerrainPoint] = [left_pt]
    labels: List[FrozenSet[int]] = [frozenset(top)]
    deltas: List[Tuple[FrozenSet[int], FrozenSet[int]]] = []
    changes = 0
    events = event_list.events
    for idx, ev in enumerate(events):
        stats.events_processed += 1
        if ev.is_end:
            bps.append(ev.position)
            break
        q = ev.position
        top_before = frozenset(top)

        for v in sorted(ev.losses):
            if v not in tree:
                raise InconsistentEventListError(
                    f"viewpoint {v} lost at x={q.x} but not currently visible")
            if v in top:
                top.discard(v)
                if v == p_max:
                    p_max = tree.predecessor(v)
            tree.remove(v)
        while len(top) < min(k, len(tree)):
            nxt = tree.successor(p_max) if p_max is not None else tree.min()
            top.add(nxt)
            p_max = nxt

        incoming = sorted(ev.gains, key=lambda v: tree.key(v, q))
        t = 0
        while t < len(incoming) and len(top) < k:
            v = incoming[t]
            tree.insert(v, q)
            top.add(v)
            if p_max is None or tree.key(v, q) > tree.key(p_max, q):
                p_max = v
            t += 1
        while t < len(incoming) and p_max is not None and \
                tree.key(incoming[t], q) < tree.key(p_max, q):
            v = incoming[t]
            tree.insert(v, q)
            top.add(v)
            old_max = p_max
            top.discard(old_max)
            p_max = tree.predecessor(old_max)
            t += 1
        for v in incoming[t:]:
            tree.insert(v, q)

        if ev.bisectors:
            pos2 = _reinsert_position(terrain, q, events[idx + 1].position.x, eps)
            for i, j in ev.bisectors:
                if i not in tree or j not in tree:
                    continue
                tree.remove(i)
                tree.insert(i, pos2)
                in_i, in_j = i in top, j in top
                if in_i and in_j:
                    if p_max == i:
                        p_max = j
                    elif p_max == j:
                        p_max = i
                elif in_i != in_j:
                    inside, outside = (i, j) if in_i else (j, i)
                    if inside == p_max:
                        top.discard(inside)
                        top.add(outside)
                        p_max = outside

        gained = frozenset(top) - top_before
        lost = top_before - frozenset(top)
        if gained or lost:
            if q.x > bps[-1].x:
                bps.append(q)
                labels.append(frozenset(top))
                deltas.append((gained, lost))
                changes += len(gained) + len(lost)
            else:
                labels[-1] = frozenset(top)
    global _LAST_STATS
    _LAST_STATS = stats
    return KOrderMap(tuple(bps), tuple(labels), tuple(deltas), changes, k)


def compute_rstar_info(terrain: Terrain, viewpoints: ViewpointSet,
                       eps: Optional[float] = None
                       ) -> Tuple[float, int, TerrainPoint]:
    """Minimum visibility range preserving the visibility map, with the
    attaining (viewpoint, terrain point) pair.

    Per Voronoi interval, the distance to the owner is convex on every edge,
    so the supremum sits at an interval endpoint or an interior vertex.
    """
    if eps is None:
        eps = get_epsilon()
    if len(viewpoints) == 0:
        raise NoViewpointsError("r* needs at least one viewpoint")
    vor = compute_vorvis(terrain, viewpoints, "euclidean", "both", eps)
    xs = terrain._xs_list
    ys = terrain._ys_list
    best = -1.0
    best_owner = -1
    best_point: Optional[TerrainPoint] = None
    for left, right, owner in vor.intervals():
        if owner is None:
            continue
        ox, oy = xs[owner], ys[owner]
        pts = [left, right]
        lo = bisect_right(xs, left.x)
        hi = bisect_left(xs, right.x)
        pts.extend(terrain.vertex_point(i) for i in range(lo, hi))
        for p in pts:
            d = hypot(p.x - ox, p.y - oy)
            if d > best:
                best, best_owner, best_point = d, owner, p
    return best, best_owner, best_point


def compute_rstar(terrain: Terrain, viewpoints: ViewpointSet,
                  eps: Optional[float] = None) -> float:
    value, _, _ = compute_rstar_info(terrain, viewpoints, eps)
    return value


_LAST_STATS: Optional[SweepStats] = None


def op_counters() -> dict:
    """Instrumentation snapshot of the most recent sweep in this process."""
    if _LAST_STATS is None:
        raise RuntimeError("no sweep has run yet")
    return _LAST_STATS.as_dict()
