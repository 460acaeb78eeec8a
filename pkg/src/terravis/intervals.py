"""Partitions of the terrain into labeled maximal intervals."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Any, Callable, FrozenSet, List, Optional, Sequence, Tuple

from .geometry import Terrain, TerrainPoint
from .tolerance import get_epsilon


@dataclass
class IntervalMap:
    """Breakpoints (leftmost..rightmost terrain point) and one label per gap.

    Intervals tile the terrain exactly and adjacent labels differ. Labels
    describe the open interval; a breakpoint itself belongs to the closures
    of both neighbors.
    """

    breakpoints: Tuple[TerrainPoint, ...]
    labels: Tuple[Any, ...]

    def __post_init__(self):
        if len(self.breakpoints) != len(self.labels) + 1:
            raise ValueError("breakpoint/label count mismatch")
        xs = [p.x for p in self.breakpoints]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints not strictly increasing")
        for a, b in zip(self.labels, self.labels[1:]):
            if a == b:
                raise ValueError("adjacent interval labels equal (map not maximal)")

    @property
    def breakpoint_xs(self) -> List[float]:
        return [p.x for p in self.breakpoints]

    def label_at(self, x: float) -> Any:
        """Label of the interval containing x (left interval at a breakpoint)."""
        xs = self.breakpoint_xs
        i = bisect_left(xs, x) - 1
        i = min(max(i, 0), len(self.labels) - 1)
        return self.labels[i]

    def intervals(self):
        for i, lab in enumerate(self.labels):
            yield self.breakpoints[i], self.breakpoints[i + 1], lab

    def interior_breakpoints(self) -> Tuple[TerrainPoint, ...]:
        return self.breakpoints[1:-1]

    def check_partition(self, terrain: Terrain, eps: Optional[float] = None) -> None:
        """Structural check: the intervals tile the terrain exactly."""
        if eps is None:
            eps = get_epsilon()
        if abs(self.breakpoints[0].x - terrain.x_min) > eps:
            raise ValueError("map does not start at the terrain's leftmost point")
        if abs(self.breakpoints[-1].x - terrain.x_max) > eps:
            raise ValueError("map does not end at the terrain's rightmost point")

    def mapped(self, fn: Callable[[Any], Any]) -> "IntervalMap":
        """Apply fn to every label and re-merge equal neighbors."""
        bps, labs = _remerge(self.breakpoints, [fn(l) for l in self.labels])
        return IntervalMap(bps, labs)


def _remerge(breakpoints: Sequence[TerrainPoint],
             labels: Sequence[Any]) -> Tuple[Tuple[TerrainPoint, ...], Tuple[Any, ...]]:
    bps: List[TerrainPoint] = [breakpoints[0]]
    labs: List[Any] = []
    for i, lab in enumerate(labels):
        if labs and lab == labs[-1]:
            bps[-1] = breakpoints[i + 1]
        else:
            labs.append(lab)
            bps.append(breakpoints[i + 1])
    return tuple(bps), tuple(labs)


def maps_equal(a: IntervalMap, b: IntervalMap, eps: Optional[float] = None,
               label_eq: Callable[[Any, Any], bool] = lambda x, y: x == y) -> bool:
    """Same breakpoint positions (within eps) and equal labels."""
    if eps is None:
        eps = get_epsilon()
    if len(a.labels) != len(b.labels):
        return False
    for pa, pb in zip(a.breakpoints, b.breakpoints):
        if abs(pa.x - pb.x) > eps:
            return False
    return all(label_eq(x, y) for x, y in zip(a.labels, b.labels))


@dataclass
class ColoredMap(IntervalMap):
    """Visible-viewpoint sets per interval plus per-breakpoint delta sets.

    ``deltas[i]`` = (gained, lost) at interior breakpoint i; replaying them
    from the first label reproduces every interval's visible set.
    """

    deltas: Tuple[Tuple[FrozenSet[int], FrozenSet[int]], ...] = ()
    status_changes: int = 0

    def __post_init__(self):
        super().__post_init__()
        if len(self.deltas) != len(self.labels) - 1:
            raise ValueError("one delta per interior breakpoint required")
        current = self.labels[0]
        for i, (gained, lost) in enumerate(self.deltas):
            if gained & lost:
                raise ValueError("a viewpoint gained and lost at one breakpoint")
            current = (current | gained) - lost
            if current != self.labels[i + 1]:
                raise ValueError("delta replay does not reproduce interval labels")


@dataclass
class KOrderMap(ColoredMap):
    """Sets of the k closest visible viewpoints per interval."""

    k: int = 1


@dataclass
class SweepStats:
    """Instrumentation for one map computation."""

    tree_ops: int = 0
    events_processed: int = 0
    ray_queries: int = 0

    def as_dict(self) -> dict:
        return {
            "tree_ops": self.tree_ops,
            "events_processed": self.events_processed,
            "ray_queries": self.ray_queries,
        }


@dataclass
class VoronoiMap(IntervalMap):
    """Owner viewpoint per interval; None marks invisible portions."""

    metric: str = "euclidean"
    mode: str = "both"
    stats: SweepStats = field(default_factory=SweepStats)

    def owner_at(self, x: float) -> Optional[int]:
        return self.label_at(x)
