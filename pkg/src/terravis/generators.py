"""Instance generators: seeded random terrains and the worst-case gap family.

The gap family realizes k_v = k_c + 2m - 2: m viewpoints stacked on a steep
convex wall all see one convex basin bounded by blocking crests, so the
colored map has exactly three regions while the Voronoi map cuts the visible
portion into 2m - 1 pieces (owner changes once per consecutive-pair bisector
on the wall and once more on the far slope).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ConstructionFailedError, InvalidViewpointError
from .geometry import Terrain, ViewpointSet, make_viewpoints, validate_terrain
from .oracle import count_complexities
from .viewshed import compute_colvis
from .vorvis import compute_vorvis


@dataclass(frozen=True)
class InstanceSpec:
    """Parameters for one seeded random instance."""

    seed: int = 0
    n: int = 20
    m: int = 3
    height_range: Tuple[float, float] = (0.0, 10.0)
    step_range: Tuple[float, float] = (0.5, 1.5)


def gen_random_terrain(spec: InstanceSpec) -> Tuple[Terrain, ViewpointSet]:
    """Deterministic random instance: jittered x steps, uniform heights."""
    if spec.m >= spec.n:
        raise InvalidViewpointError(f"need m < n, got m={spec.m}, n={spec.n}")
    rng = np.random.default_rng(spec.seed)
    steps = rng.uniform(spec.step_range[0], spec.step_range[1], spec.n - 1)
    xs = np.concatenate(([0.0], np.cumsum(steps)))
    ys = rng.uniform(spec.height_range[0], spec.height_range[1], spec.n)
    terrain = validate_terrain(np.column_stack([xs, ys]))
    vp_idx = sorted(int(v) for v in rng.choice(spec.n, size=spec.m, replace=False))
    return terrain, make_viewpoints(terrain, vp_idx)


def fig4b_vertices(m: int) -> Tuple[list, list]:
    """Coordinates and viewpoint indices for the 2m-2 gap construction."""
    h = 10.0
    c = 0.01      # wall x-step base: near-vertical wall
    gamma = 1e-4  # convex jitter keeping wall vertices off a common line
    steep = 1000.0

    y_crest = (m + 1) * h
    wall = []
    for t in range(1, m + 1):  # p_m (highest) .. p_1 (lowest), left to right
        wall.append((c * t + gamma * t * t, (m - t + 1) * h))
    x_p1 = wall[-1][0]
    basin = (x_p1 + 0.05, 0.4 * h)
    y_top = (m - 0.25) * h
    slope_face = 0.25
    x_top = basin[0] + (y_top - basin[1]) / slope_face

    vertices = [(-y_crest / steep, 0.0), (0.0, y_crest)]
    vertices.extend(wall)
    vertices.append(basin)
    vertices.append((x_top, y_top))
    vertices.append((x_top + y_top / steep, 0.0))
    viewpoint_indices = list(range(2, m + 2))
    return vertices, viewpoint_indices


def gen_fig4b(m: int, eps: Optional[float] = None) -> Tuple[Terrain, ViewpointSet]:
    """Instance with k_v - k_c = 2m - 2, self-verified before being returned."""
    if m < 2:
        raise ConstructionFailedError("gap construction needs m >= 2")
    vertices, vp_idx = fig4b_vertices(m)
    terrain = validate_terrain(vertices)
    viewpoints = make_viewpoints(terrain, vp_idx)

    colored = compute_colvis(terrain, viewpoints, "both", eps)
    if len(colored.labels) != 3:
        raise ConstructionFailedError(
            f"expected 3 colored regions, got {len(colored.labels)}")
    full = frozenset(viewpoints)
    if colored.labels[0] or colored.labels[2] or colored.labels[1] != full:
        raise ConstructionFailedError("colored regions are not empty/all/empty")

    vor = compute_vorvis(terrain, viewpoints, "euclidean", "both", eps)
    visible_parts = sum(1 for lab in vor.labels if lab is not None)
    if visible_parts != 2 * m - 1:
        raise ConstructionFailedError(
            f"expected {2 * m - 1} visible Voronoi parts, got {visible_parts}")

    counts = count_complexities(terrain, viewpoints, eps)
    if counts.k_v - counts.k_c != 2 * m - 2:
        raise ConstructionFailedError(
            f"expected k_v - k_c = {2 * m - 2}, got {counts.k_v - counts.k_c}")
    return terrain, viewpoints
