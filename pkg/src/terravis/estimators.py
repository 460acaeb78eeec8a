"""Scikit-learn style estimators over the terrain visibility maps.

``fit(vertices, viewpoints)`` computes the requested map once; ``predict``
and ``transform`` then answer per-x-coordinate queries by interval lookup,
so the maps compose with ordinary sklearn pipelines and tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .geometry import (
    METRICS,
    MODES,
    Terrain,
    make_viewpoints,
    metric_distance,
    point_at_x,
    validate_terrain,
)
from .tolerance import get_epsilon
from .viewshed import compute_colvis, compute_vis
from .vorvis import compute_kvorvis, compute_rstar_info, compute_vorvis


def _check_positions(X, terrain: Terrain, eps: float) -> np.ndarray:
    xs = np.asarray(X, dtype=float)
    if xs.ndim == 2 and xs.shape[1] == 1:
        xs = xs[:, 0]
    if xs.ndim != 1:
        raise ValueError("X must be 1d x-coordinates or a single-column array")
    if not np.all(np.isfinite(xs)):
        raise ValueError("X contains non-finite values")
    if xs.size and (xs.min() < terrain.x_min - eps or xs.max() > terrain.x_max + eps):
        raise ValueError("x-coordinates outside the terrain's extent")
    return xs


class _TerrainEstimator(BaseEstimator):
    def _fit_inputs(self, X, viewpoints):
        self.terrain_ = X if isinstance(X, Terrain) else validate_terrain(X)
        self.viewpoints_ = make_viewpoints(self.terrain_, viewpoints)
        return self.terrain_, self.viewpoints_

    def _require_fitted(self):
        if not hasattr(self, "map_"):
            raise NotFittedError(
                f"{type(self).__name__} is not fitted yet; call fit first")

    def _lookup(self, X) -> list:
        self._require_fitted()
        xs = _check_positions(X, self.terrain_, get_epsilon())
        bxs = np.asarray(self.map_.breakpoint_xs)
        idx = np.clip(np.searchsorted(bxs, xs, side="left") - 1, 0,
                      len(self.map_.labels) - 1)
        return [self.map_.labels[i] for i in idx]

    def _indicator(self, labels) -> np.ndarray:
        cols = {v: c for c, v in enumerate(self.viewpoints_)}
        out = np.zeros((len(labels), len(cols)), dtype=bool)
        for r, lab in enumerate(labels):
            for v in lab:
                out[r, cols[v]] = True
        return out


class VisibilityEstimator(_TerrainEstimator):
    """Predicts whether terrain points are visible from any viewpoint."""

    def __init__(self, mode: str = "both"):
        self.mode = mode

    def fit(self, X, viewpoints):
        terrain, vps = self._fit_inputs(X, viewpoints)
        self.map_ = compute_vis(terrain, vps, self.mode)
        return self

    def predict(self, X) -> np.ndarray:
        return np.asarray(self._lookup(X), dtype=bool)


class ColoredVisibilityEstimator(_TerrainEstimator):
    """Predicts the set of viewpoints visible from each terrain point."""

    def __init__(self, mode: str = "both"):
        self.mode = mode

    def fit(self, X, viewpoints):
        terrain, vps = self._fit_inputs(X, viewpoints)
        self.map_ = compute_colvis(terrain, vps, self.mode)
        return self

    def predict(self, X) -> list:
        return self._lookup(X)

    def transform(self, X) -> np.ndarray:
        """Boolean indicator matrix (samples x viewpoints)."""
        return self._indicator(self._lookup(X))


class VoronoiVisibilityEstimator(_TerrainEstimator):
    """Predicts the closest visible viewpoint (or the order-k closest set).

    After fitting with the Euclidean metric in both-directions mode at order
    1, ``min_visibility_range_`` holds the smallest sight radius that leaves
    the visibility map unchanged.
    """

    def __init__(self, metric: str = "euclidean", mode: str = "both",
                 order: int = 1):
        self.metric = metric
        self.mode = mode
        self.order = order

    def fit(self, X, viewpoints):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        terrain, vps = self._fit_inputs(X, viewpoints)
        if self.order == 1:
            self.map_ = compute_vorvis(terrain, vps, self.metric, self.mode)
        else:
            self.map_ = compute_kvorvis(terrain, vps, self.order,
                                        self.metric, self.mode)
        if self.order == 1 and self.metric == "euclidean" and self.mode == "both":
            r, owner, point = compute_rstar_info(terrain, vps)
            self.min_visibility_range_ = r
        return self

    def predict(self, X) -> np.ndarray:
        """Owner vertex index per query point; -1 where nothing is visible.

        At order > 1 the owner is still the single closest visible viewpoint
        (the first element of the order-k set).
        """
        labels = self._lookup(X)
        if self.order == 1:
            return np.asarray([-1 if lab is None else lab for lab in labels])
        xs = _check_positions(X, self.terrain_, get_epsilon())
        out = np.full(len(labels), -1)
        for i, (x, lab) in enumerate(zip(xs, labels)):
            if lab:
                q = point_at_x(self.terrain_, float(x))
                out[i] = min(lab, key=lambda v: (metric_distance(
                    self.terrain_, self.metric, self.terrain_.vertex_point(v), q), v))
        return out

    def transform(self, X) -> np.ndarray:
        """Indicator matrix of the order-k set (one-hot owners at order 1)."""
        labels = self._lookup(X)
        if self.order == 1:
            labels = [frozenset() if lab is None else frozenset([lab])
                      for lab in labels]
        return self._indicator(labels)
