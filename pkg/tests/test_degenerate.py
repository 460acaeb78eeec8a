"""Degenerate and tie-heavy instances: the documented tie-breaks must keep
the maps deterministic and oracle-consistent even where general position
fails."""

import numpy as np
import pytest

from terravis.generators import InstanceSpec, gen_random_terrain
from terravis.geometry import make_viewpoints, validate_terrain
from terravis.intervals import maps_equal
from terravis.oracle import verify_against_oracle
from terravis.viewshed import compute_colvis, compute_vis
from terravis.vorvis import compute_kvorvis, compute_rstar, compute_vorvis


def _quantized_instance(seed, n=24, m=5, levels=4):
    """Heights drawn from a tiny set: many equal-height viewpoint pairs,
    collinear triples, and exact distance ties."""
    rng = np.random.default_rng(seed)
    xs = np.concatenate(([0.0], np.cumsum(rng.integers(1, 4, n - 1).astype(float))))
    ys = rng.integers(0, levels, n).astype(float)
    terrain = validate_terrain(np.column_stack([xs, ys]))
    vp = sorted(int(v) for v in rng.choice(n, size=m, replace=False))
    return terrain, make_viewpoints(terrain, vp)


class TestQuantizedHeights:
    def test_vorvis_oracle_all_metrics(self):
        for seed in range(25):
            terrain, vps = _quantized_instance(seed)
            for metric in ("euclidean", "geodesic", "link"):
                vor = compute_vorvis(terrain, vps, metric)
                vor.check_partition(terrain)
                assert verify_against_oracle(
                    terrain, vps, vor, "vorvis", metric) == [], (seed, metric)

    def test_directional_modes(self):
        for seed in range(15):
            terrain, vps = _quantized_instance(seed)
            for mode in ("left", "right"):
                vor = compute_vorvis(terrain, vps, "euclidean", mode)
                assert verify_against_oracle(
                    terrain, vps, vor, "vorvis", mode=mode) == [], (seed, mode)

    def test_korder_consistency(self):
        for seed in range(15):
            terrain, vps = _quantized_instance(seed)
            m = len(vps)
            km = compute_kvorvis(terrain, vps, m)
            colored = compute_colvis(terrain, vps)
            assert maps_equal(km.mapped(lambda s: s), colored.mapped(lambda s: s))
            for k in (1, 2):
                kk = compute_kvorvis(terrain, vps, k)
                assert verify_against_oracle(
                    terrain, vps, kk, "kvorvis", k=k) == [], (seed, k)


class TestPlateaus:
    def test_flat_plateau_everything_ties(self):
        terrain = validate_terrain([(i, 0.0) for i in range(8)])
        vps = make_viewpoints(terrain, [1, 3, 6])
        for metric in ("euclidean", "geodesic", "link"):
            vor = compute_vorvis(terrain, vps, metric)
            assert verify_against_oracle(terrain, vps, vor, "vorvis", metric) == []
        assert compute_vis(terrain, vps).labels == (True,)

    def test_stepped_plateaus(self):
        terrain = validate_terrain(
            [(0, 1), (2, 1), (3, 0), (5, 0), (6, 2), (8, 2), (9, 0), (11, 0)])
        vps = make_viewpoints(terrain, [0, 4, 7])
        for metric in ("euclidean", "geodesic", "link"):
            vor = compute_vorvis(terrain, vps, metric)
            assert verify_against_oracle(terrain, vps, vor, "vorvis", metric) == []

    def test_rstar_on_plateau(self):
        terrain = validate_terrain([(i, 0.0) for i in range(8)])
        vps = make_viewpoints(terrain, [2, 5])
        # cells split at x=3.5; far corners decide
        assert compute_rstar(terrain, vps) == pytest.approx(2.0)


class TestMinimalInstances:
    def test_two_vertex_terrain(self):
        terrain = validate_terrain([(0, 0), (1, 1)])
        vps = make_viewpoints(terrain, [0])
        vor = compute_vorvis(terrain, vps)
        assert vor.labels == (0,)
        assert compute_rstar(terrain, vps) == pytest.approx(np.sqrt(2.0))

    def test_adjacent_viewpoints(self):
        terrain = validate_terrain([(0, 0), (1, 3), (2, 0)])
        vps = make_viewpoints(terrain, [0, 1])
        for metric in ("euclidean", "geodesic", "link"):
            vor = compute_vorvis(terrain, vps, metric)
            assert verify_against_oracle(terrain, vps, vor, "vorvis", metric) == []

    def test_all_vertices_are_viewpoints_but_one(self):
        terrain, _ = gen_random_terrain(InstanceSpec(seed=8, n=9, m=2))
        vps = make_viewpoints(terrain, list(range(8)))
        for metric in ("euclidean", "geodesic", "link"):
            vor = compute_vorvis(terrain, vps, metric)
            assert verify_against_oracle(terrain, vps, vor, "vorvis", metric) == []
        km = compute_kvorvis(terrain, vps, 8)
        colored = compute_colvis(terrain, vps)
        assert maps_equal(km.mapped(lambda s: s), colored.mapped(lambda s: s))


class TestEndpointViewpoints:
    def test_terrain_end_viewpoints_directional(self):
        for seed in range(10):
            terrain, _ = gen_random_terrain(InstanceSpec(seed=seed, n=20, m=2))
            vps = make_viewpoints(terrain, [0, terrain.n - 1])
            for mode in ("left", "right"):
                vor = compute_vorvis(terrain, vps, "euclidean", mode)
                vor.check_partition(terrain)
                assert verify_against_oracle(
                    terrain, vps, vor, "vorvis", mode=mode) == [], (seed, mode)
                colored = compute_colvis(terrain, vps, mode)
                assert verify_against_oracle(
                    terrain, vps, colored, "colvis", mode=mode) == []
