import numpy as np
import pytest

from terravis.errors import ConstructionFailedError, InvalidViewpointError
from terravis.generators import InstanceSpec, gen_fig4b, gen_random_terrain
from terravis.geometry import check_general_position, make_viewpoints
from terravis.intervals import IntervalMap
from terravis.oracle import (
    ComplexityCounts,
    check_theorem_bound,
    compare_map_to_oracle,
    count_complexities,
    oracle_map,
    probe_xs,
    verify_against_oracle,
)
from terravis.viewshed import compute_colvis
from terravis.vorvis import candidate_type3_events, compute_vorvis


class TestOracleMap:
    def test_flat_owner_flip_at_five(self, flat):
        vps = make_viewpoints(flat, [1, 2])
        labeling = oracle_map(flat, vps, samples_per_edge=10)
        owners = [(s.point.x, s.by_distance[0]) for s in labeling.samples]
        before = [o for x, o in owners if x < 5.0]
        after = [o for x, o in owners if x > 5.0]
        assert set(before) == {1} and set(after) == {2}

    def test_peak_visible_sets_flip_at_apex(self, peak):
        vps = make_viewpoints(peak, [0, 2])
        labeling = oracle_map(peak, vps, samples_per_edge=10)
        for s in labeling.samples:
            assert s.visible == ((0,) if s.point.x < 5 else (2,))

    def test_compare_detects_swapped_owners(self, flat):
        vps = make_viewpoints(flat, [1, 2])
        vor = compute_vorvis(flat, vps)
        labeling = oracle_map(flat, vps)
        assert compare_map_to_oracle(vor, labeling, "vorvis") == []
        swapped = IntervalMap(vor.breakpoints, (2, 1))
        mismatches = compare_map_to_oracle(swapped, labeling, "vorvis")
        assert len(mismatches) == len(labeling.samples)

    def test_probe_positions_avoid_neighbor_intervals(self, peak):
        vps = make_viewpoints(peak, [0, 2])
        vor = compute_vorvis(peak, vps)
        xs = probe_xs(peak, vor)
        assert any(x < 5 < x + 0.002 for x in xs)
        assert all(peak.x_min <= x <= peak.x_max for x in xs)


class TestComplexityCounts:
    def test_flat(self, flat):
        c = count_complexities(flat, make_viewpoints(flat, [1, 2]))
        assert (c.n, c.m, c.k_c, c.k_v) == (4, 2, 4, 5)

    def test_peak(self, peak):
        c = count_complexities(peak, make_viewpoints(peak, [0, 2]))
        assert (c.n, c.m, c.k_c, c.k_v) == (3, 2, 4, 4)

    def test_bound_examples(self):
        assert check_theorem_bound(ComplexityCounts(4, 2, 4, 5))
        assert not check_theorem_bound(ComplexityCounts(4, 2, 4, 100))

    def test_bound_on_random_batch(self):
        for seed in range(60):
            terrain, vps = gen_random_terrain(
                InstanceSpec(seed=seed, n=12 + seed % 40, m=2 + seed % 7))
            assert check_theorem_bound(count_complexities(terrain, vps)), seed


class TestRandomGenerator:
    def test_seed_stability(self):
        spec = InstanceSpec(seed=123, n=30, m=5)
        t1, p1 = gen_random_terrain(spec)
        t2, p2 = gen_random_terrain(spec)
        assert np.array_equal(t1.xs, t2.xs) and np.array_equal(t1.ys, t2.ys)
        assert tuple(p1) == tuple(p2)

    def test_sizes_respected(self):
        terrain, vps = gen_random_terrain(InstanceSpec(seed=9, n=47, m=6))
        assert terrain.n == 47 and len(vps) == 6

    def test_m_must_be_below_n(self):
        with pytest.raises(InvalidViewpointError):
            gen_random_terrain(InstanceSpec(seed=1, n=4, m=5))

    def test_general_position_rate(self):
        clean = sum(
            check_general_position(*gen_random_terrain(
                InstanceSpec(seed=s, n=20, m=4))).is_clean()
            for s in range(1000))
        assert clean >= 900


class TestFig4b:
    @pytest.mark.parametrize("m", [2, 3, 5, 8])
    def test_construction_verifies(self, m):
        terrain, vps = gen_fig4b(m)
        assert len(vps) == m
        colored = compute_colvis(terrain, vps)
        assert len(colored.labels) == 3
        vor = compute_vorvis(terrain, vps)
        assert sum(1 for lab in vor.labels if lab is not None) == 2 * m - 1
        c = count_complexities(terrain, vps)
        assert c.k_v - c.k_c == 2 * m - 2

    def test_oracle_agreement(self):
        terrain, vps = gen_fig4b(4)
        vor = compute_vorvis(terrain, vps)
        assert verify_against_oracle(terrain, vps, vor, "vorvis") == []

    def test_too_small_m_fails(self):
        with pytest.raises(ConstructionFailedError):
            gen_fig4b(1)


class TestDirectionalDecomposition:
    def test_both_breakpoints_explained_by_directional_maps(self):
        """Every both-mode Voronoi breakpoint is a directional-map breakpoint
        or a single bisector crossing of the shared portion."""
        for seed in range(15):
            terrain, vps = gen_random_terrain(InstanceSpec(seed=seed, n=25, m=4))
            both = compute_vorvis(terrain, vps, "euclidean", "both")
            explained = set()
            for mode in ("left", "right"):
                dmap = compute_vorvis(terrain, vps, "euclidean", mode)
                explained.update(round(p.x, 7) for p in dmap.interior_breakpoints())
            idx = list(vps)
            for a in range(len(idx)):
                for b in range(a + 1, len(idx)):
                    for q in candidate_type3_events(terrain, idx[a], idx[b]):
                        explained.add(round(q.x, 7))
            for p in both.interior_breakpoints():
                assert round(p.x, 7) in explained, (seed, p.x)
