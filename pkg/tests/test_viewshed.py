import pytest

from terravis.generators import InstanceSpec, gen_random_terrain
from terravis.geometry import make_viewpoints, point_at_x, sees_in_mode, validate_terrain
from terravis.intervals import maps_equal
from terravis.oracle import verify_against_oracle
from terravis.viewshed import compute_colvis, compute_vis, viewshed


def _spans(intervals):
    return [(s.x, e.x) for s, e in intervals]


class TestViewshed:
    def test_peak_base_sees_one_face(self, peak):
        assert _spans(viewshed(peak, 0)) == [(0.0, 5.0)]

    def test_apex_sees_everything(self, peak):
        assert _spans(viewshed(peak, 1)) == [(0.0, 10.0)]

    def test_left_mode_clips(self, flat):
        assert _spans(viewshed(flat, 1, "left")) == [(0.0, 4.0)]

    def test_right_mode_clips(self, flat):
        assert _spans(viewshed(flat, 1, "right")) == [(4.0, 10.0)]

    def test_leftmost_viewpoint_in_left_mode_is_a_point(self, flat):
        assert _spans(viewshed(flat, 0, "left")) == [(0.0, 0.0)]

    def test_two_peak_far_face_from_base(self, two_peak):
        # v0 sees its own face only; the far peak stays hidden
        assert _spans(viewshed(two_peak, 0)) == [(0.0, 1.0)]

    def test_matches_naive_visibility_at_samples(self):
        for seed in range(10):
            terrain, vps = gen_random_terrain(InstanceSpec(seed=seed, n=30, m=3))
            for v in vps:
                for mode in ("both", "left", "right"):
                    ivs = viewshed(terrain, v, mode)
                    for frac in range(1, 120):
                        x = terrain.x_min + frac * (terrain.x_max - terrain.x_min) / 120
                        q = point_at_x(terrain, x)
                        in_shed = any(s.x - 1e-9 <= x <= e.x + 1e-9 for s, e in ivs)
                        near_edge = any(abs(x - b) < 1e-6
                                        for s, e in ivs for b in (s.x, e.x))
                        if not near_edge:
                            assert in_shed == sees_in_mode(terrain, v, q, mode), \
                                (seed, v, mode, x)

    def test_intervals_are_maximal_and_sorted(self):
        terrain, vps = gen_random_terrain(InstanceSpec(seed=12, n=40, m=4))
        for v in vps:
            ivs = viewshed(terrain, v)
            xs = [x for s, e in ivs for x in (s.x, e.x)]
            assert xs == sorted(xs)
            for (_, e1), (s2, _) in zip(ivs, ivs[1:]):
                assert s2.x - e1.x > 1e-9  # gaps between maximal intervals


class TestComputeVis:
    def test_peak_fully_visible(self, peak):
        m = compute_vis(peak, make_viewpoints(peak, [0, 2]))
        assert m.labels == (True,)

    def test_two_peak_single_viewpoint(self, two_peak):
        m = compute_vis(two_peak, make_viewpoints(two_peak, [0]))
        assert m.labels == (True, False)
        assert m.breakpoints[1].x == pytest.approx(1.0)

    def test_empty_viewpoints(self, two_peak):
        m = compute_vis(two_peak, make_viewpoints(two_peak, []))
        assert m.labels == (False,)

    def test_equals_colvis_collapsed(self):
        for seed in range(15):
            terrain, vps = gen_random_terrain(InstanceSpec(seed=seed, n=25, m=4))
            vis = compute_vis(terrain, vps)
            colored = compute_colvis(terrain, vps)
            assert maps_equal(vis, colored.mapped(lambda s: bool(s)))

    def test_oracle_agreement(self):
        for seed in range(8):
            terrain, vps = gen_random_terrain(InstanceSpec(seed=seed, n=30, m=4))
            for mode in ("both", "left", "right"):
                m = compute_vis(terrain, vps, mode)
                assert verify_against_oracle(terrain, vps, m, "vis",
                                             mode=mode) == []


class TestComputeColvis:
    def test_flat_single_region(self, flat):
        m = compute_colvis(flat, make_viewpoints(flat, [1, 2]))
        assert m.labels == (frozenset({1, 2}),)
        assert m.deltas == ()

    def test_peak_delta_at_apex(self, peak):
        m = compute_colvis(peak, make_viewpoints(peak, [0, 2]))
        assert [p.x for p in m.breakpoints] == [0.0, 5.0, 10.0]
        assert m.labels == (frozenset({0}), frozenset({2}))
        assert m.deltas == ((frozenset({2}), frozenset({0})),)
        assert m.status_changes == 2

    def test_two_peak_matches_oracle(self, two_peak):
        vps = make_viewpoints(two_peak, [0, 4])
        m = compute_colvis(two_peak, vps)
        assert [p.x for p in m.breakpoints] == pytest.approx([0, 1, 3, 4])
        assert m.labels == (frozenset({0}), frozenset(), frozenset({4}))
        assert verify_against_oracle(two_peak, vps, m, "colvis") == []

    def test_directional_modes_against_oracle(self):
        for seed in range(8):
            terrain, vps = gen_random_terrain(InstanceSpec(seed=seed, n=28, m=5))
            for mode in ("left", "right"):
                m = compute_colvis(terrain, vps, mode)
                m.check_partition(terrain)
                assert verify_against_oracle(terrain, vps, m, "colvis",
                                             mode=mode) == []

    def test_leftmost_viewpoint_left_mode(self):
        # point-only visibility at the terrain start must not corrupt deltas
        terrain = validate_terrain([(0, 0), (4, 1), (6, 0.5), (10, 2)])
        vps = make_viewpoints(terrain, [0, 2])
        m = compute_colvis(terrain, vps, "left")
        m.check_partition(terrain)
        for gained, lost in m.deltas:
            assert not gained & lost
        assert verify_against_oracle(terrain, vps, m, "colvis", mode="left") == []
