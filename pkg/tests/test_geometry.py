import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from terravis.errors import NonMonotoneError, OutOfRangeError, TooShortError
from terravis.generators import InstanceSpec, gen_random_terrain
from terravis.geometry import (
    bisector_crossings,
    check_general_position,
    first_crossing_outward,
    make_viewpoints,
    metric_distance,
    point_at_x,
    ray_first_hit,
    sees,
    sees_in_mode,
    validate_terrain,
)

SQ50 = math.sqrt(50.0)


class TestValidateTerrain:
    def test_flat_cum_len(self, flat):
        assert flat.cum_len.tolist() == [0, 4, 6, 10]

    def test_peak_cum_len(self, peak):
        assert peak.cum_len == pytest.approx([0.0, SQ50, 2 * SQ50])

    def test_vertical_edge_rejected(self):
        with pytest.raises(NonMonotoneError) as err:
            validate_terrain([(0, 0), (0, 5)])
        assert err.value.index == 0

    def test_decreasing_x_rejected(self):
        with pytest.raises(NonMonotoneError) as err:
            validate_terrain([(0, 0), (2, 1), (1, 3)])
        assert err.value.index == 1

    def test_too_short(self):
        with pytest.raises(TooShortError):
            validate_terrain([(0, 0)])


class TestPointAtX:
    def test_flat_midpoint(self, flat):
        p = point_at_x(flat, 5.0)
        assert (p.edge, p.x, p.y) == (1, 5.0, 0.0)

    def test_peak_apex_canonical_edge(self, peak):
        p = point_at_x(peak, 5.0)
        assert (p.edge, p.x, p.y) == (0, 5.0, 5.0)

    def test_peak_interpolation(self, peak):
        p = point_at_x(peak, 2.5)
        assert (p.edge, p.x, p.y) == (0, 2.5, 2.5)

    def test_out_of_range(self, peak):
        with pytest.raises(OutOfRangeError):
            point_at_x(peak, 10.5)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10 ** 6), st.floats(0.0, 1.0))
    def test_roundtrip_identity(self, seed, frac):
        terrain, _ = gen_random_terrain(InstanceSpec(seed=seed, n=12, m=2))
        x = terrain.x_min + frac * (terrain.x_max - terrain.x_min)
        p = point_at_x(terrain, x)
        assert p.x == pytest.approx(x, abs=1e-9)
        assert p.y == pytest.approx(point_at_x(terrain, p.x).y, abs=1e-9)


def _sees_dense(terrain, a, b, steps=600):
    """Independent check: sample the segment and compare elevations."""
    worst = -math.inf
    for t in np.linspace(0.0, 1.0, steps):
        x = a.x + t * (b.x - a.x)
        y = a.y + t * (b.y - a.y)
        worst = max(worst, point_at_x(terrain, x).y - y)
    return worst


class TestSees:
    def test_shared_edge(self, peak):
        assert sees(peak, peak.vertex_point(0), peak.vertex_point(1))

    def test_blocked_by_apex(self, peak):
        assert not sees(peak, peak.vertex_point(0), peak.vertex_point(2))

    def test_grazing_counts_as_visible(self, flat):
        assert sees(flat, flat.vertex_point(0), flat.vertex_point(3))

    def test_symmetry_and_dense_agreement(self):
        rng = np.random.default_rng(7)
        checked = 0
        for seed in range(12):
            terrain, _ = gen_random_terrain(InstanceSpec(seed=seed, n=18, m=2))
            for _ in range(25):
                xa, xb = sorted(rng.uniform(terrain.x_min, terrain.x_max, 2))
                a, b = point_at_x(terrain, xa), point_at_x(terrain, xb)
                got = sees(terrain, a, b)
                assert got == sees(terrain, b, a)
                margin = _sees_dense(terrain, a, b)
                if abs(margin) > 1e-6:  # skip numerically marginal pairs
                    assert got == (margin <= 0)
                    checked += 1
        assert checked > 200

    def test_same_edge_points_always_see(self):
        terrain, _ = gen_random_terrain(InstanceSpec(seed=3, n=15, m=2))
        for e in range(terrain.n - 1):
            x0, x1 = terrain._xs_list[e], terrain._xs_list[e + 1]
            a = terrain.point_on_edge(e, x0 + 0.25 * (x1 - x0))
            b = terrain.point_on_edge(e, x0 + 0.9 * (x1 - x0))
            assert sees(terrain, a, b)

    def test_mode_restriction(self, flat):
        q_left = point_at_x(flat, 2.0)
        q_right = point_at_x(flat, 8.0)
        assert sees_in_mode(flat, 1, q_left, "left")
        assert not sees_in_mode(flat, 1, q_right, "left")
        assert sees_in_mode(flat, 1, q_right, "right")
        assert not sees_in_mode(flat, 1, q_left, "right")
        assert sees_in_mode(flat, 1, flat.vertex_point(1), "left")
        assert sees_in_mode(flat, 1, flat.vertex_point(1), "right")


class TestOrderClaim:
    def test_quadruple_property(self):
        """a<b<c<d with a~c and b~d implies a~d (spot check; bulk run in
        the acceptance suite)."""
        rng = np.random.default_rng(11)
        violations = 0
        for seed in range(20):
            terrain, _ = gen_random_terrain(InstanceSpec(seed=seed, n=25, m=2))
            for _ in range(100):
                xs = np.sort(rng.uniform(terrain.x_min, terrain.x_max, 4))
                a, b, c, d = (point_at_x(terrain, x) for x in xs)
                if sees(terrain, a, c) and sees(terrain, b, d):
                    if not sees(terrain, a, d):
                        violations += 1
        assert violations == 0


class TestRayFirstHit:
    def test_grazes_apex_and_escapes(self, peak):
        assert ray_first_hit(peak, (0, 0), (5, 5), "right") is None

    def test_hits_far_face(self, peak):
        hit = ray_first_hit(peak, (0, 0), (2.5, 2.0), "right")
        assert hit is not None
        assert hit.x == pytest.approx(50.0 / 9.0, abs=1e-9)
        assert hit.y == pytest.approx(0.8 * 50.0 / 9.0, abs=1e-9)

    def test_grazing_along_flat_terrain(self, flat):
        assert ray_first_hit(flat, (4, 0), (6, 0), "right") is None

    def test_left_side_mirror(self, peak):
        hit = ray_first_hit(peak, (10, 0), (7.5, 2.0), "left")
        assert hit is not None
        assert hit.x == pytest.approx(10 - 50.0 / 9.0, abs=1e-9)

    def test_hit_lies_on_ray_and_terrain(self):
        for seed in range(10):
            terrain, _ = gen_random_terrain(InstanceSpec(seed=seed, n=20, m=2))
            origin = (terrain.x_min, float(terrain.ys.max()) + 1.0)
            through = point_at_x(terrain, terrain.x_min
                                 + 0.3 * (terrain.x_max - terrain.x_min))
            hit = ray_first_hit(terrain, origin, (through.x, through.y), "right")
            if hit is None:
                continue
            slope = (through.y - origin[1]) / (through.x - origin[0])
            ray_y = origin[1] + slope * (hit.x - origin[0])
            assert ray_y == pytest.approx(hit.y, abs=1e-6)
            assert point_at_x(terrain, hit.x).y == pytest.approx(hit.y, abs=1e-9)


class TestMetricDistance:
    def test_flat_one_edge(self, flat):
        a, b = flat.vertex_point(1), flat.vertex_point(2)
        assert metric_distance(flat, "euclidean", a, b) == pytest.approx(2.0)
        assert metric_distance(flat, "geodesic", a, b) == pytest.approx(2.0)
        assert metric_distance(flat, "link", a, b) == 0

    def test_peak_endpoints(self, peak):
        a, b = peak.vertex_point(0), peak.vertex_point(2)
        assert metric_distance(peak, "euclidean", a, b) == pytest.approx(10.0)
        assert metric_distance(peak, "geodesic", a, b) == pytest.approx(2 * SQ50)
        assert metric_distance(peak, "link", a, b) == 1

    def test_link_parity(self):
        terrain = validate_terrain([(0, 0), (1, 0.5), (2, 0), (3, 0.5), (4, 0)])
        assert metric_distance(terrain, "link", terrain.vertex_point(1),
                               terrain.vertex_point(3)) == 1

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6), st.floats(0, 1), st.floats(0, 1))
    def test_symmetry_and_identity(self, seed, fa, fb):
        terrain, _ = gen_random_terrain(InstanceSpec(seed=seed, n=10, m=2))
        span = terrain.x_max - terrain.x_min
        a = point_at_x(terrain, terrain.x_min + fa * span)
        b = point_at_x(terrain, terrain.x_min + fb * span)
        for metric in ("euclidean", "geodesic", "link"):
            dab = metric_distance(terrain, metric, a, b)
            assert dab == pytest.approx(metric_distance(terrain, metric, b, a))
            assert metric_distance(terrain, metric, a, a) == 0


class TestGeneralPosition:
    def test_flat_collinear(self, flat):
        report = check_general_position(flat, make_viewpoints(flat, [1, 2]))
        assert report.collinear_triples
        assert not report.is_clean()

    def test_peak_clean(self, peak):
        report = check_general_position(peak, make_viewpoints(peak, [0, 2]))
        assert report.is_clean()

    def test_triple_equidistant_detected(self):
        # (5, -7.5) is the terrain point equidistant from all three viewpoints:
        # d = sqrt(81.25) to each of v0, v1, v4
        terrain = validate_terrain([(0, 0), (2, 1), (5, -7.5), (8, 1), (10, 0)])
        viewpoints = make_viewpoints(terrain, [0, 1, 4])
        report = check_general_position(terrain, viewpoints)
        assert report.triple_equidistant
        point, i, j, k = report.triple_equidistant[0]
        assert point.x == pytest.approx(5.0, abs=1e-6)
        assert (i, j, k) == (0, 1, 4)
        # dense sampling confirms a common equidistant point exists
        d = [math.hypot(point.x - terrain._xs_list[v], point.y - terrain._ys_list[v])
             for v in (0, 1, 4)]
        assert max(d) - min(d) < 1e-9

    def test_edge_on_bisector(self):
        # edge (1.5,2)-(2.5,0) lies on 2x + y = 5, the bisector of (0,0),(4,2)
        terrain = validate_terrain([(0, 0), (1.5, 2), (2.5, 0), (4, 2)])
        viewpoints = make_viewpoints(terrain, [0, 3])
        report = check_general_position(terrain, viewpoints)
        assert any(e == 1 for e, _, _ in report.edge_on_bisector)

    def test_random_instances_mostly_clean(self):
        clean = sum(
            check_general_position(*gen_random_terrain(
                InstanceSpec(seed=s, n=16, m=4))).is_clean()
            for s in range(100))
        assert clean >= 90


class TestBisectorCrossings:
    def test_fast_scan_matches_full_enumeration(self):
        for seed in range(30):
            terrain, vp = gen_random_terrain(InstanceSpec(seed=seed, n=30, m=4))
            idx = list(vp)
            for a in range(len(idx)):
                for b in range(a + 1, len(idx)):
                    i, j = idx[a], idx[b]
                    pi = (terrain._xs_list[i], terrain._ys_list[i])
                    pj = (terrain._xs_list[j], terrain._ys_list[j])
                    if abs(pi[1] - pj[1]) < 1e-9:
                        continue
                    low, lo, hi = (i, pi, pj) if pi[1] < pj[1] else (j, pj, pi)
                    crossings = bisector_crossings(terrain, lo, hi)
                    x_low = terrain._xs_list[low]
                    lefts = [c for c in crossings if c.point.x < x_low]
                    rights = [c for c in crossings if c.point.x > x_low]
                    scan_l = first_crossing_outward(terrain, lo, hi, low, "left")
                    scan_r = first_crossing_outward(terrain, lo, hi, low, "right")
                    if lefts:
                        assert scan_l is not None
                        assert scan_l.point.x == pytest.approx(lefts[-1].point.x)
                    else:
                        assert scan_l is None
                    if rights:
                        assert scan_r is not None
                        assert scan_r.point.x == pytest.approx(rights[0].point.x)
                    else:
                        assert scan_r is None

    def test_crossings_are_equidistant(self):
        terrain, vp = gen_random_terrain(InstanceSpec(seed=5, n=25, m=3))
        idx = list(vp)
        pi = (terrain._xs_list[idx[0]], terrain._ys_list[idx[0]])
        pj = (terrain._xs_list[idx[1]], terrain._ys_list[idx[1]])
        for c in bisector_crossings(terrain, pi, pj):
            da = math.hypot(c.point.x - pi[0], c.point.y - pi[1])
            db = math.hypot(c.point.x - pj[0], c.point.y - pj[1])
            assert da == pytest.approx(db, rel=1e-6, abs=1e-6)
