import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsesel.core import (UNBOUNDED, CoarseMap, DomainError, GroupScale, MetricScale, ball,
                            compose_scales, hausdorff_distance, hyper_close, hyperpoint,
                            invert_scale, is_large, is_selector, modulus_estimate,
                            modulus_profile, point_modulus, scale_contains, transfer_selector)
from coarsesel.graphs import make_interval, make_line
from coarsesel.groups import GroupWindow, IntLine, sum_z2_tower
from coarsesel.selectors import max_selector, min_selector

Z = IntLine()


def dist(x, y):
    return abs(x - y)


def zscale(*elems):
    return GroupScale(Z, frozenset(elems))


class TestScales:
    def test_metric_radius_nonnegative(self):
        with pytest.raises(ValueError):
            MetricScale(-1)

    def test_group_scale_adjoins_identity(self):
        assert 0 in zscale(3)

    def test_compose_integer_scales(self):
        assert compose_scales(zscale(0, 1), zscale(0, -1)).elements == {-1, 0, 1}

    def test_compose_with_identity_is_neutral(self):
        F = zscale(-2, 0, 5)
        assert compose_scales(F, zscale(0)) == F

    def test_compose_metric_adds(self):
        assert compose_scales(MetricScale(2), MetricScale(3)) == MetricScale(5)

    def test_compose_mixed_raises(self):
        with pytest.raises(TypeError):
            compose_scales(MetricScale(1), zscale(1))

    def test_invert(self):
        assert invert_scale(zscale(0, 1)).elements == {0, -1}
        sym = GroupScale.symmetric(Z, [2])
        assert invert_scale(sym) == sym and sym.is_symmetric

    def test_scale_contains(self):
        assert scale_contains(MetricScale(3), MetricScale(2))
        assert not scale_contains(zscale(1), zscale(2))


class TestBalls:
    def test_metric_ball_on_line(self):
        assert ball(make_line(10), 0, MetricScale(2)) == {-2, -1, 0, 1, 2}

    def test_group_ball_is_translate(self):
        W = GroupWindow(Z, range(-10, 11))
        assert ball(W, 5, zscale(-1, 0, 1)) == {4, 5, 6}

    def test_tower_ball_is_subgroup(self):
        t = sum_z2_tower(4)
        assert ball(t.window(), 0, t.level_scale(2)) == {0, 1, 2, 3}

    def test_identity_scale_is_singleton(self):
        W = GroupWindow(Z, range(-3, 4))
        assert ball(W, 2, zscale(0)) == {2}

    def test_outside_window(self):
        with pytest.raises(DomainError):
            ball(make_line(3), 7, MetricScale(1))


class TestHausdorff:
    def test_examples(self):
        assert hausdorff_distance({0}, {0, 3}, dist) == 3
        assert hausdorff_distance({0, 5}, {1, 4}, dist) == 1
        assert hausdorff_distance({2, 9}, {2, 9}, dist) == 0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            hausdorff_distance(set(), {1}, dist)
        with pytest.raises(ValueError):
            hyperpoint([])

    @given(st.sets(st.integers(-20, 20), min_size=1, max_size=6),
           st.sets(st.integers(-20, 20), min_size=1, max_size=6),
           st.sets(st.integers(-20, 20), min_size=1, max_size=6))
    def test_metric_axioms(self, A, B, C):
        dab = hausdorff_distance(A, B, dist)
        assert dab == hausdorff_distance(B, A, dist)
        assert (dab == 0) == (A == B)
        assert dab <= hausdorff_distance(A, C, dist) + hausdorff_distance(C, B, dist)


class TestHyperClose:
    def test_reflexive(self):
        g = make_line(10)
        assert hyper_close(g, {0, 2}, {0, 2}, MetricScale(0))

    def test_far_points(self):
        assert not hyper_close(make_line(10), {0}, {3}, MetricScale(2))

    def test_unsafe_raises(self):
        with pytest.raises(DomainError):
            hyper_close(make_line(10), {9}, {8}, MetricScale(3))

    def test_matches_hausdorff_on_seven_points(self):
        g = make_interval(0, 6)
        subsets = [frozenset(c) for k in range(1, 8) for c in itertools.combinations(range(7), k)]
        for r in range(4):
            s = MetricScale(r)
            for A, B in itertools.product(subsets, repeat=2):
                assert hyper_close(g, A, B, s) == (hausdorff_distance(A, B, dist) <= r)


class TestLargeAndSelectors:
    def test_large(self):
        g = make_line(10, margin=0)
        assert is_large(g, range(-10, 11, 2), MetricScale(1))
        assert is_large(g, g.points, MetricScale(0))
        assert not is_large(g, {0}, MetricScale(3))

    def test_is_selector(self):
        fam = [frozenset(c) for c in itertools.combinations(range(-3, 4), 2)]
        assert is_selector(max_selector, fam)
        assert not is_selector(lambda A: min(A) - 1, fam)


def all_subsets(points):
    pts = list(points)
    return [frozenset(c) for k in range(1, len(pts) + 1) for c in itertools.combinations(pts, k)]


class TestModulus:
    def test_max_selector_modulus_one(self):
        g = make_interval(-5, 5)
        f = CoarseMap(max_selector, g, g)
        assert modulus_estimate(f, all_subsets(g.points), MetricScale(1)) == MetricScale(1)

    def test_constant_map(self):
        g = make_interval(0, 5)
        f = CoarseMap(lambda A: 0, g, g)
        assert modulus_estimate(f, all_subsets(range(4)), MetricScale(2)) == MetricScale(0)

    def test_unbounded_sentinel(self):
        g = make_interval(0, 7)
        f = CoarseMap(max_selector, g, g)
        assert modulus_estimate(f, all_subsets(range(8)), MetricScale(2), MetricScale(1)) is UNBOUNDED
        assert repr(UNBOUNDED) == "unbounded on window" and not UNBOUNDED

    def test_bitmask_paths_agree(self):
        # 70 points forces the big-integer path; compare with a direct Hausdorff scan
        g = make_interval(0, 69)
        rng = random.Random(3)
        fam = list({frozenset(rng.sample(range(70), rng.randint(1, 4))) for _ in range(150)})
        f = CoarseMap(min_selector, g, g)
        got = modulus_estimate(f, fam, MetricScale(3))
        want = max(abs(min(A) - min(B)) for A in fam for B in fam
                   if hausdorff_distance(A, B, dist) <= 3)
        assert got == MetricScale(want)

    def test_profile_is_monotone(self):
        g = make_interval(-4, 4)
        f = CoarseMap(max_selector, g, g)
        prof = modulus_profile(f, all_subsets(g.points), [MetricScale(r) for r in range(4)])
        assert prof.is_monotone()
        assert [prof.table[MetricScale(r)].radius for r in range(4)] == [0, 1, 2, 3]

    def test_point_modulus_of_doubling(self):
        g, h = make_interval(-5, 5), make_interval(-10, 10)
        phi = CoarseMap(lambda x: 2 * x, g, h)
        assert point_modulus(phi, MetricScale(1)) == MetricScale(2)


class TestTransfer:
    def test_identity_transfer(self):
        g = make_interval(-6, 6)
        ident = CoarseMap(lambda x: x, g, g)
        t = transfer_selector(ident, ident, max_selector)
        for A in all_subsets(range(-3, 3)):
            assert t(A) == max(A)

    @settings(max_examples=50)
    @given(st.sets(st.integers(-8, 8), min_size=1, max_size=6))
    def test_negation_turns_max_into_min(self, A):
        g = make_interval(-8, 8)
        neg = CoarseMap(lambda x: -x, g, g)
        assert transfer_selector(neg, neg, max_selector)(A) == min(A)

    def test_rejects_non_injective(self):
        g = make_interval(-3, 3)
        sq = CoarseMap(lambda x: x * x, g, g)
        with pytest.raises(ValueError):
            transfer_selector(sq, sq, max_selector)
