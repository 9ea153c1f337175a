import itertools
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsesel.core import GroupScale, compose_scales, invert_scale
from coarsesel.graphs import make_interval
from coarsesel.groups import (CosetTower, FiniteGroup, FinitarySymmetric, GroupWindow, IntLine,
                              SumZ2, VirtuallyZ, cayley_graph, dinf, encode_h, finitary_ball,
                              group_associativity_sample, klein_four, load_group_spec,
                              sum_z2_tower, sym_tower, tower_factorize, well_order_compare,
                              z_cross_zk, z_over_nz)


def affine(g):
    """D-infinity element as the map x -> s x + t on the integers."""
    i, k = g
    s = -1 if i else 1
    return (s, s * k)


def compose(p, q):
    (s1, t1), (s2, t2) = p, q
    return (s1 * s2, s1 * t2 + t1)


elems = st.tuples(st.integers(0, 1), st.integers(-30, 30))


class TestVirtuallyZ:
    def test_dihedral_product(self):
        assert dinf().multiply((1, 2), (1, 3)) == (0, 1)

    @given(elems, elems)
    def test_matches_affine_model(self, g, h):
        G = dinf()
        assert affine(G.multiply(g, h)) == compose(affine(g), affine(h))

    @given(elems)
    def test_inverse(self, g):
        G = dinf()
        assert G.multiply(g, G.inverse(g)) == G.identity() == G.multiply(G.inverse(g), g)

    @pytest.mark.parametrize("G", [dinf(), z_cross_zk(3), z_over_nz(2), z_over_nz(3)])
    def test_axioms_on_window(self, G):
        pts = G.window_points(-4, 4)
        assert group_associativity_sample(G, pts, samples=1000)
        for g in pts:
            assert G.multiply(g, G.inverse(g)) == G.identity()

    def test_d_constant(self):
        assert dinf().d_constant() == 0
        assert z_over_nz(2).d_constant() == 1

    def test_z_over_2z_is_z(self):
        G = z_over_nz(2)
        flat = lambda g: 2 * g[1] + g[0]  # noqa: E731
        for g, h in itertools.product(G.window_points(-3, 3), repeat=2):
            assert flat(G.multiply(g, h)) == flat(g) + flat(h)

    def test_bad_tables(self):
        with pytest.raises(ValueError, match="multiplicative"):
            VirtuallyZ([1, -1, -1], [[0, 1, 2], [1, 2, 0], [2, 0, 1]], [[0] * 3] * 3)
        with pytest.raises(ValueError, match="associative"):
            VirtuallyZ([1, -1], [[0, 1], [1, 0]], [[0, 0], [0, 5]])

    def test_level_scale(self):
        F1 = dinf().level_scale(1)
        assert len(F1) == 6 and F1.is_symmetric


class TestFinite:
    def test_klein(self):
        G = klein_four()
        assert G.order == 4 and all(G.multiply(g, g) == 0 for g in G.elements())

    def test_rejects_non_latin(self):
        with pytest.raises(ValueError, match="column"):
            FiniteGroup([[0, 1], [0, 1]])

    def test_cayley_of_klein_is_complete(self):
        G = klein_four()
        g = cayley_graph(G, [1, 2, 3], G.elements())
        assert len(g.edges()) == 6

    def test_nonsymmetric_generators(self):
        with pytest.raises(ValueError, match="symmetric"):
            cayley_graph(IntLine(), [1], range(-3, 4))


class TestSym:
    def test_trim_and_product(self):
        S = FinitarySymmetric()
        t = S.transposition(0, 1)
        assert S.multiply(t, t) == ()
        assert S.inverse((1, 2, 0)) == (2, 0, 1)
        assert len(S.symmetric_group(4)) == 24


class TestCayley:
    def test_integer_line(self):
        g = cayley_graph(IntLine(), [1, -1], range(-5, 6))
        assert set(map(frozenset, g.edges())) == set(map(frozenset, make_interval(-5, 5).edges()))
        assert g.boundary == {-5, 5}


class TestFinitaryBall:
    def test_tower_coset(self):
        t = sum_z2_tower(4)
        assert finitary_ball(t.group, 5, t.level_scale(2)) == {4, 5, 6, 7}

    def test_integers(self):
        assert finitary_ball(IntLine(), 7, GroupScale(IntLine(), frozenset({-1, 1}))) == {6, 7, 8}


class TestTower:
    def test_factorize(self):
        t = sum_z2_tower(4)
        assert tower_factorize(t, 0) == []
        assert tower_factorize(t, 0b101) == [(2, 0b100), (0, 0b001)]
        assert tower_factorize(t, 1) == [(0, 1)]

    def test_encode_round_trip(self):
        for t in (sum_z2_tower(4), sym_tower(3)):
            seqs = {encode_h(t, g) for g in t.elements}
            assert len(seqs) == len(t.elements)
            for g in t.elements:
                assert t.decode(encode_h(t, g)) == g

    def test_identity_is_minimal(self):
        t = sum_z2_tower(4)
        e = encode_h(t, 0)
        assert e == (0, 0, 0, 0)
        assert all(well_order_compare(t, e, encode_h(t, g)) < 0 for g in t.elements if g)

    def test_highest_level_decides(self):
        t = sum_z2_tower(4)
        assert well_order_compare(t, encode_h(t, 0b100), encode_h(t, 0b001)) > 0

    def test_total_order_on_g4(self):
        t = sum_z2_tower(4)
        seqs = [encode_h(t, g) for g in t.elements]
        for x, y in itertools.product(seqs, repeat=2):
            c = well_order_compare(t, x, y)
            assert c == -well_order_compare(t, y, x)
            assert (c == 0) == (x == y)
        for x, y, z in itertools.permutations(seqs[:10], 3):
            if well_order_compare(t, x, y) < 0 and well_order_compare(t, y, z) < 0:
                assert well_order_compare(t, x, z) < 0

    def test_bad_representatives(self):
        G = SumZ2()
        with pytest.raises(ValueError, match="cover"):
            CosetTower(G, [{0}, {0, 1}, {0, 1, 2, 3}], [[0, 1], [0]])

    def test_cosets_are_right_cosets(self):
        t = sym_tower(3)
        for n in range(t.levels):
            G, H = t.subgroups[n], t.subgroups[n + 1]
            cosets = [frozenset(t.group.multiply(h, r) for h in G) for r in t.reps[n]]
            assert frozenset().union(*cosets) == H
            assert sum(map(len, cosets)) == len(H)


class TestScaleAlgebra:
    @pytest.mark.parametrize("tower", [sum_z2_tower(4), sym_tower(3)])
    def test_compose_and_invert_pointwise(self, tower):
        rng = random.Random(1)
        G, pts = tower.group, tower.elements
        W = GroupWindow(G, pts)
        for _ in range(10):
            F = GroupScale(G, frozenset(rng.sample(pts, 3)))
            F2 = GroupScale(G, frozenset(rng.sample(pts, 3)))
            FF = compose_scales(F, F2)
            for x in pts:
                comp = set().union(*(W.full_ball(y, F2) for y in W.full_ball(x, F)))
                assert comp == W.full_ball(x, FF)
                inv = {y for y in pts if x in W.full_ball(y, F)}
                assert inv == W.full_ball(x, invert_scale(F))


class TestConfig:
    def test_variants(self):
        assert isinstance(load_group_spec('{"variant": "int-line"}'), IntLine)
        spec = {"variant": "virtually-z", "signs": [1, -1], "sigma": [[0, 1], [1, 0]],
                "cocycle": [[0, 0], [0, 0]]}
        assert load_group_spec(json.dumps(spec)).multiply((1, 2), (1, 3)) == (0, 1)
        t = load_group_spec('{"variant": "tower", "kind": "sym", "levels": 2}')
        assert len(t.elements) == 6

    def test_decode_error_has_position(self):
        with pytest.raises(ValueError, match="line 2, column"):
            load_group_spec('{"variant":\n  int-line}')

    def test_unknown_variant(self):
        with pytest.raises(ValueError, match="unknown variant"):
            load_group_spec('{"variant": "free"}')
