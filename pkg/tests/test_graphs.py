import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsesel.core import CoarseMap, DomainError, MetricScale, modulus_estimate
from coarsesel.graphs import (BOUNDED, INFINITE, LINE_N, LINE_Z, OTHER, Graph, bfs_distance,
                              claim5_bijection, claim5_coarse_map, claim5_distortion,
                              classify_shape, ends_estimate, find_ray, format_edge_list, geodesic,
                              is_geodesic, is_ray, make_complete, make_grid,
                              make_line, make_ray, make_tripod, parse_edge_list, separates, sphere,
                              sphere_profile, sphere_profile_bounded, tripod_vertex)
from coarsesel.groups import cayley_graph, dinf
from coarsesel.core import transfer_selector
from coarsesel.selectors import max_selector

from conftest import detour_graph


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges())
    return G


class TestGenerators:
    def test_sizes(self):
        assert make_line(5).vertices == tuple(range(-5, 6))
        assert len(make_tripod(3).vertices) == 10
        assert len(make_grid(3).vertices) == 49
        assert make_ray(4).boundary == {4}

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            Graph([0, 1, 2], [(0, 1)])

    def test_degree_bound(self):
        assert make_grid(3).degree_bound() == 4
        assert make_complete(5).degree_bound() == 4


class TestDistances:
    def test_examples(self):
        g = make_line(10)
        assert bfs_distance(g, 0, 7) == 7 and bfs_distance(g, 3, 3) == 0
        t = make_tripod(5, truncated=False)
        assert bfs_distance(t, tripod_vertex(0, 5, 5), tripod_vertex(1, 5, 5)) == 10

    def test_disconnected_is_infinite(self):
        g = Graph([0, 1, 2, 3], [(0, 1), (2, 3)], check_connected=False)
        assert g.distance(0, 3) == INFINITE

    @settings(max_examples=40)
    @given(st.integers(4, 14), st.data())
    def test_bfs_matches_networkx(self, n, data):
        extra = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                                   max_size=2 * n))
        edges = [(i, i + 1) for i in range(n - 1)] + [(u, v) for u, v in extra if u != v]
        g = Graph(range(n), edges)
        ref = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
        for u in g.vertices:
            for v in g.vertices:
                assert g.distance(u, v) == ref[u][v]


class TestGeodesics:
    def test_line_path(self):
        assert tuple(geodesic(make_line(5), 0, 3)) == (0, 1, 2, 3)
        assert tuple(geodesic(make_line(5), 2, 2)) == (2,)

    def test_inter_arm_geodesic_uses_center(self):
        t = make_tripod(4)
        for a, b in [(0, 1), (1, 2), (0, 2)]:
            p = geodesic(t, tripod_vertex(a, 3, 4), tripod_vertex(b, 2, 4))
            assert 0 in p and is_geodesic(t, p)

    def test_grid_geodesic_is_deterministic(self):
        g = make_grid(3)
        assert tuple(geodesic(g, (0, 0), (2, 2))) == tuple(geodesic(g, (0, 0), (2, 2)))

    def test_rays(self):
        assert is_ray(make_line(8), range(0, 9))
        assert is_ray(make_tripod(6), [tripod_vertex(2, p, 6) for p in range(7)])
        assert find_ray(make_complete(5), 0, 10) is None
        assert len(find_ray(make_line(10), 0, 5)) == 6


class TestSpheres:
    def test_line(self):
        g = make_line(10)
        assert sphere(g, 0, 3) == {-3, 3}
        assert sphere(g, 0, 0) == {0}
        assert sphere_profile_bounded(g, 0, 8) == (True, 2)

    def test_grid_growth(self):
        g = make_grid(8)
        assert sphere_profile(g, (0, 0), 6).sizes == (1, 4, 8, 12, 16, 20, 24)
        assert sphere_profile_bounded(g, (0, 0), 8) == (False, 32)

    def test_tripod(self):
        assert sphere_profile_bounded(make_tripod(10), 0, 8) == (True, 3)

    def test_past_window(self):
        with pytest.raises(DomainError):
            sphere(make_line(5), 0, 6)

    def test_dinf_cayley_spheres(self):
        G = dinf()
        cay = cayley_graph(G, [(0, 1), (0, -1), (1, 0)], G.window_points(-10, 10))
        ok, k = sphere_profile_bounded(cay, (0, 0), 8)
        assert ok and k <= 4


class TestEnds:
    def test_examples(self):
        assert ends_estimate(make_line(10), 0, 2) == 2
        assert ends_estimate(make_ray(10), 0, 2) == 1
        assert ends_estimate(make_tripod(10), 0, 1) == 3

    def test_margin_too_small(self):
        with pytest.raises(DomainError):
            ends_estimate(make_line(3), 0, 2)


class TestClassify:
    @pytest.mark.parametrize("g, kind", [
        (make_complete(5), BOUNDED),
        (make_ray(30), LINE_N),
        (make_line(30), LINE_Z),
        (make_tripod(12), OTHER),
        (make_grid(7), OTHER),
    ])
    def test_catalog(self, g, kind):
        assert classify_shape(g).kind == kind

    def test_tripod_evidence(self):
        ev = classify_shape(make_tripod(10)).evidence
        assert ev["ends"] == 3 and not ev.get("inconclusive")

    def test_small_window_is_inconclusive(self):
        got = classify_shape(make_line(3))
        assert got.kind == OTHER and got.evidence["inconclusive"]


class TestEdgeList:
    def test_round_trip(self):
        g = make_tripod(3)
        h = parse_edge_list(format_edge_list(g))
        assert set(map(frozenset, h.edges())) == set(map(frozenset, g.edges()))
        assert h.boundary == g.boundary and h.window.margin == g.window.margin

    @pytest.mark.parametrize("text, line", [
        ("0 1\n1 2 3\n", 2),
        ("0 1\n\n1 x\n", 3),
        ("#margin\n0 1\n", 1),
        ("0 1\n2 2\n", 2),
    ])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ValueError, match=f"line {line}:"):
            parse_edge_list(text)




class TestClaim5:
    def test_degenerate_path_is_a_shift(self):
        g = make_line(12)
        A, C, T = list(range(0, 13)), list(range(-1, -13, -1)), [0, -1]
        phi = claim5_bijection(g, A, C, T)
        assert all(phi(x) == x + 1 for x in range(-12, 13))

    def test_assumptions_named(self):
        g = make_line(8)
        with pytest.raises(ValueError, match="intersect"):
            claim5_bijection(g, [0, 1], [0, -1], [0])
        with pytest.raises(ValueError, match="geodesic"):
            claim5_bijection(*detour_graph()[:1], [("a", 0)], [("c", 0)],
                             [("a", 0), ("a", 1), ("a", 2), ("a", 3), ("d", 1), ("c", 3),
                              ("c", 2), ("c", 1), ("c", 0)])

    def test_separation(self):
        g, A, C, T, H = detour_graph()
        assert separates(g, H, A, C)
        assert not separates(g, set(T), A, C)

    def test_distortion_on_detour_graph(self):
        g, A, C, T, H = detour_graph()
        phi = claim5_bijection(g, A, C, T, H)
        report = claim5_distortion(g, phi)
        assert report["upper"] and report["lower"]
        # the detour really shortcuts: the map is not an isometry
        assert g.distance(A[3], C[3]) < abs(phi(A[3]) - phi(C[3]))

    def test_transfer_has_finite_modulus(self):
        g, A, C, T, H = detour_graph(rays=8)
        phi = claim5_bijection(g, A, C, T, H)
        fwd, inv = claim5_coarse_map(g, phi)
        sel = transfer_selector(fwd, inv, max_selector)
        dom = fwd.domain
        pts = list(dom.safe_region(MetricScale(1)))
        fam = [frozenset({x, y}) for i, x in enumerate(pts) for y in pts[i:]]
        got = modulus_estimate(CoarseMap(sel, dom, dom), fam, MetricScale(1))
        assert got.radius < len(pts)
