"""Exhaustive search for 2-selectors of a given modulus on a small graph.

Works straight from the definition and shares no code with the propagation
rules: every pair ``{a, b}`` is a boolean variable (does ``f`` pick the
smaller label?), and each pair of 2-sets at Hausdorff distance at most 1 forbids
the value combinations landing more than ``r`` apart.  Distances come from
networkx.  The search is plain backtracking with forward checking.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx


@dataclass
class SearchResult:
    satisfiable: bool
    selector: dict | None
    nodes: int
    constraints: int
    stats: dict = field(default_factory=dict)


def _pair_hausdorff(D, P, Q) -> int:
    (p1, p2), (q1, q2) = P, Q
    return max(min(D[p1][q1], D[p1][q2]), min(D[p2][q1], D[p2][q2]),
               min(D[q1][p1], D[q1][p2]), min(D[q2][p1], D[q2][p2]))


def two_selector_constraints(edges, vertices, r: int):
    G = nx.Graph()
    G.add_nodes_from(vertices)
    G.add_edges_from(edges)
    D = dict(nx.all_pairs_shortest_path_length(G))
    pairs = [tuple(sorted(p)) for p in itertools.combinations(sorted(vertices), 2)]
    index = {p: i for i, p in enumerate(pairs)}
    # forbid[(i, vi)] lists (j, vj) that cannot hold together with variable i = vi
    forbid: dict = {}
    count = 0
    for P, Q in itertools.combinations(pairs, 2):
        if _pair_hausdorff(D, P, Q) > 1:
            continue
        for vi, p in ((True, P[0]), (False, P[1])):
            for vj, q in ((True, Q[0]), (False, Q[1])):
                if D[p][q] > r:
                    i, j = index[P], index[Q]
                    forbid.setdefault((i, vi), []).append((j, vj))
                    forbid.setdefault((j, vj), []).append((i, vi))
                    count += 1
    return pairs, forbid, count


def search_two_selector(edges, vertices, r: int, node_limit: int = 1_000_000) -> SearchResult:
    """Find a 2-selector with modulus ``r`` or prove none exists."""
    pairs, forbid, count = two_selector_constraints(edges, vertices, r)
    n = len(pairs)
    nodes = 0

    def assign(state: dict, var: int, val: bool) -> dict | None:
        state = dict(state)
        queue = [(var, val)]
        while queue:
            i, v = queue.pop()
            if i in state:
                if state[i] != v:
                    return None
                continue
            state[i] = v
            # any partner literal incompatible with (i, v) must take the other value
            for j, vj in forbid.get((i, v), ()):
                queue.append((j, not vj))
        return state

    def solve(state: dict):
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise RuntimeError("search node limit exceeded")
        var = next((i for i in range(n) if i not in state), None)
        if var is None:
            return state
        for val in (True, False):
            nxt = assign(state, var, val)
            if nxt is not None:
                got = solve(nxt)
                if got is not None:
                    return got
        return None

    found = solve({})
    selector = None
    if found is not None:
        selector = {frozenset(p): (p[0] if found[i] else p[1]) for i, p in enumerate(pairs)}
    return SearchResult(found is not None, selector, nodes, count, {"pairs": n})


def check_two_selector(edges, vertices, r: int, selector: dict) -> bool:
    """Verify a candidate 2-selector against every Hausdorff-adjacent pair."""
    G = nx.Graph()
    G.add_nodes_from(vertices)
    G.add_edges_from(edges)
    D = dict(nx.all_pairs_shortest_path_length(G))
    pairs = [tuple(sorted(p)) for p in itertools.combinations(sorted(vertices), 2)]
    for P in pairs:
        if selector[frozenset(P)] not in P:
            return False
    for P, Q in itertools.combinations(pairs, 2):
        if _pair_hausdorff(D, P, Q) <= 1 and D[selector[frozenset(P)]][selector[frozenset(Q)]] > r:
            return False
    return True
