"""Constraint propagation over the tournament induced by a 2-selector.

A 2-selector ``f`` of modulus ``r`` (``d_H(P, Q) <= 1`` implies
``d(f(P), f(Q)) <= r``) induces the tournament ``a < b iff f({a, b}) = a``.
The rules below derive orientations from that constraint along geodesics
(claim1), connected sets avoiding a ball (claim2) and short moves of one
endpoint (claim3).  A refutation case-splits on a few seed orientations and
propagates until some pair is forced both ways.  Each deduction records its
premises and the distances it relied on, so :func:`replay` can re-check a
certificate against an independent distance computation.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .core import hausdorff_distance
from .graphs import Graph, make_tripod, tripod_vertex

SEED, CLAIM1, CLAIM2, CLAIM3, MODULUS = "seed", "claim1", "claim2", "claim3", "modulus"


@dataclass
class Deduction:
    rule: str
    premises: tuple
    conclusion: object
    data: dict = field(default_factory=dict)

    def to_dict(self, index: int) -> dict:
        return {"step": index, "rule": self.rule, "premises": list(self.premises),
                "conclusion": _jsonable(self.conclusion), "data": _jsonable(self.data)}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return x


def _tupled(x):
    if isinstance(x, list):
        return tuple(_tupled(v) for v in x)
    if isinstance(x, dict):
        return {k: _tupled(v) for k, v in x.items()}
    return x


@dataclass
class Certificate:
    case: str
    steps: list
    contradiction: tuple
    context: dict
    assumptions: tuple = ()

    def to_lines(self) -> list[str]:
        head = {"kind": "case", "case": self.case, "context": self.context,
                "assumptions": _jsonable(self.assumptions),
                "contradiction": list(self.contradiction)}
        lines = [json.dumps(head, sort_keys=True)]
        for i, s in enumerate(self.steps):
            lines.append(json.dumps({"kind": "deduction", **s.to_dict(i)}, sort_keys=True))
        return lines

    def to_text(self) -> str:
        out = [f"# case {self.case}"]
        for i, s in enumerate(self.steps):
            prem = ",".join(str(p) for p in s.premises) or "-"
            out.append(f"{i:4d}  {s.rule:<8} [{prem}]  {_format_conclusion(s.conclusion)}")
        a, b = self.contradiction
        out.append(f"# contradiction between steps {a} and {b}")
        return "\n".join(out)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "Certificate":
        lines = [json.loads(x) for x in lines if x.strip()]
        if not lines or lines[0].get("kind") != "case":
            raise ValueError("certificate must start with a case header")
        head, steps = lines[0], []
        for i, rec in enumerate(lines[1:]):
            if rec.get("step") != i:
                raise ValueError(f"step {i}: out-of-order step index {rec.get('step')!r}")
            steps.append(Deduction(rec["rule"], tuple(rec["premises"]), _tupled(rec["conclusion"]),
                                   _tupled(rec["data"])))
        return cls(head["case"], steps, tuple(head["contradiction"]), head["context"],
                   _tupled(head.get("assumptions", [])))


def _format_conclusion(c) -> str:
    if isinstance(c, tuple) and len(c) == 2 and not isinstance(c[0], dict):
        return f"{c[0]} < {c[1]}"
    if isinstance(c, dict):
        return f"f({_format_set(c['set'])}) in {list(c['candidates'])}"
    return repr(c)


def _format_set(desc) -> str:
    base = "A" if desc["base"] == "A" else "A'"
    extra = desc.get("extra")
    return base if extra is None else f"{base}+{{{extra}}}"


@dataclass
class Refutation:
    """Outcome of a case-split refutation."""

    status: str  # "refuted" | "inconclusive"
    certificates: list
    context: dict
    notes: list = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"


# --------------------------------------------------------------------------
# orientation store


class OrientationStore:
    """Partial tournament with a deduction log.

    ``facts[{a, b}] = (winner, step)``; ``winner`` is the element ``f`` picks.
    """

    def __init__(self, graph: Graph, r: int):
        if r < 1:
            raise ValueError("modulus r must be at least 1")
        self.graph = graph
        self.r = r
        self.facts: dict = {}
        self.log: list[Deduction] = []
        self.contradiction: tuple | None = None
        self.notes: list[str] = []

    def copy(self) -> "OrientationStore":
        new = copy.copy(self)
        new.facts = dict(self.facts)
        new.log = list(self.log)
        new.notes = list(self.notes)
        return new

    def winner(self, a, b):
        got = self.facts.get(frozenset((a, b)))
        return None if got is None else got[0]

    def step_of(self, a, b) -> int:
        return self.facts[frozenset((a, b))][1]

    def add(self, winner, loser, rule: str, premises: Sequence[int], data: dict) -> bool:
        """Record ``winner < loser``; returns True if this is a new fact."""
        if self.contradiction is not None:
            return False
        key = frozenset((winner, loser))
        old = self.facts.get(key)
        if old is not None and old[0] == winner:
            return False
        self.log.append(Deduction(rule, tuple(premises), (winner, loser), data))
        idx = len(self.log) - 1
        if old is not None:
            self.contradiction = (old[1], idx)
            return False
        self.facts[key] = (winner, idx)
        return True

    def seed(self, winner, loser) -> bool:
        return self.add(winner, loser, SEED, (), {})

    def __len__(self):
        return len(self.facts)


# --------------------------------------------------------------------------
# rules


def claim1_rule(store: OrientationStore, path: Sequence) -> int:
    """Along a geodesic, the orientation of ``(a_0, a_r)`` fixes every pair ``j - i >= r``."""
    path = tuple(path)
    m, r = len(path) - 1, store.r
    if m < r:
        return 0
    w = store.winner(path[0], path[r])
    if w is None:
        return 0
    premise = store.step_of(path[0], path[r])
    forward = w == path[0]
    dist = store.graph.distance(path[0], path[-1])
    added = 0
    for i in range(m + 1):
        for j in range(i + r, m + 1):
            a, b = (path[i], path[j]) if forward else (path[j], path[i])
            added += store.add(a, b, CLAIM1, (premise,),
                               {"path": path, "i": i, "j": j, "length": dist})
            if store.contradiction:
                return added
    return added


def claim2_rule(store: OrientationStore, v, U: Sequence) -> int:
    """A connected set outside ``B(v, r)`` lies entirely on one side of ``v``."""
    g, r = store.graph, store.r
    U = tuple(U)
    if len(U) < 2:
        return 0
    dists = {u: g.distance(v, u) for u in U}
    if min(dists.values()) <= r:
        store.notes.append(f"claim2 inapplicable at {v!r}: set meets B(v, {r})")
        return 0
    if not _connected(g, U):
        store.notes.append(f"claim2 inapplicable at {v!r}: set is not connected")
        return 0
    u0 = next((u for u in U if store.winner(v, u) is not None), None)
    if u0 is None:
        return 0
    premise = store.step_of(v, u0)
    v_first = store.winner(v, u0) == v
    added = 0
    for u in U:
        if u == u0:
            continue
        a, b = (v, u) if v_first else (u, v)
        added += store.add(a, b, CLAIM2, (premise,),
                           {"v": v, "U": U, "u0": u0, "min_distance": min(dists.values())})
        if store.contradiction:
            break
    return added


def claim3_rule(store: OrientationStore, u, v, v2) -> int:
    """Moving ``v`` by ``n`` keeps its orientation against ``u`` when ``d(u, v) > n + r``."""
    if v == v2:
        return 0
    g, r = store.graph, store.r
    n, duv = g.distance(v, v2), g.distance(u, v)
    if not duv > n + r:
        store.notes.append(f"claim3 inapplicable: d({u!r},{v!r})={duv} <= {n}+{r}")
        return 0
    w = store.winner(u, v)
    if w is None:
        return 0
    a, b = (u, v2) if w == u else (v2, u)
    return int(store.add(a, b, CLAIM3, (store.step_of(u, v),),
                         {"u": u, "v": v, "v2": v2, "n": n, "d_uv": duv}))


def _connected(g: Graph, U: Sequence) -> bool:
    U = set(U)
    start = next(iter(U))
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y in U and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == U


def propagate(store: OrientationStore, instances: Sequence[tuple]) -> int:
    """Apply rule instances until nothing new is derived; returns the number of rounds."""
    rounds = 0
    while store.contradiction is None:
        rounds += 1
        added = 0
        for inst in instances:
            kind, args = inst[0], inst[1:]
            if kind == CLAIM1:
                added += claim1_rule(store, *args)
            elif kind == CLAIM2:
                added += claim2_rule(store, *args)
            elif kind == CLAIM3:
                added += claim3_rule(store, *args)
            else:
                raise ValueError(f"unknown rule {kind!r}")
            if store.contradiction is not None:
                break
        if not added:
            break
    return rounds


def _slice(store: OrientationStore) -> tuple[list, tuple]:
    """Keep only the ancestors of the two contradictory steps, renumbered."""
    need, stack = set(), list(store.contradiction)
    while stack:
        i = stack.pop()
        if i in need:
            continue
        need.add(i)
        stack.extend(store.log[i].premises)
    order = sorted(need)
    new = {old: k for k, old in enumerate(order)}
    steps = [Deduction(store.log[i].rule, tuple(new[p] for p in store.log[i].premises),
                       store.log[i].conclusion, store.log[i].data) for i in order]
    a, b = store.contradiction
    return steps, (new[a], new[b])


def case_split(store: OrientationStore, decisions: Sequence[tuple], instances: Sequence[tuple],
               context: dict, assumptions: tuple = ()) -> list | None:
    """Branch on the orientation of each decision pair; certificates for every leaf or None."""
    propagate(store, instances)
    if store.contradiction is not None:
        steps, contra = _slice(store)
        label = ", ".join(f"{a}<{b}" for a, b in assumptions) or "unconditional"
        return [Certificate(label, steps, contra, context, assumptions)]
    if not decisions:
        return None
    (a, b), rest = decisions[0], decisions[1:]
    if store.winner(a, b) is not None:
        return case_split(store, rest, instances, context, assumptions)
    out = []
    for w, l in ((a, b), (b, a)):
        branch = store.copy()
        branch.seed(w, l)
        sub = case_split(branch, rest, instances, context, assumptions + ((w, l),))
        if sub is None:
            return None
        out += sub
    return out


# --------------------------------------------------------------------------
# tripod


def claim4_hypotheses(g: Graph, path: Sequence, v, r: int) -> dict:
    """Check the geodesic/offset hypotheses under which ``d(v, a_k) <= r`` is forced."""
    path = tuple(path)
    m = len(path) - 1
    dists = [g.distance(v, a) for a in path]
    dmin = min(dists)
    k = dists.index(dmin)
    return {"k": k, "m": m, "d_v_path": dmin,
            "holds": k > 2 * r + 1 and m - k > 2 * r + 1,
            "violates_bound": dmin > r}


def tripod_refute(r: int, arm: int) -> Refutation:
    """No 2-selector of modulus ``r`` on a tripod with arms of length ``arm``.

    Take the geodesic through arms 0 and 1 and the vertex ``v`` at distance
    ``r+1`` from the centre on arm 2.  Splitting on the orientation of
    ``(a_0, a_r)`` and of ``(v, a_0)`` gives four cases; in each, claims 1-3
    force some pair both ways, i.e. ``v`` cannot sit farther than ``r``
    from the geodesic.
    """
    g = make_tripod(arm, truncated=False)
    context = {"target": "tripod", "r": r, "arm": arm}
    if arm < 2 * r + 2:
        return Refutation("inconclusive", [], context,
                          [f"arm {arm} < 2r+2 = {2 * r + 2}: offset hypotheses cannot be met"])
    path = tuple([tripod_vertex(0, p, arm) for p in range(arm, 0, -1)]
                 + [0] + [tripod_vertex(1, p, arm) for p in range(1, arm + 1)])
    v = tripod_vertex(2, r + 1, arm)
    hyp = claim4_hypotheses(g, path, v, r)
    k, m = hyp["k"], hyp["m"]
    assert hyp["holds"] and hyp["violates_bound"]
    context.update({"path": list(path), "v": v, "k": k, "m": m})
    instances = [
        (CLAIM1, path),
        (CLAIM2, v, path),
        (CLAIM3, path[0], v, path[k]),
        (CLAIM3, path[m], v, path[k]),
    ]
    decisions = [(path[0], path[r]), (v, path[0])]
    store = OrientationStore(g, r)
    certs = case_split(store, decisions, instances, context)
    if certs is None:
        return Refutation("inconclusive", [], context, store.notes)
    return Refutation("refuted", certs, context)


def tripod_graph(context: dict) -> Graph:
    return make_tripod(context["arm"], truncated=False)


# --------------------------------------------------------------------------
# no global selector on the integers


def _materialize(desc: dict, n: int, a: int = 0) -> list[int]:
    step = n + 1
    W = 3 * step
    pts = set(range(a - W, a + W + 1, step))
    if desc["base"] == "A'":
        pts.discard(a)
    if desc.get("extra") is not None:
        pts.add(desc["extra"])
    return sorted(pts)


def _candidates(points: Sequence[int], prev: Iterable[int], n: int) -> list[int]:
    prev = list(prev)
    return [x for x in points if any(abs(x - c) <= n for c in prev)]


def z_global_refute(n: int) -> Refutation:
    """No global selector on the integers with modulus ``n``.

    With ``A = (n+1)Z`` and ``a = f(A)`` (taken as 0), move the point ``a``
    one unit at a time towards ``a - (n+1)`` and towards ``a + (n+1)``.
    Neighbouring sets are within Hausdorff distance 1, so each step narrows
    ``f`` to points within ``n`` of the previous candidates; both chains end
    at ``A \\ {a}`` with disjoint candidate sets.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    a = 0
    context = {"target": "z-global", "n": n, "a": a, "window": [a - 3 * (n + 1), a + 3 * (n + 1)]}
    A = {"base": "A", "extra": None}
    steps = [Deduction(SEED, (), {"set": A, "candidates": (a,)}, {})]
    ends = []
    for side, sign in (("left", -1), ("right", 1)):
        prev_idx, prev_desc, prev_cands = 0, A, (a,)
        for j in range(1, n + 2):
            desc = {"base": "A'", "extra": a + sign * j if j <= n else None}
            pts = _materialize(desc, n, a)
            dh = hausdorff_distance(_materialize(prev_desc, n, a), pts, lambda x, y: abs(x - y))
            cands = tuple(_candidates(pts, prev_cands, n))
            steps.append(Deduction(MODULUS, (prev_idx,), {"set": desc, "candidates": cands},
                                   {"side": side, "j": j, "d_H": dh}))
            prev_idx, prev_desc, prev_cands = len(steps) - 1, desc, cands
        ends.append(prev_idx)
    left, right = (steps[i].conclusion["candidates"] for i in ends)
    if set(left) & set(right):
        return Refutation("inconclusive", [], context, ["chains do not separate"])
    cert = Certificate(f"f(A)={a}", steps, tuple(ends), context, ())
    return Refutation("refuted", [cert], context)


# --------------------------------------------------------------------------
# replay


class ReplayError(ValueError):
    pass


def _nx_distances(g: Graph) -> dict:
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges())
    return dict(nx.all_pairs_shortest_path_length(G))


def replay(cert: Certificate, graph: Graph | None = None) -> bool:
    """Re-check every step from scratch; False on the first failing step.

    Tripod certificates are checked against distances from networkx on
    ``graph`` (rebuilt from the context if omitted); integer certificates
    against truncations of the sets on the recorded window.
    """
    target = cert.context.get("target")
    if not cert.steps:
        return True
    if target == "z-global":
        return _replay_z(cert)
    if target == "tripod" or graph is not None:
        return _replay_orientations(cert, graph or tripod_graph(cert.context))
    raise ReplayError(f"unknown certificate target {target!r}")


def _premise(cert: Certificate, idx: int, k: int) -> Deduction:
    step = cert.steps[idx]
    if len(step.premises) != 1:
        raise ReplayError(f"step {idx}: expected one premise")
    p = step.premises[0]
    if not 0 <= p < idx:
        raise ReplayError(f"step {idx}: premise {p} does not precede it")
    return cert.steps[p]


def _replay_orientations(cert: Certificate, g: Graph) -> bool:
    D = _nx_distances(g)
    r = cert.context["r"]
    assumptions = {tuple(x) for x in cert.assumptions}

    def d(x, y):
        return D[x].get(y, float("inf"))

    for idx, st in enumerate(cert.steps):
        try:
            win, lose = st.conclusion
        except (TypeError, ValueError):
            raise ReplayError(f"step {idx}: malformed conclusion") from None
        if win == lose or win not in D or lose not in D:
            return False
        data = st.data
        if st.rule == SEED:
            if st.premises or (win, lose) not in assumptions:
                return False
            continue
        prem = _premise(cert, idx, 1).conclusion
        if st.rule == CLAIM1:
            path, i, j = tuple(data["path"]), data["i"], data["j"]
            m = len(path) - 1
            if any(b not in g.adj[a] for a, b in zip(path, path[1:])):
                return False
            if d(path[0], path[-1]) != m or data["length"] != m or m < r:
                return False
            if set(prem) != {path[0], path[r]} or not 0 <= i < j <= m or j - i < r:
                return False
            expect = (path[i], path[j]) if prem[0] == path[0] else (path[j], path[i])
            if (win, lose) != expect:
                return False
        elif st.rule == CLAIM2:
            v, U, u0 = data["v"], tuple(data["U"]), data["u0"]
            if u0 not in U or set(prem) != {v, u0}:
                return False
            dmin = min(d(v, u) for u in U)
            if dmin != data["min_distance"] or dmin <= r or not _connected(g, U):
                return False
            u = lose if win == v else win
            if u not in U:
                return False
            if (prem[0] == v) != (win == v):
                return False
        elif st.rule == CLAIM3:
            u, v, v2 = data["u"], data["v"], data["v2"]
            n, duv = d(v, v2), d(u, v)
            if n != data["n"] or duv != data["d_uv"] or not duv > n + r:
                return False
            if set(prem) != {u, v} or {win, lose} != {u, v2}:
                return False
            if (prem[0] == u) != (win == u):
                return False
        else:
            return False
    a, b = cert.contradiction
    ca, cb = cert.steps[a].conclusion, cert.steps[b].conclusion
    return tuple(ca) == tuple(reversed(tuple(cb)))


def _replay_z(cert: Certificate) -> bool:
    n, a = cert.context["n"], cert.context["a"]
    W = 3 * (n + 1)
    if list(cert.context["window"]) != [a - W, a + W]:
        return False
    for idx, st in enumerate(cert.steps):
        desc, cands = st.conclusion["set"], tuple(st.conclusion["candidates"])
        pts = _materialize(desc, n, a)
        if not cands or any(c not in pts for c in cands):
            return False
        if st.rule == SEED:
            if desc["base"] != "A" or desc.get("extra") is not None or cands != (a,):
                return False
            continue
        if st.rule != MODULUS:
            return False
        prev = _premise(cert, idx, 1).conclusion
        prev_pts = _materialize(prev["set"], n, a)
        dh = hausdorff_distance(prev_pts, pts, lambda x, y: abs(x - y))
        if dh != st.data.get("d_H") or dh > 1:
            return False
        # the truncation must not hide candidates: all of them sit well inside the window
        if any(abs(c - a) + n > W - (n + 1) for c in prev["candidates"]):
            return False
        if tuple(_candidates(pts, prev["candidates"], n)) != cands:
            return False
    i, j = cert.contradiction
    si, sj = cert.steps[i].conclusion, cert.steps[j].conclusion
    return si["set"] == sj["set"] and not set(si["candidates"]) & set(sj["candidates"])


def covers_all_cases(certs: Sequence[Certificate]) -> bool:
    """True iff the certificates' seed assumptions form an exhaustive case split."""
    leaves = [frozenset(tuple(x) for x in c.assumptions) for c in certs]

    def cover(ls: list) -> bool:
        if not ls:
            return False
        if any(not l for l in ls):
            return True
        w, l = next(iter(ls[0]))
        with_a = [x - {(w, l)} for x in ls if (w, l) in x]
        with_b = [x - {(l, w)} for x in ls if (l, w) in x]
        rest = [x for x in ls if (w, l) not in x and (l, w) not in x]
        return cover(with_a + rest) and cover(with_b + rest)

    return cover(leaves)


def replay_refutation(ref: Refutation, graph: Graph | None = None) -> bool:
    if not ref.refuted:
        return False
    return all(replay(c, graph) for c in ref.certificates) and covers_all_cases(ref.certificates)
