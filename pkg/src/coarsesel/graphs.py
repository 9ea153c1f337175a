"""Locally finite graphs on finite windows.

A :class:`Graph` is a finite induced piece of a (possibly infinite) locally
finite graph.  ``boundary`` lists the window vertices that have neighbours
outside the window; it is empty exactly when the graph is genuinely finite.
Distances are path distances inside the window.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

from .core import (CoarseMap, CoarseSpace, DomainError, MetricScale, Scale,
                   Window)

INFINITE = float("inf")


class Graph(CoarseSpace):
    def __init__(self, vertices: Sequence[Hashable], edges: Iterable[tuple],
                 boundary: Iterable = (), margin: int = 0, name: str = "graph",
                 check_connected: bool = True):
        self.window = Window(tuple(vertices), margin)
        if len(set(self.window.points)) != len(self.window.points):
            raise ValueError("duplicate vertices")
        self.adj: dict = {v: set() for v in self.window.points}
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at {u!r}")
            if u not in self.adj or v not in self.adj:
                raise ValueError(f"edge ({u!r}, {v!r}) uses an unknown vertex")
            self.adj[u].add(v)
            self.adj[v].add(u)
        idx = self.window.index
        self.adj = {v: tuple(sorted(ns, key=idx)) for v, ns in self.adj.items()}
        self.boundary = frozenset(boundary)
        if not self.boundary <= set(self.adj):
            raise ValueError("boundary vertices must belong to the graph")
        self.name = name
        self._dist = lru_cache(maxsize=None)(self._bfs)
        if check_connected and self.window.points:
            if len(self._dist(self.window.points[0])) != len(self.window.points):
                raise ValueError(f"graph {name!r} is not connected")

    def __repr__(self):
        return f"Graph({self.name!r}, |V|={len(self.points)}, |boundary|={len(self.boundary)})"

    @property
    def vertices(self) -> tuple:
        return self.window.points

    def edges(self) -> list:
        idx = self.window.index
        return [(u, v) for u in self.vertices for v in self.adj[u] if idx(u) < idx(v)]

    def degree_bound(self) -> int:
        return max((len(ns) for ns in self.adj.values()), default=0)

    def _bfs(self, source) -> dict:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def distances_from(self, v) -> dict:
        if v not in self.adj:
            raise DomainError(f"vertex {v!r} is not in the graph")
        return self._dist(v)

    def distance(self, u, v):
        return self.distances_from(u).get(v, INFINITE)

    def depth(self, v) -> float:
        """Distance from ``v`` to the window boundary (infinite if none)."""
        if not self.boundary:
            return INFINITE
        d = self.distances_from(v)
        return min(d.get(b, INFINITE) for b in self.boundary)

    # -- CoarseSpace interface
    def ball(self, x, s: Scale) -> frozenset:
        if not isinstance(s, MetricScale):
            raise TypeError("graphs take metric scales")
        return frozenset(y for y, d in self.distances_from(x).items() if d <= s.radius)

    def is_safe(self, x, s: Scale) -> bool:
        if not isinstance(s, MetricScale):
            raise TypeError("graphs take metric scales")
        return self.depth(x) >= s.radius

    def enclosing_scale(self, pairs) -> MetricScale:
        r = max((self.distance(y, z) for y, z in pairs), default=0)
        if r == INFINITE:
            raise DomainError("pair in different components")
        return MetricScale(r)

    def default_scale(self, size: int) -> MetricScale:
        return MetricScale(size)


def induced_subgraph(g: Graph, keep: Iterable, name: str | None = None) -> Graph:
    keep = set(keep)
    verts = [v for v in g.vertices if v in keep]
    edges = [(u, v) for u, v in g.edges() if u in keep and v in keep]
    bnd = [v for v in verts if v in g.boundary or any(w not in keep for w in g.adj[v])]
    return Graph(verts, edges, bnd, g.window.margin, name or f"{g.name}[sub]", check_connected=False)


def subspace(g: Graph, keep: Iterable, name: str | None = None) -> "MetricSubspace":
    return MetricSubspace(g, keep, name)


class MetricSubspace(CoarseSpace):
    """A vertex subset carrying the ambient graph metric (not its own path metric)."""

    def __init__(self, g: Graph, keep: Iterable, name: str | None = None):
        keep = set(keep)
        self.graph = g
        self.window = Window(tuple(v for v in g.vertices if v in keep), g.window.margin)
        self.name = name or f"{g.name}|sub"

    def distance(self, u, v):
        return self.graph.distance(u, v)

    def ball(self, x, s):
        return frozenset(y for y in self.graph.ball(x, s) if y in self.window)

    def is_safe(self, x, s):
        return self.graph.is_safe(x, s)

    def enclosing_scale(self, pairs):
        return self.graph.enclosing_scale(pairs)

    def default_scale(self, size):
        return MetricScale(size)


# --------------------------------------------------------------------------
# generators


def make_line(n: int, margin: int | None = None) -> Graph:
    """Window ``[-n, n]`` of the integer line."""
    if n < 1:
        raise ValueError("n must be positive")
    verts = list(range(-n, n + 1))
    return Graph(verts, [(i, i + 1) for i in range(-n, n)], {-n, n},
                 n // 2 if margin is None else margin, f"line({n})")


def make_interval(lo: int, hi: int) -> Graph:
    """``[lo, hi]`` as a metric subspace of the integers: no truncation boundary."""
    if hi < lo:
        raise ValueError("empty interval")
    verts = list(range(lo, hi + 1))
    return Graph(verts, [(i, i + 1) for i in range(lo, hi)], (), 0, f"[{lo}, {hi}]")


def make_ray(n: int, margin: int | None = None) -> Graph:
    """Window ``[0, n]`` of the natural-number ray."""
    if n < 1:
        raise ValueError("n must be positive")
    return Graph(list(range(n + 1)), [(i, i + 1) for i in range(n)], {n},
                 n // 2 if margin is None else margin, f"ray({n})")


def tripod_vertex(arm: int, pos: int, length: int) -> int:
    """Integer label of the ``pos``-th vertex (1-based) of arm 0, 1 or 2."""
    if pos == 0:
        return 0
    return 1 + arm * length + (pos - 1)


def make_tripod(arm: int, margin: int | None = None, truncated: bool = True) -> Graph:
    """Three rays of length ``arm`` glued at vertex 0.

    With ``truncated`` the arm tips form the boundary (a window onto the
    infinite tripod); otherwise the graph is the finite tree itself.
    """
    if arm < 1:
        raise ValueError("arm must be positive")
    verts = list(range(3 * arm + 1))
    edges = []
    for a in range(3):
        for p in range(arm):
            edges.append((tripod_vertex(a, p, arm), tripod_vertex(a, p + 1, arm)))
    tips = {tripod_vertex(a, arm, arm) for a in range(3)} if truncated else set()
    return Graph(verts, edges, tips, arm // 2 if margin is None else margin, f"tripod({arm})")


def make_grid(n: int, margin: int | None = None) -> Graph:
    """``(2n+1) x (2n+1)`` window of the square lattice, vertices ``(x, y)``."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = range(-n, n + 1)
    verts = [(x, y) for x in rng for y in rng]
    edges = [((x, y), (x + 1, y)) for x in range(-n, n) for y in rng]
    edges += [((x, y), (x, y + 1)) for x in rng for y in range(-n, n)]
    bnd = [(x, y) for x, y in verts if max(abs(x), abs(y)) == n]
    return Graph(verts, edges, bnd, n // 2 if margin is None else margin, f"grid({n})")


def make_complete(n: int) -> Graph:
    verts = list(range(n))
    return Graph(verts, [(i, j) for i in verts for j in verts if i < j], (), 0, f"K{n}")


def parse_edge_list(text: str, name: str = "edges") -> Graph:
    """Read ``u v`` lines; ``#`` starts a comment.

    A line ``#boundary v1 v2 ...`` marks truncation vertices, ``#margin M``
    sets the window margin.  Vertices are integers, ordered numerically.
    """
    edges, verts, boundary, margin = [], set(), set(), 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            head, *rest = line[1:].split()
            try:
                if head == "boundary":
                    boundary |= {int(t) for t in rest}
                elif head == "margin":
                    margin = int(rest[0])
            except (ValueError, IndexError):
                raise ValueError(f"line {lineno}: malformed directive {line!r}") from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: vertex names must be integers") from None
        if u == v:
            raise ValueError(f"line {lineno}: loop at {u}")
        edges.append((u, v))
        verts |= {u, v}
    verts |= boundary
    if not verts:
        raise ValueError("edge list is empty")
    return Graph(sorted(verts), edges, boundary, margin, name)


def format_edge_list(g: Graph) -> str:
    lines = []
    if g.boundary:
        lines.append("#boundary " + " ".join(str(v) for v in sorted(g.boundary)))
    lines.append(f"#margin {g.window.margin}")
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# paths, spheres, rays


@dataclass(frozen=True)
class GeodesicPath:
    vertices: tuple

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def __getitem__(self, i):
        return self.vertices[i]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


@dataclass(frozen=True)
class RayPrefix:
    vertices: tuple

    def __getitem__(self, i):
        return self.vertices[i]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def bfs_distance(g: Graph, u, v):
    """Path distance; ``INFINITE`` for vertices in different components."""
    return g.distance(u, v)


def geodesic(g: Graph, u, v) -> GeodesicPath:
    """Shortest path from ``u`` to ``v``, always stepping to the first eligible neighbour."""
    to_v = g.distances_from(v)
    if u not in to_v:
        raise DomainError(f"{u!r} and {v!r} are not connected")
    path = [u]
    while path[-1] != v:
        here = to_v[path[-1]]
        path.append(next(w for w in g.adj[path[-1]] if to_v.get(w) == here - 1))
    return GeodesicPath(tuple(path))


def is_geodesic(g: Graph, path: Sequence) -> bool:
    m = len(path) - 1
    if m < 0:
        return False
    if any(b not in g.adj[a] for a, b in zip(path, path[1:])):
        return False
    return g.distance(path[0], path[-1]) == m


def is_ray(g: Graph, seq: Sequence) -> bool:
    return all(g.distance(seq[i], seq[j]) == j - i
               for i in range(len(seq)) for j in range(i + 1, len(seq)))


def sphere(g: Graph, v, n: int) -> frozenset:
    if n > g.depth(v):
        raise DomainError(f"sphere of radius {n} around {v!r} reaches past the window")
    return frozenset(u for u, d in g.distances_from(v).items() if d == n)


def ball_graph(g: Graph, v, r: int) -> frozenset:
    if r > g.depth(v):
        raise DomainError(f"ball of radius {r} around {v!r} reaches past the window")
    return frozenset(u for u, d in g.distances_from(v).items() if d <= r)


@dataclass(frozen=True)
class SphereProfile:
    center: Hashable
    sizes: tuple


def sphere_profile(g: Graph, v, horizon: int) -> SphereProfile:
    return SphereProfile(v, tuple(len(sphere(g, v, n)) for n in range(horizon + 1)))


def sphere_profile_bounded(g: Graph, v, horizon: int) -> tuple[bool, int]:
    """Whether sphere sizes stop growing up to ``horizon``, with the observed maximum.

    The profile counts as bounded when the largest sphere over the outer half
    of ``1..horizon`` is no larger than the largest over the inner half.
    """
    if horizon < 2:
        raise DomainError("horizon must be at least 2")
    sizes = sphere_profile(g, v, horizon).sizes[1:]
    half = (len(sizes) + 1) // 2
    inner, outer = max(sizes[:half]), max(sizes[half:])
    return outer <= inner, max(sizes)


def ends_estimate(g: Graph, v, r: int) -> int:
    """Components of the window minus ``B(v, r)`` that reach the boundary."""
    if g.depth(v) < 2 * r:
        raise DomainError(f"depth {g.depth(v)} of {v!r} is below 2r = {2 * r}")
    inner = ball_graph(g, v, r)
    seen: set = set()
    count = 0
    for s in g.vertices:
        if s in inner or s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if w not in inner and w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        if comp & g.boundary:
            count += 1
    return count


def find_ray(g: Graph, v, length: int) -> RayPrefix | None:
    """A geodesic ray prefix of ``length`` edges from ``v``, or ``None``."""
    dist = g.distances_from(v)
    far = [u for u in g.vertices if dist.get(u, -1) >= length]
    if not far:
        return None
    path = geodesic(g, v, far[0])
    return RayPrefix(path.vertices[:length + 1])


# --------------------------------------------------------------------------
# shape classification

BOUNDED, LINE_N, LINE_Z, OTHER = "Bounded", "LineN", "LineZ", "Other"
MIN_DEPTH = 4


@dataclass
class ShapeClass:
    kind: str
    evidence: dict = field(default_factory=dict)

    def __str__(self):
        return self.kind


def deepest_vertex(g: Graph):
    return max(g.vertices, key=lambda v: (g.depth(v), -g.window.index(v)))


def classify_shape(g: Graph) -> ShapeClass:
    """Bounded / coarse half-line / coarse line / other, on a window.

    A line class is only claimed when sphere sizes around the deepest vertex
    stay bounded *and* the ends count matches.
    """
    if not g.boundary:
        return ShapeClass(BOUNDED, {"finite": True, "vertices": len(g.vertices),
                                    "diameter": max(max(g.distances_from(v).values())
                                                    for v in g.vertices)})
    v = deepest_vertex(g)
    depth = int(g.depth(v))
    if depth < MIN_DEPTH:
        return ShapeClass(OTHER, {"inconclusive": True, "center": v, "depth": depth})
    bounded, k = sphere_profile_bounded(g, v, depth)
    r = depth // 2
    ends = ends_estimate(g, v, r)
    evidence = {"center": v, "depth": depth, "spheres_bounded": bounded,
                "sphere_bound": k, "ends": ends, "ends_radius": r}
    if bounded and ends == 1:
        return ShapeClass(LINE_N, evidence)
    if bounded and ends == 2:
        return ShapeClass(LINE_Z, evidence)
    if ends == 0:
        evidence["inconclusive"] = True
    return ShapeClass(OTHER, evidence)


# --------------------------------------------------------------------------
# the ray-path-ray asymorphism onto the integers


@dataclass
class Claim5Map:
    """Bijection of ``C u T u A`` onto an integer interval, with its constants."""

    values: dict
    k: int
    p: int
    A: tuple
    C: tuple
    T: tuple

    def __call__(self, x):
        return self.values[x]

    def inverse(self) -> dict:
        return {n: x for x, n in self.values.items()}


def claim5_bijection(g: Graph, A: Sequence, C: Sequence, T: Sequence,
                     H: Iterable | None = None) -> Claim5Map:
    """Unroll two rays joined by a geodesic onto consecutive integers.

    ``T`` runs from ``A[0]`` to ``C[0]`` (``k`` edges).  Points are numbered
    along ``C`` reversed, then ``T`` from the ``C`` end, then ``A``:
    ``c_i -> -i``, ``t_j -> k - j``, ``a_i -> k + i``.  ``H`` is a finite
    separating set; ``p = max d(a_0, h), d(c_0, h)`` over ``h`` in ``H``.
    """
    A, C, T = tuple(A), tuple(C), tuple(T)
    if not A or not C or not T:
        raise ValueError("rays and path must be non-empty")
    if set(A) & set(C):
        raise ValueError("assumption violated: A and C intersect")
    if T[0] != A[0] or T[-1] != C[0]:
        raise ValueError("assumption violated: T must run from a_0 to c_0")
    if set(T) & set(A) != {A[0]}:
        raise ValueError("assumption violated: T meets A outside a_0")
    if set(T) & set(C) != {C[0]}:
        raise ValueError("assumption violated: T meets C outside c_0")
    if not is_geodesic(g, T):
        raise ValueError("assumption violated: T is not a geodesic")
    for name, ray in (("A", A), ("C", C)):
        if not is_ray(g, ray):
            raise ValueError(f"assumption violated: {name} is not a ray prefix")
    k = len(T) - 1
    values = {}
    for i, c in enumerate(C):
        values[c] = -i
    for j, t in enumerate(T):
        values[t] = k - j
    for i, a in enumerate(A):
        values[a] = k + i
    H = set(T) if H is None else set(H)
    p = max(max(g.distance(A[0], h), g.distance(C[0], h)) for h in H)
    return Claim5Map(values, k, int(p), A, C, T)


def separates(g: Graph, H: Iterable, A: Sequence, C: Sequence) -> bool:
    """True iff every path (hence every geodesic) from ``A`` to ``C`` meets ``H``."""
    H = set(H)
    start = [a for a in A if a not in H]
    seen = set(start)
    queue = deque(start)
    targets = set(C) - H
    while queue:
        u = queue.popleft()
        if u in targets:
            return False
        for w in g.adj[u]:
            if w not in H and w not in seen:
                seen.add(w)
                queue.append(w)
    return True


def claim5_distortion(g: Graph, phi: Claim5Map) -> dict:
    """Two-sided distortion of ``phi`` over all pairs of its domain.

    ``upper`` holds iff ``d(x, y) <= |phi(x) - phi(y)|`` everywhere;
    ``lower`` iff ``d(a_m, c_n) >= |phi(a_m) - phi(c_n)| - k - 2p`` for
    ``m, n > p``.  The worst slack of each is reported.
    """
    pts = list(phi.values)
    upper_viol = [(x, y) for i, x in enumerate(pts) for y in pts[i + 1:]
                  if g.distance(x, y) > abs(phi(x) - phi(y))]
    lower_slack = None
    lower_viol = []
    for m, a in enumerate(phi.A):
        for n, c in enumerate(phi.C):
            if m > phi.p and n > phi.p:
                slack = g.distance(a, c) - (abs(phi(a) - phi(c)) - phi.k - 2 * phi.p)
                lower_slack = slack if lower_slack is None else min(lower_slack, slack)
                if slack < 0:
                    lower_viol.append((a, c))
    return {"upper": not upper_viol, "upper_violations": upper_viol,
            "lower": not lower_viol, "lower_violations": lower_viol,
            "lower_min_slack": lower_slack}


def claim5_coarse_map(g: Graph, phi: Claim5Map) -> tuple[CoarseMap, CoarseMap]:
    """``phi`` and its inverse as coarse maps between the subspace and a line window."""
    dom = subspace(g, phi.values, "C+T+A")
    lo, hi = min(phi.values.values()), max(phi.values.values())
    line = Graph(list(range(lo, hi + 1)), [(i, i + 1) for i in range(lo, hi)], (), 0,
                 f"line[{lo},{hi}]")
    inv = phi.inverse()
    return (CoarseMap(phi, dom, line, "claim5"), CoarseMap(inv.__getitem__, line, dom, "claim5^-1"))
