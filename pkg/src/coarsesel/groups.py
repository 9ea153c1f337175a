"""Catalog groups with exact normal forms, Cayley graphs and coset towers.

Normal forms:

* ``IntLine``       -- Python ints under addition.
* ``VirtuallyZ``    -- pairs ``(i, k)`` meaning ``f_i a^k``; ``a`` generates a
  normal infinite cyclic subgroup, ``f_0 = e, ..., f_m`` is a transversal with
  ``f_i^-1 a f_i = a^(sign_i)`` and ``f_i f_j = f_sigma(i,j) a^cocycle(i,j)``.
* ``FiniteGroup``   -- indices into a multiplication table.
* ``SumZ2``         -- the direct sum of countably many copies of Z/2 as bitmasks.
* ``FinitarySymmetric`` -- finitely supported permutations of the naturals as
  image tuples with trailing fixed points dropped; ``(p*q)(x) = p(q(x))``.
"""
from __future__ import annotations

import itertools
import json
import random
from typing import Callable, Hashable, Iterable, Sequence

from .core import CoarseSpace, DomainError, GroupScale, MetricScale, Scale, Window
from .graphs import Graph


class Group:
    name = "group"

    def identity(self):
        raise NotImplementedError

    def multiply(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def key(self, g):
        return g

    def sort(self, elems: Iterable) -> list:
        return sorted(elems, key=self.key)

    def product(self, elems: Iterable):
        out = self.identity()
        for g in elems:
            out = self.multiply(out, g)
        return out

    def power(self, g, n: int):
        base = g if n >= 0 else self.inverse(g)
        out = self.identity()
        for _ in range(abs(n)):
            out = self.multiply(out, base)
        return out

    def __repr__(self):
        return self.name


# variants of a group description, and their element normal forms:
# int for IntLine and SumZ2, (i, k) for f_i a^k, table index, trimmed permutation tuple
GroupSpec = Group
GroupElement = Hashable


class IntLine(Group):
    name = "Z"

    def identity(self):
        return 0

    def multiply(self, g, h):
        return g + h

    def inverse(self, g):
        return -g

    def interval(self, lo: int, hi: int) -> list:
        return list(range(lo, hi + 1))


class VirtuallyZ(Group):
    def __init__(self, signs: Sequence[int], sigma: Sequence[Sequence[int]],
                 cocycle: Sequence[Sequence[int]], name: str = "virtually-Z"):
        self.signs = tuple(int(s) for s in signs)
        self.sigma = tuple(tuple(int(x) for x in row) for row in sigma)
        self.cocycle = tuple(tuple(int(x) for x in row) for row in cocycle)
        self.name = name
        self._validate()
        self._inv_index = {}
        for i in range(self.m + 1):
            j = next(j for j in range(self.m + 1) if self.sigma[i][j] == 0)
            self._inv_index[i] = j

    @property
    def m(self) -> int:
        return len(self.signs) - 1

    def _validate(self):
        size = len(self.signs)
        if size == 0 or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be a non-empty list of +1/-1")
        if self.signs[0] != 1:
            raise ValueError("f_0 must be the identity (sign +1)")
        for tab, what in ((self.sigma, "sigma"), (self.cocycle, "cocycle")):
            if len(tab) != size or any(len(row) != size for row in tab):
                raise ValueError(f"{what} must be a {size}x{size} table")
        for i in range(size):
            if sorted(self.sigma[i]) != list(range(size)):
                raise ValueError(f"sigma row {i} is not a permutation")
            if self.sigma[0][i] != i or self.sigma[i][0] != i:
                raise ValueError("f_0 must act as the identity in sigma")
            if self.cocycle[0][i] != 0 or self.cocycle[i][0] != 0:
                raise ValueError("cocycle must vanish on f_0")
            for j in range(size):
                if self.signs[self.sigma[i][j]] != self.signs[i] * self.signs[j]:
                    raise ValueError(f"signs are not multiplicative at ({i}, {j})")
        rng = random.Random(0)
        for _ in range(200):
            x, y, z = (self.random_element(rng, 6) for _ in range(3))
            if self.multiply(self.multiply(x, y), z) != self.multiply(x, self.multiply(y, z)):
                raise ValueError(f"tables are not associative at {x}, {y}, {z}")

    def random_element(self, rng: random.Random, radius: int):
        return (rng.randrange(self.m + 1), rng.randint(-radius, radius))

    def identity(self):
        return (0, 0)

    def multiply(self, g, h):
        # (f_i a^k)(f_j a^n) = f_i f_j a^(sign_j k + n)
        (i, k), (j, n) = g, h
        return (self.sigma[i][j], self.cocycle[i][j] + self.signs[j] * k + n)

    def inverse(self, g):
        i, k = g
        j = self._inv_index[i]
        return (j, -self.cocycle[i][j] - self.signs[j] * k)

    def key(self, g):
        return (g[1], g[0])

    def a(self):
        return (0, 1)

    def transversal(self) -> list:
        return [(i, 0) for i in range(self.m + 1)]

    def d_constant(self) -> int:
        """Least ``d`` with every ``f_i f_j`` in ``F {a^-d, ..., a^d}``."""
        return max(abs(c) for row in self.cocycle for c in row)

    def window_points(self, lo: int, hi: int) -> list:
        return [(i, k) for k in range(lo, hi + 1) for i in range(self.m + 1)]

    def level_scale(self, n: int) -> GroupScale:
        """``F_n = F {a^-n, ..., a^n}``."""
        return GroupScale(self, frozenset((i, j) for i in range(self.m + 1) for j in range(-n, n + 1)))


def dinf() -> VirtuallyZ:
    """Infinite dihedral group: ``f_1`` a reflection inverting ``a``."""
    return VirtuallyZ([1, -1], [[0, 1], [1, 0]], [[0, 0], [0, 0]], "Dinf")


def z_cross_zk(k: int = 3) -> VirtuallyZ:
    """``Z x Z/k`` with ``f_i`` the ``i``-th power of a central element of order ``k``."""
    sigma = [[(i + j) % k for j in range(k)] for i in range(k)]
    return VirtuallyZ([1] * k, sigma, [[0] * k for _ in range(k)], f"Z x Z{k}")


def z_over_nz(n: int = 2) -> VirtuallyZ:
    """``Z`` viewed as a finite extension of ``nZ`` (nonzero cocycle: carries)."""
    sigma = [[(i + j) % n for j in range(n)] for i in range(n)]
    cocycle = [[(i + j) // n for j in range(n)] for i in range(n)]
    return VirtuallyZ([1] * n, sigma, cocycle, f"Z over {n}Z")


class FiniteGroup(Group):
    def __init__(self, table: Sequence[Sequence[int]], name: str = "finite"):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.name = name
        n = len(self.table)
        if n == 0 or any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be square and non-empty")
        for i, row in enumerate(self.table):
            if sorted(row) != list(range(n)):
                raise ValueError(f"row {i} is not a permutation of 0..{n - 1}")
        for j in range(n):
            if sorted(self.table[i][j] for i in range(n)) != list(range(n)):
                raise ValueError(f"column {j} is not a permutation of 0..{n - 1}")
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if not ids:
            raise ValueError("table has no identity")
        self._e = ids[0]
        for x, y, z in itertools.product(range(n), repeat=3):
            if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                raise ValueError(f"table is not associative at ({x}, {y}, {z})")
        self._inv = {x: next(y for y in range(n) if self.table[x][y] == self._e) for x in range(n)}

    @property
    def order(self) -> int:
        return len(self.table)

    def elements(self) -> list:
        return list(range(self.order))

    def identity(self):
        return self._e

    def multiply(self, g, h):
        return self.table[g][h]

    def inverse(self, g):
        return self._inv[g]


def klein_four() -> FiniteGroup:
    return FiniteGroup([[a ^ b for b in range(4)] for a in range(4)], "Z2^2")


class SumZ2(Group):
    name = "sum Z2"

    def identity(self):
        return 0

    def multiply(self, g, h):
        return g ^ h

    def inverse(self, g):
        return g


class FinitarySymmetric(Group):
    name = "Sym(N) finitary"

    @staticmethod
    def _trim(p) -> tuple:
        p = list(p)
        while p and p[-1] == len(p) - 1:
            p.pop()
        return tuple(p)

    def identity(self):
        return ()

    def image(self, p, x: int) -> int:
        return p[x] if x < len(p) else x

    def multiply(self, p, q):
        n = max(len(p), len(q))
        return self._trim(self.image(p, self.image(q, x)) for x in range(n))

    def inverse(self, p):
        out = list(range(len(p)))
        for x, y in enumerate(p):
            out[y] = x
        return self._trim(out)

    def transposition(self, i: int, j: int):
        n = max(i, j) + 1
        p = list(range(n))
        p[i], p[j] = p[j], p[i]
        return self._trim(p)

    def key(self, p):
        return (len(p), p)

    def symmetric_group(self, n: int) -> list:
        """All permutations moving only ``0..n-1``."""
        return [self._trim(p) for p in itertools.permutations(range(n))]


# --------------------------------------------------------------------------
# group windows


class GroupWindow(CoarseSpace):
    """Finite set of group elements with the finitary coarse structure."""

    def __init__(self, group: Group, points: Iterable, margin: int = 0,
                 ladder: Callable[[int], GroupScale] | None = None,
                 generators: Iterable | None = None, name: str | None = None):
        self.group = group
        self.window = Window(tuple(group.sort(set(points))), margin)
        self._ladder = ladder
        self.generators = None if generators is None else GroupScale.symmetric(group, generators)
        self.name = name or f"{group.name} window"
        self._balls: dict = {}
        self._inv_scale: dict = {}

    def __repr__(self):
        return f"GroupWindow({self.name!r}, |W|={len(self.points)})"

    def _inverses(self, s: GroupScale) -> tuple:
        inv = self._inv_scale.get(s)
        if inv is None:
            inv = tuple(self.group.inverse(f) for f in s.elements)
            self._inv_scale[s] = inv
        return inv

    def full_ball(self, x, s: GroupScale) -> frozenset:
        if not isinstance(s, GroupScale):
            raise TypeError("group windows take group scales")
        key = (x, s)
        b = self._balls.get(key)
        if b is None:
            mul = self.group.multiply
            b = frozenset(mul(f, x) for f in self._inverses(s))
            self._balls[key] = b
        return b

    def ball(self, x, s):
        if isinstance(s, MetricScale):
            return self._cayley().ball(x, s)
        key = (x, s, "in")
        b = self._balls.get(key)
        if b is None:
            full = self.full_ball(x, s)
            b = frozenset(y for y in full if y in self.window)
            self._balls[key] = b
            self._balls[(x, s, "safe")] = len(b) == len(full)
        return b

    def is_safe(self, x, s):
        if isinstance(s, MetricScale):
            return self._cayley().is_safe(x, s)
        key = (x, s, "safe")
        if key not in self._balls:
            self.ball(x, s)
        return self._balls[key]

    def enclosing_scale(self, pairs) -> GroupScale:
        mul, inv = self.group.multiply, self.group.inverse
        return GroupScale(self.group, frozenset(mul(y, inv(z)) for y, z in pairs))

    def default_scale(self, size: int) -> Scale:
        if self._ladder is None:
            if self.generators is None:
                raise TypeError(f"{self.name} has no scale ladder")
            return MetricScale(size)
        return self._ladder(size)

    def _cayley(self) -> Graph:
        if self.generators is None:
            raise TypeError(f"{self.name} has no generating set, hence no word metric")
        g = self.__dict__.get("_cay")
        if g is None:
            g = cayley_graph(self.group, self.generators.elements - {self.group.identity()},
                             self.points, self.window.margin)
            self._cay = g
        return g

    def distance(self, x, y):
        return self._cayley().distance(x, y)


def finitary_ball(group: Group, x, F: GroupScale) -> frozenset:
    """``E_F[x] = {y : x in F y} = F^-1 x``; equals ``F x`` for symmetric ``F``."""
    return frozenset(group.multiply(group.inverse(f), x) for f in F.elements)


def cayley_graph(group: Group, S: Iterable, points: Iterable, margin: int = 0,
                 name: str | None = None) -> Graph:
    """Edges ``{x, y}`` with ``x != y`` and ``x y^-1 in S``, restricted to ``points``."""
    S = set(S)
    e = group.identity()
    S.discard(e)
    for s in S:
        if group.inverse(s) not in S:
            raise ValueError(f"generating set is not symmetric: {s!r} lacks its inverse")
    pts = group.sort(set(points))
    inside = set(pts)
    edges, boundary = [], set()
    for x in pts:
        for s in S:
            y = group.multiply(s, x)  # x y^-1 = s^-1, and S is symmetric
            if y in inside:
                edges.append((x, y))
            else:
                boundary.add(x)
    return Graph(pts, edges, boundary, margin, name or f"Cay({group.name})")


# --------------------------------------------------------------------------
# coset towers


class CosetTower:
    """Finite chain ``{e} = G_0 < G_1 < ... < G_L`` with right transversals.

    ``reps[n]`` lists ``R_n`` in the level order ``<=_n``; ``e`` comes first
    and ``G_{n+1}`` is the disjoint union of the cosets ``G_n r``.
    """

    def __init__(self, group: Group, subgroups: Sequence[Iterable], reps: Sequence[Sequence] | None = None,
                 name: str = "tower"):
        self.group = group
        self.name = name
        self.subgroups = [frozenset(G) for G in subgroups]
        e = group.identity()
        if not self.subgroups or self.subgroups[0] != {e}:
            raise ValueError("the tower must start at the trivial subgroup")
        for n, (G, H) in enumerate(zip(self.subgroups, self.subgroups[1:])):
            if not G < H:
                raise ValueError(f"G_{n} is not a proper subgroup of G_{n + 1}")
        if reps is None:
            reps = [self._canonical_reps(n) for n in range(self.levels)]
        self.reps = [list(R) for R in reps]
        if len(self.reps) != self.levels:
            raise ValueError("need one representative system per level")
        self._rep_of: list[dict] = []
        self._rank: list[dict] = []
        for n, R in enumerate(self.reps):
            if not R or R[0] != e:
                raise ValueError(f"R_{n} must list the identity first")
            rep_of = {}
            for r in R:
                for h in self.subgroups[n]:
                    g = group.multiply(h, r)
                    if g in rep_of:
                        raise ValueError(f"R_{n}: cosets of {rep_of[g]!r} and {r!r} overlap")
                    rep_of[g] = r
            if set(rep_of) != self.subgroups[n + 1]:
                raise ValueError(f"R_{n} does not cover G_{n + 1}")
            self._rep_of.append(rep_of)
            self._rank.append({r: i for i, r in enumerate(R)})
        self._level = {}
        for n in range(self.levels, -1, -1):
            for g in self.subgroups[n]:
                self._level[g] = n
        self._keys = {g: self._order_key(g) for g in self.subgroups[-1]}

    def _canonical_reps(self, n: int) -> list:
        seen, reps = set(), []
        for g in self.group.sort(self.subgroups[n + 1]):
            if g in seen:
                continue
            reps.append(g)
            seen |= {self.group.multiply(h, g) for h in self.subgroups[n]}
        return reps

    @property
    def levels(self) -> int:
        return len(self.subgroups) - 1

    @property
    def elements(self) -> list:
        return self.group.sort(self.subgroups[-1])

    def level(self, g) -> int:
        """Least ``n`` with ``g`` in ``G_n``."""
        try:
            return self._level[g]
        except KeyError:
            raise DomainError(f"{g!r} lies outside the materialized tower") from None

    def factorize(self, g) -> list[tuple[int, object]]:
        """Pairs ``(n, r_n)``, highest level first; ``g`` is their product lowest level first."""
        out = []
        mul, inv = self.group.multiply, self.group.inverse
        while True:
            lvl = self.level(g)
            if lvl == 0:
                return out
            r = self._rep_of[lvl - 1][g]
            out.append((lvl - 1, r))
            g = mul(g, inv(r))

    def encode(self, g) -> tuple:
        seq = [self.group.identity()] * self.levels
        for n, r in self.factorize(g):
            seq[n] = r
        return tuple(seq)

    def decode(self, seq: Sequence):
        return self.group.product(seq)

    def _order_key(self, g) -> tuple:
        seq = self.encode(g)
        return tuple(self._rank[n][seq[n]] for n in range(self.levels - 1, -1, -1))

    def order_key(self, g) -> tuple:
        try:
            return self._keys[g]
        except KeyError:
            raise DomainError(f"{g!r} lies outside the materialized tower") from None

    def compare(self, x: Sequence, y: Sequence) -> int:
        """Compare two sequences at their highest differing level."""
        for n in range(self.levels - 1, -1, -1):
            if x[n] != y[n]:
                return -1 if self._rank[n][x[n]] < self._rank[n][y[n]] else 1
        return 0

    def level_scale(self, n: int) -> GroupScale:
        return GroupScale(self.group, self.subgroups[min(n, self.levels)])

    def window(self, level: int | None = None, margin: int = 0) -> GroupWindow:
        lvl = self.levels if level is None else level
        return GroupWindow(self.group, self.subgroups[lvl], margin, self.level_scale,
                           name=f"{self.name} G_{lvl}")


def sum_z2_tower(levels: int) -> CosetTower:
    """Coordinate tower: ``G_n`` spanned by ``e_0..e_{n-1}``, ``R_n = {0, e_n}``."""
    grp = SumZ2()
    subgroups = [frozenset(range(1 << n)) for n in range(levels + 1)]
    reps = [[0, 1 << n] for n in range(levels)]
    return CosetTower(grp, subgroups, reps, f"sum-Z2 tower({levels})")


def sym_tower(levels: int) -> CosetTower:
    """``G_n = Sym{0..n}``, ``R_n = {e} + transpositions (j, n+1)``."""
    grp = FinitarySymmetric()
    subgroups = [frozenset(grp.symmetric_group(n + 1)) for n in range(levels + 1)]
    reps = [[()] + [grp.transposition(j, n + 1) for j in range(n + 1)] for n in range(levels)]
    return CosetTower(grp, subgroups, reps, f"sym tower({levels})")


def finite_tower(group: FiniteGroup) -> CosetTower:
    return CosetTower(group, [{group.identity()}, set(group.elements())], None, f"{group.name} tower")


def tower_factorize(tower: CosetTower, g) -> list[tuple[int, object]]:
    return tower.factorize(g)


def encode_h(tower: CosetTower, g) -> tuple:
    return tower.encode(g)


def well_order_compare(tower: CosetTower, x: Sequence, y: Sequence) -> int:
    return tower.compare(x, y)


# --------------------------------------------------------------------------
# config files

CATALOG = ("z", "dinf", "z-cross-zk", "sum-z2", "sym-tower")


def load_group_spec(text: str):
    """Parse a JSON group config; returns a ``Group`` or a ``CosetTower``.

    Variants: ``{"variant": "int-line"}``, ``{"variant": "virtually-z",
    "signs": [...], "sigma": [[...]], "cocycle": [[...]]}``, ``{"variant":
    "finite", "table": [[...]]}`` and ``{"variant": "tower", "kind":
    "sum-z2" | "sym", "levels": L}``.
    """
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(cfg, dict) or "variant" not in cfg:
        raise ValueError("line 1: config must be an object with a 'variant' key")
    variant = cfg["variant"]
    name = cfg.get("name", variant)
    if variant == "int-line":
        return IntLine()
    if variant == "virtually-z":
        return VirtuallyZ(cfg["signs"], cfg["sigma"], cfg["cocycle"], name)
    if variant == "finite":
        return FiniteGroup(cfg["table"], name)
    if variant == "tower":
        levels = int(cfg.get("levels", 4))
        kind = cfg.get("kind", "sum-z2")
        if kind == "sum-z2":
            return sum_z2_tower(levels)
        if kind == "sym":
            return sym_tower(levels)
        raise ValueError(f"unknown tower kind {kind!r}")
    raise ValueError(f"unknown variant {variant!r}")


def group_associativity_sample(group: Group, elems: Sequence, samples: int = 1000, seed: int = 0) -> bool:
    rng = random.Random(seed)
    mul = group.multiply
    for _ in range(samples):
        x, y, z = (rng.choice(elems) for _ in range(3))
        if mul(mul(x, y), z) != mul(x, mul(y, z)):
            return False
    return True
