"""Selector constructions, the induced tournament, and order checkers."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core import CoarseSpace, MetricScale, Scale, hyperpoint, scale_contains
from .groups import CosetTower, VirtuallyZ


def max_selector(A: Iterable) -> int:
    return max(hyperpoint(A))


def min_selector(A: Iterable) -> int:
    return min(hyperpoint(A))


def well_order_selector(tower: CosetTower, A: Iterable):
    """The element of ``A`` whose coset-tower sequence is least."""
    return min(hyperpoint(A), key=tower.order_key)


def tower_selector(tower: CosetTower) -> Callable:
    key = tower.order_key
    return lambda A: min(A, key=key)


def order_selector(order: "LinearOrder", pick: str = "max") -> Callable:
    """Max (or min) with respect to a linear order on the window."""
    rank = order.rank
    if pick == "max":
        return lambda A: max(A, key=rank.__getitem__)
    return lambda A: min(A, key=rank.__getitem__)


# --------------------------------------------------------------------------
# tournaments


@dataclass
class PrecRelation:
    """``winner[{a, b}]`` is the element chosen from the pair, i.e. the ``<``-smaller."""

    winner: dict

    def prec(self, a, b) -> bool:
        return a != b and self.winner[frozenset((a, b))] == a

    @property
    def points(self) -> list:
        pts = set()
        for p in self.winner:
            pts |= p
        return list(pts)

    def is_tournament(self) -> bool:
        return all(len(p) == 2 and w in p for p, w in self.winner.items())

    def is_transitive(self) -> bool:
        pts = self.points
        for a, b, c in itertools.permutations(pts, 3):
            if self.prec(a, b) and self.prec(b, c) and not self.prec(a, c):
                return False
        return True


def prec_of(f2: Callable, points: Sequence) -> PrecRelation:
    return PrecRelation({frozenset(p): f2(frozenset(p)) for p in itertools.combinations(points, 2)})


def selector_from_prec(prec: PrecRelation) -> Callable:
    return lambda pair: prec.winner[frozenset(pair)]


# --------------------------------------------------------------------------
# linear orders


@dataclass
class LinearOrder:
    """Total order on window points given as an explicit enumeration."""

    sequence: tuple
    provenance: str = "user-supplied"
    rank: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.sequence = tuple(self.sequence)
        self.rank = {x: i for i, x in enumerate(self.sequence)}
        if len(self.rank) != len(self.sequence):
            raise ValueError("order lists a point twice")

    @classmethod
    def from_key(cls, points: Iterable, key: Callable, provenance: str) -> "LinearOrder":
        return cls(tuple(sorted(points, key=key)), provenance)

    def compare(self, x, y) -> int:
        rx, ry = self.rank[x], self.rank[y]
        return (rx > ry) - (rx < ry)

    def less(self, x, y) -> bool:
        return self.rank[x] < self.rank[y]

    def check_total(self, triples: int = 10_000) -> bool:
        """Antisymmetry, totality and transitivity of ``compare`` on the window."""
        pts = self.sequence
        for x, y in itertools.combinations(pts, 2):
            if self.compare(x, y) != -self.compare(y, x) or self.compare(x, y) == 0:
                return False
        count = 0
        for x, y, z in itertools.permutations(pts, 3):
            if self.less(x, y) and self.less(y, z) and not self.less(x, z):
                return False
            count += 1
            if count >= triples:
                break
        return True


def natural_order(points: Iterable) -> LinearOrder:
    return LinearOrder.from_key(points, lambda x: x, "natural")


def zigzag_order(points: Iterable) -> LinearOrder:
    """``0 < -1 < 1 < -2 < 2 < ...`` on integers."""
    return LinearOrder.from_key(points, lambda x: 2 * x if x >= 0 else -2 * x - 1, "zigzag")


def virtually_z_compare(x: tuple, y: tuple) -> int:
    """``f_i a^k < f_j a^n`` iff ``k < n``, or ``k = n`` and ``i < j``."""
    kx, ky = (x[1], x[0]), (y[1], y[0])
    return (kx > ky) - (kx < ky)


def virtually_z_order(points: Iterable) -> LinearOrder:
    return LinearOrder.from_key(points, lambda g: (g[1], g[0]), "virtually-z")


def tower_order(tower: CosetTower, points: Iterable | None = None) -> LinearOrder:
    pts = tower.elements if points is None else points
    return LinearOrder.from_key(pts, tower.order_key, "tower well-order")


def virtually_z_interval(group: VirtuallyZ, lo: int, hi: int) -> frozenset:
    """The order interval ``[f_0 a^lo, f_m a^hi]``."""
    return frozenset((i, k) for k in range(lo, hi + 1) for i in range(group.m + 1))


# --------------------------------------------------------------------------
# intervality and compatibility


@dataclass
class OrderCheck:
    ok: bool
    witness: dict | None = None
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _gap(ball: frozenset, order: LinearOrder):
    """First window point strictly inside the order hull of ``ball`` but outside it."""
    ranks = [order.rank[y] for y in ball if y in order.rank]
    lo, hi = min(ranks), max(ranks)
    for r in range(lo, hi + 1):
        y = order.sequence[r]
        if y not in ball:
            return y
    return None


def is_interval_entourage(space: CoarseSpace, s: Scale, order: LinearOrder) -> OrderCheck:
    """Every safe ball ``E_s[x]`` is an order interval containing ``x``."""
    checked = 0
    for x in space.safe_region(s):
        b = space.ball(x, s)
        y = _gap(b, order)
        if y is not None:
            return OrderCheck(False, {"x": x, "gap": y, "scale": s})
        checked += 1
    return OrderCheck(True, certificate={"checked": checked})


def _hull(ball: frozenset, order: LinearOrder) -> list:
    ranks = [order.rank[y] for y in ball]
    return list(order.sequence[min(ranks): max(ranks) + 1])


def is_compatible_order(space: CoarseSpace, scales: Sequence[Scale], order: LinearOrder,
                        candidates: Sequence[Scale] | None = None) -> OrderCheck:
    """For each ``E`` find ``F >= E`` whose balls contain the order hull of ``E[x]``.

    That hull condition is equivalent to the definition: every ``y`` outside
    ``F[x]`` lies on the same side of all of ``E[x]`` as of ``x``.  ``F`` is
    searched among ``candidates`` (default: ``scales``); on a window the
    verdict only holds up to the largest candidate.
    """
    candidates = list(scales if candidates is None else candidates)
    cert = {}
    for E in scales:
        worst = None
        found = None
        hulls = {x: _hull(space.ball(x, E), order) for x in space.safe_region(E)}
        for F in candidates:
            if not scale_contains(F, E):
                continue
            bad = None
            for x, hull in hulls.items():
                Fx = space.ball(x, F)
                miss = next((y for y in hull if y not in Fx), None)
                if miss is not None:
                    bad = {"E": E, "F": F, "x": x, "y": miss}
                    break
            if bad is None:
                found = F
                break
            worst = bad
        if found is None:
            witness = worst or {"E": E, "reason": "no candidate scale contains E"}
            return OrderCheck(False, witness, cert)
        cert[E] = found
    return OrderCheck(True, None, cert)


def metric_ladder(limit: int) -> list[MetricScale]:
    return [MetricScale(r) for r in range(limit + 1)]
