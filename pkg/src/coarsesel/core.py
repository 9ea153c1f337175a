"""Scales, balls, hyperspace closeness and macro-uniformity moduli.

Every space is handled through a finite window.  A space exposes its window
points in a canonical order, computes balls truncated to the window and
knows which points are *safe* for a given scale (their full ball stays
inside the window).  Quantified checks only range over safe points.

Group scales follow the right finitary base: the scale ``F`` stands for the
entourage ``{(x, y) : x in F*y}`` so that ``E_F o E_G = E_{FG}`` and
``(E_F)^-1 = E_{F^-1}`` hold exactly.  The ball of ``E_F`` at ``x`` is
``F^-1 * x``, which is ``F * x`` for symmetric ``F``.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

Point = Hashable


class DomainError(ValueError):
    """A point or ball falls outside the window it is evaluated on."""


# --------------------------------------------------------------------------
# scales


@dataclass(frozen=True)
class MetricScale:
    radius: int

    def __post_init__(self):
        if not isinstance(self.radius, (int, np.integer)) or self.radius < 0:
            raise ValueError(f"metric radius must be a non-negative integer, got {self.radius!r}")
        object.__setattr__(self, "radius", int(self.radius))

    def __repr__(self):
        return f"MetricScale({self.radius})"


@dataclass(frozen=True)
class GroupScale:
    """Finite subset ``F`` of a group; the identity is always adjoined."""

    group: Any
    elements: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        elems = frozenset(self.elements) | {self.group.identity()}
        object.__setattr__(self, "elements", elems)

    @classmethod
    def symmetric(cls, group, elements: Iterable) -> "GroupScale":
        elems = set(elements)
        elems |= {group.inverse(g) for g in elems}
        return cls(group, frozenset(elems))

    @property
    def is_symmetric(self) -> bool:
        return all(self.group.inverse(g) in self.elements for g in self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.elements

    def sorted_elements(self) -> list:
        return self.group.sort(self.elements)

    def __repr__(self):
        return f"GroupScale({self.sorted_elements()!r})"


Scale = MetricScale | GroupScale
HyperPoint = frozenset  # non-empty; build with hyperpoint()


class Unbounded:
    """Result of a modulus search that exceeds the window's scale bound."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "unbounded on window"

    def __bool__(self):
        return False


UNBOUNDED = Unbounded()


def compose_scales(s: Scale, t: Scale) -> Scale:
    """Scale of the composed entourage ``E_s o E_t``."""
    if isinstance(s, MetricScale) and isinstance(t, MetricScale):
        return MetricScale(s.radius + t.radius)
    if isinstance(s, GroupScale) and isinstance(t, GroupScale):
        if s.group is not t.group and s.group != t.group:
            raise TypeError("cannot compose scales over different groups")
        mul = s.group.multiply
        return GroupScale(s.group, frozenset(mul(f, g) for f in s.elements for g in t.elements))
    raise TypeError(f"cannot compose {type(s).__name__} with {type(t).__name__}")


def invert_scale(s: Scale) -> Scale:
    if isinstance(s, MetricScale):
        return s
    return GroupScale(s.group, frozenset(s.group.inverse(g) for g in s.elements))


def scale_contains(big: Scale, small: Scale) -> bool:
    """True iff ``E_small`` is a subset of ``E_big``."""
    if isinstance(big, MetricScale) and isinstance(small, MetricScale):
        return small.radius <= big.radius
    if isinstance(big, GroupScale) and isinstance(small, GroupScale):
        return small.elements <= big.elements
    raise TypeError("mixed scale variants")


# --------------------------------------------------------------------------
# windows and spaces


@dataclass(frozen=True)
class Window:
    points: tuple
    margin: int = 0

    def __post_init__(self):
        if self.margin < 0:
            raise ValueError("margin must be non-negative")

    def __contains__(self, x):
        return x in self._index

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {p: i for i, p in enumerate(self.points)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, x) -> int:
        return self._index[x]


class CoarseSpace(ABC):
    """Finite window onto a metric or finitary coarse space."""

    window: Window

    @property
    def points(self) -> tuple:
        return self.window.points

    def __contains__(self, x):
        return x in self.window

    @abstractmethod
    def ball(self, x, s: Scale) -> frozenset:
        """``E_s[x]`` intersected with the window."""

    @abstractmethod
    def is_safe(self, x, s: Scale) -> bool:
        """True iff the untruncated ball ``E_s[x]`` lies inside the window."""

    @abstractmethod
    def enclosing_scale(self, pairs: Iterable[tuple]) -> Scale:
        """Smallest scale ``s`` with ``(y, z) in E_s`` for every given pair."""

    @abstractmethod
    def default_scale(self, size: int) -> Scale:
        """The ``size``-th scale of the space's standard scale ladder."""

    def distance(self, x, y) -> int:
        raise TypeError(f"{type(self).__name__} carries no metric")

    def safe_region(self, s: Scale | None = None) -> tuple:
        if s is None:
            s = self.default_scale(self.window.margin)
        return tuple(x for x in self.points if self.is_safe(x, s))


def ball(space: CoarseSpace, x, s: Scale) -> frozenset:
    if x not in space:
        raise DomainError(f"point {x!r} is outside the window")
    return space.ball(x, s)


def neighbourhood(space: CoarseSpace, A: Iterable, s: Scale) -> frozenset:
    """``E_s[A]``, the union of the balls around the points of ``A``."""
    out: set = set()
    for a in A:
        out |= space.ball(a, s)
    return frozenset(out)


def _require_safe(space: CoarseSpace, A: Iterable, s: Scale):
    for a in A:
        if a not in space:
            raise DomainError(f"point {a!r} is outside the window")
        if not space.is_safe(a, s):
            raise DomainError(f"ball of {s!r} around {a!r} leaves the window")


# --------------------------------------------------------------------------
# hyperspace


def hyperpoint(elements: Iterable) -> frozenset:
    A = frozenset(elements)
    if not A:
        raise ValueError("hyperpoints are non-empty")
    return A


def hausdorff_distance(A: Iterable, B: Iterable, metric: Callable[[Any, Any], int]) -> int:
    A, B = list(A), list(B)
    if not A or not B:
        raise ValueError("Hausdorff distance needs non-empty sets")
    d_ab = max(min(metric(a, b) for b in B) for a in A)
    d_ba = max(min(metric(a, b) for a in A) for b in B)
    return max(d_ab, d_ba)


def hyper_close(space: CoarseSpace, A: Iterable, B: Iterable, s: Scale) -> bool:
    """``(A, B) in exp E_s``: each set lies in the ``s``-neighbourhood of the other."""
    A, B = hyperpoint(A), hyperpoint(B)
    _require_safe(space, A | B, s)
    return A <= neighbourhood(space, B, s) and B <= neighbourhood(space, A, s)


def is_large(space: CoarseSpace, Y: Iterable, s: Scale) -> bool:
    Y = frozenset(Y)
    for y in Y:
        if y not in space:
            raise DomainError(f"point {y!r} is outside the window")
    cover = neighbourhood(space, Y, s)
    return all(x in cover for x in space.safe_region())


def is_selector(f: Callable, family: Iterable) -> bool:
    return all(f(A) in A for A in family)


# --------------------------------------------------------------------------
# coarse maps and moduli


@dataclass
class CoarseMap:
    """A total map on window points (or on hyperpoints of ``domain``)."""

    func: Callable
    domain: CoarseSpace
    codomain: CoarseSpace
    name: str = ""

    def __call__(self, x):
        return self.func(x)


def _bitmask(space: CoarseSpace, A: Iterable) -> int:
    idx = space.window.index
    m = 0
    for a in A:
        m |= 1 << idx(a)
    return m


def _within(codomain: CoarseSpace, bound: Scale | None, result: Scale):
    if bound is None:
        return result
    return result if scale_contains(bound, result) else UNBOUNDED


def _close_value_pairs(space, family, values, s_in) -> set:
    """Distinct value pairs ``(f(A), f(B))`` over all ``s_in``-close pairs."""
    fam = [hyperpoint(A) for A in family]
    pts = frozenset().union(*fam) if fam else frozenset()
    _require_safe(space, pts, s_in)
    nb = {p: _bitmask(space, space.ball(p, s_in)) for p in pts}
    masks = [_bitmask(space, A) for A in fam]
    nmasks = []
    for A in fam:
        m = 0
        for a in A:
            m |= nb[a]
        nmasks.append(m)

    distinct = list(dict.fromkeys(values))
    if _is_partition(space, nb):
        # balls partition the points: closeness is equality of neighbourhoods
        P = _bitmask(space, pts)
        groups: dict = {}
        for n, v in zip(nmasks, values):
            groups.setdefault(n & P, set()).add(v)
        return {(a, b) for vs in groups.values() for a in vs for b in vs}
    vid = {v: i for i, v in enumerate(distinct)}
    vidx = np.array([vid[v] for v in values], dtype=np.int64)
    seen: set = set()
    if len(space.points) <= 64:
        M = np.array(masks, dtype=np.uint64)
        N = np.array(nmasks, dtype=np.uint64)
        notN = ~N
        for i in range(len(fam)):
            close = ((M & notN[i]) == 0) & ((M[i] & notN) == 0)
            for j in np.unique(vidx[close]):
                seen.add((vidx[i], int(j)))
    else:
        for i in range(len(fam)):
            mi, ni = masks[i], nmasks[i]
            for j in range(len(fam)):
                if mi & ~nmasks[j] == 0 and masks[j] & ~ni == 0:
                    seen.add((vidx[i], vidx[j]))
    return {(distinct[i], distinct[j]) for i, j in seen}


def _is_partition(space: CoarseSpace, nb: dict) -> bool:
    """True when ``q in ball(p)`` is an equivalence relation on the keys of ``nb``."""
    idx = space.window.index
    P = _bitmask(space, nb)
    for p, m in nb.items():
        if not m >> idx(p) & 1:
            return False
        rest = m & P
        q_bits = rest
        while q_bits:
            low = q_bits & -q_bits
            q = space.points[low.bit_length() - 1]
            if nb[q] & P != rest:
                return False
            q_bits ^= low
    return True


def modulus_estimate(f: CoarseMap, family: Sequence, s_in: Scale, bound: Scale | None = None):
    """Smallest output scale certifying macro-uniformity of ``f`` on ``family``.

    ``f`` maps hyperpoints of ``f.domain`` to points of ``f.codomain``.  For
    every pair ``A, B`` of the family with ``hyper_close(A, B, s_in)`` the
    images must be close at the returned scale.  Metric codomains give a
    ``MetricScale``; group codomains the ``GroupScale`` of all ratios
    ``f(A) f(B)^-1``.  If ``bound`` is given and the result does not fit in
    it, ``UNBOUNDED`` is returned instead.
    """
    family = list(family)
    values = [f(A) for A in family]
    pairs = _close_value_pairs(f.domain, family, values, s_in)
    return _within(f.codomain, bound, f.codomain.enclosing_scale(pairs))


def point_modulus(phi: CoarseMap, s_in: Scale, points: Iterable | None = None,
                  bound: Scale | None = None):
    """Output scale needed by a point map ``phi`` at input scale ``s_in``."""
    dom = phi.domain
    pts = dom.safe_region(s_in) if points is None else tuple(points)
    pairs = set()
    for x in pts:
        fx = phi(x)
        for y in dom.ball(x, s_in):
            pairs.add((fx, phi(y)))
    return _within(phi.codomain, bound, phi.codomain.enclosing_scale(pairs))


@dataclass
class ModulusProfile:
    """Observed modulus ``rho(s)`` for a ladder of input scales."""

    table: dict = field(default_factory=dict)

    def is_monotone(self) -> bool:
        keys = sorted(self.table, key=_scale_sort_key)
        vals = [self.table[k] for k in keys]
        for a, b in zip(vals, vals[1:]):
            if isinstance(b, Unbounded):
                continue
            if isinstance(a, Unbounded) or not scale_contains(b, a):
                return False
        return True


def _scale_sort_key(s: Scale):
    return s.radius if isinstance(s, MetricScale) else len(s.elements)


def modulus_profile(f: CoarseMap, family: Sequence, scales: Iterable[Scale],
                    bound: Scale | None = None) -> ModulusProfile:
    family = list(family)
    return ModulusProfile({s: modulus_estimate(f, family, s, bound) for s in scales})


# --------------------------------------------------------------------------
# selector transfer


def transfer_selector(phi: CoarseMap, phi_inv: CoarseMap, f: Callable) -> Callable:
    """Pull a selector on ``phi``'s codomain back along a bijection.

    ``g(A)`` is the point of ``A`` nearest to ``phi_inv(f(phi(A)))``; ties go
    to the earliest point of the domain window.
    """
    dom = phi.domain
    images = {}
    for x in dom.points:
        y = phi(x)
        if y in images:
            raise ValueError(f"map is not injective: {images[y]!r} and {x!r} share image {y!r}")
        images[y] = x
        if phi_inv(y) != x:
            raise ValueError(f"inverse map disagrees at {x!r}")
    idx = dom.window.index

    def g(A):
        A = hyperpoint(A)
        target = phi_inv(f(frozenset(phi(a) for a in A)))
        if target in A:
            return target
        return min(A, key=lambda a: (dom.distance(a, target), idx(a)))

    return g
