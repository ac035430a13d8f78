"""Degree-zero orbifold models: finite G-sets, their inertia, and trivial actions.

The algebra of a finite right G-set ``X`` has one basis vector ``delta(m, x)``
for every inertia pair (``x`` fixed by ``m``).  Its three-point function is
``[x = y = z][m1 m2 m3 = 1]`` and its metric is the counting pairing between
``H_m`` and ``H_{m^-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from . import frobenius
from .frobenius import CoinvariantAlgebra, FrobeniusAlgebra, GFrobeniusAlgebra
from .gmodule import GGradedModule
from .groups import FiniteGroup, Subgroup, direct_product


class GSetError(ValueError):
    """The permutation data is not a right action of the group."""


class FiniteGSet:
    """Points ``0 .. size-1``; ``images[g][x]`` is ``x . g``."""

    def __init__(self, group: FiniteGroup, images: Sequence[Sequence[int]], name: str = "") -> None:
        self.group = group
        self.images = tuple(tuple(row) for row in images)
        self.size = len(self.images[0]) if self.images else 0
        self.name = name
        self.validate()

    def __repr__(self) -> str:
        return f"FiniteGSet({self.group.name}, size={self.size})"

    def validate(self) -> None:
        G = self.group
        if len(self.images) != G.order:
            raise GSetError("need an image row for every group element")
        for row in self.images:
            if sorted(row) != list(range(self.size)):
                raise GSetError("each group element must permute the points")
        if self.images[0] != tuple(range(self.size)):
            raise GSetError("identity must act trivially")
        for g in G.elements():
            for h in G.elements():
                gh = G.mul(g, h)
                if any(self.images[gh][x] != self.images[h][self.images[g][x]] for x in range(self.size)):
                    raise GSetError("action is not a right action")

    @classmethod
    def from_generators(
        cls, group: FiniteGroup, size: int, generator_images: Mapping[int, Sequence[int]], name: str = ""
    ) -> "FiniteGSet":
        images: Dict[int, Tuple[int, ...]] = {0: tuple(range(size))}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in sorted(generator_images):
                    y = group.mul(x, s)
                    if y not in images:
                        img = tuple(generator_images[s])
                        if len(img) != size:
                            raise GSetError("generator image has the wrong length")
                        images[y] = tuple(img[p] for p in images[x])
                        nxt.append(y)
            frontier = nxt
        if len(images) != group.order:
            raise GSetError("generators do not generate the group")
        return cls(group, [images[g] for g in group.elements()], name)

    def act(self, x: int, g: int) -> int:
        return self.images[g][x]

    def fixed_points(self, g: int) -> Tuple[int, ...]:
        return tuple(x for x in range(self.size) if self.images[g][x] == x)

    def orbits(self) -> List[Tuple[int, ...]]:
        seen = set()
        out = []
        for x in range(self.size):
            if x in seen:
                continue
            orb = sorted({self.images[g][x] for g in self.group.elements()})
            seen.update(orb)
            out.append(tuple(orb))
        return out

    def is_free(self) -> bool:
        return all(not self.fixed_points(g) for g in self.group.elements() if g != 0)


def point(G: FiniteGroup) -> FiniteGSet:
    return FiniteGSet(G, [(0,)] * G.order, name="point")


def trivial_gset(G: FiniteGroup, size: int) -> FiniteGSet:
    return FiniteGSet(G, [tuple(range(size))] * G.order, name=f"trivial-{size}")


def regular(G: FiniteGroup) -> FiniteGSet:
    """G acting on itself by right multiplication (free and transitive)."""
    return FiniteGSet(G, [tuple(G.mul(x, g) for x in G.elements()) for g in G.elements()], name="regular")


def natural(G: FiniteGroup) -> FiniteGSet:
    """A permutation group acting on its points."""
    if G.perms is None:
        raise GSetError("group has no permutation representation")
    return FiniteGSet(G, [tuple(p) for p in G.perms], name="natural")


def coset_space(G: FiniteGroup, K: Subgroup) -> FiniteGSet:
    """Right cosets ``K x`` with ``K x . g = K x g``, numbered by smallest element."""
    cosets: Dict[int, int] = {}
    reps: List[int] = []
    for x in G.elements():
        if x in cosets:
            continue
        coset = sorted(G.mul(k, x) for k in K.elements)
        for y in coset:
            cosets[y] = len(reps)
        reps.append(coset[0])
    images = [tuple(cosets[G.mul(r, g)] for r in reps) for g in G.elements()]
    return FiniteGSet(G, images, name="cosets")


def disjoint_union(X: FiniteGSet, Y: FiniteGSet) -> FiniteGSet:
    """``Y``'s points are shifted by ``X.size``."""
    if X.group is not Y.group:
        raise GSetError("disjoint union needs a common group")
    s = X.size
    return FiniteGSet(X.group, [rx + tuple(y + s for y in ry) for rx, ry in zip(X.images, Y.images)])


def product(X: FiniteGSet, Y: FiniteGSet) -> FiniteGSet:
    """Diagonal action on ``X x Y``; point ``(x, y)`` has index ``x * |Y| + y``."""
    if X.group is not Y.group:
        raise GSetError("product needs a common group")
    n = Y.size
    return FiniteGSet(
        X.group,
        [tuple(rx[x] * n + ry[y] for x in range(X.size) for y in range(n)) for rx, ry in zip(X.images, Y.images)],
    )


def external_product(X: FiniteGSet, Y: FiniteGSet) -> FiniteGSet:
    """``G1 x G2`` acting factorwise on ``X x Y``."""
    GP = direct_product(X.group, Y.group)
    n = Y.size
    images = [
        tuple(rx[x] * n + ry[y] for x in range(X.size) for y in range(n))
        for rx in X.images
        for ry in Y.images
    ]
    return FiniteGSet(GP, images)


# -- inertia ------------------------------------------------------------------------------


@dataclass(frozen=True)
class InertiaSet:
    """Pairs ``(m, x)`` with ``x . m = x``, sorted by ``m`` then ``x``."""

    gset: FiniteGSet
    pairs: Tuple[Tuple[int, int], ...]

    def sector(self, m: int) -> Tuple[int, ...]:
        return tuple(x for g, x in self.pairs if g == m)

    def __len__(self) -> int:
        return len(self.pairs)

    def orbits(self) -> List[Tuple[Tuple[int, int], ...]]:
        """Orbits under ``(m, x) . g = (g^-1 m g, x . g)``."""
        G = self.gset.group
        seen = set()
        out = []
        for p in self.pairs:
            if p in seen:
                continue
            m, x = p
            orb = sorted({(G.conj(m, g), self.gset.act(x, g)) for g in G.elements()})
            seen.update(orb)
            out.append(tuple(orb))
        return out


def inertia(X: FiniteGSet) -> InertiaSet:
    G = X.group
    return InertiaSet(X, tuple((m, x) for m in G.elements() for x in X.fixed_points(m)))


def fg_finite_gset(X: FiniteGSet) -> GFrobeniusAlgebra:
    """Degree-zero orbifold algebra of ``X``; basis order follows :func:`inertia`.

    The product is recovered from the three-point function and the inverse
    metric, so the basis products ``delta(m1, x) delta(m2, y) = [x = y] delta(m1 m2, x)``
    are derived rather than assumed.
    """
    G = X.group
    I = inertia(X)
    index = {p: k for k, p in enumerate(I.pairs)}
    sector_of = [m for m, _ in I.pairs]
    action = [
        [{index[(G.conj(m, g), X.act(x, g))]: Fraction(1)} for m, x in I.pairs]
        for g in G.elements()
    ]
    metric = {(k, index[(G.inv(m), x)]): Fraction(1) for k, (m, x) in enumerate(I.pairs)}
    M = GGradedModule(G, sector_of, action, metric)
    mu_values = {}
    for a, (m1, x) in enumerate(I.pairs):
        for b, (m2, y) in enumerate(I.pairs):
            if y != x:
                continue
            m3 = G.inv(G.mul(m1, m2))
            c = index.get((m3, x))
            if c is not None:
                mu_values[(a, b, c)] = Fraction(1)
    unit = {index[(0, x)]: Fraction(1) for x in range(X.size)}
    return frobenius.from_mu(M, mu_values, unit)


def trivial_action_model(F: FrobeniusAlgebra, G: FiniteGroup) -> GFrobeniusAlgebra:
    """``H_m = F`` for every ``m``; basis ``(m, i)`` has index ``m * dim F + i``."""
    report = F.check()
    if not report.ok:
        raise ValueError(f"coefficient algebra fails {[r.name for r in report.failures()]}")
    d = F.dim
    sector_of = [m for m in G.elements() for _ in range(d)]
    action = [
        [{G.conj(m, g) * d + i: Fraction(1)} for m in G.elements() for i in range(d)]
        for g in G.elements()
    ]
    metric = {
        (m * d + i, G.inv(m) * d + j): F.metric[i][j]
        for m in G.elements()
        for i in range(d)
        for j in range(d)
        if F.metric[i][j]
    }
    mult = {}
    for a in G.elements():
        for b in G.elements():
            ab = G.mul(a, b)
            for i in range(d):
                for j in range(d):
                    v = {ab * d + k: x for k, x in enumerate(F.table[i][j]) if x}
                    if v:
                        mult[(a * d + i, b * d + j)] = v
    unit = {i: x for i, x in enumerate(F.unit) if x}
    return GFrobeniusAlgebra(GGradedModule(G, sector_of, action, metric), mult, unit)


def trivial_model_to_external(F: FrobeniusAlgebra, G: FiniteGroup) -> List[Dict[int, Fraction]]:
    """Basis images of ``trivial_action_model(F, G)`` inside ``F (x) C[G]`` over ``1 x G``."""
    d = F.dim
    return [{i * G.order + m: Fraction(1)} for m in G.elements() for i in range(d)]


@dataclass(frozen=True)
class FGCoinvariants:
    quotient: CoinvariantAlgebra
    orbit_count: int

    @property
    def dim(self) -> int:
        return self.quotient.dim


def fg_coinvariants(X: FiniteGSet) -> FGCoinvariants:
    """Coinvariant algebra of :func:`fg_finite_gset`; its dimension must equal the inertia orbit count."""
    Q = frobenius.coinvariant_algebra(fg_finite_gset(X))
    count = len(inertia(X).orbits())
    if Q.dim != count:
        raise AssertionError(f"coinvariant dimension {Q.dim} != inertia orbit count {count}")
    return FGCoinvariants(Q, count)


# -- ages -------------------------------------------------------------------------------


@dataclass(frozen=True)
class AgeDatum:
    """Eigenvalue exponents ``r_j`` in ``[0, 1)``: ``m`` acts by ``exp(2 pi i r_j)``."""

    exponents: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        rs = tuple(Fraction(r) for r in self.exponents)
        if any(not 0 <= r < 1 for r in rs):
            raise ValueError("age exponents must lie in [0, 1)")
        object.__setattr__(self, "exponents", rs)


def age(d: AgeDatum) -> Fraction:
    return sum(d.exponents, Fraction(0))


@dataclass(frozen=True)
class ObstructionRank:
    value: Fraction
    flagged: bool

    @property
    def is_integer(self) -> bool:
        return self.value.denominator == 1


def obstruction_rank(a1, a2, a12, codim: int) -> ObstructionRank:
    """``a1 + a2 - a12 - codim``; flagged unless a nonnegative integer."""
    if codim < 0:
        raise ValueError("codimension must be nonnegative")
    v = Fraction(a1) + Fraction(a2) - Fraction(a12) - codim
    return ObstructionRank(v, flagged=v.denominator != 1 or v < 0)
