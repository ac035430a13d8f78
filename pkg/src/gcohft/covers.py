"""Pointed admissible G-covers over a fixed smooth pointed curve, combinatorially.

A cover is its holonomy (handle pairs ``(a_j, b_j)`` and loop images ``c_i``
subject to ``prod [a_j, b_j] * prod c_i = 1``) together with, for each marked
point, the right coset ``<c_i> g_i`` of ``G`` naming the chosen preimage.

Isomorphisms act by ``h``: holonomy ``chi -> h^-1 chi h`` and pointings
``P -> h^-1 P``.  Counting functions return exact :class:`Fraction` values.
"""

from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .groups import (
    ClassFunction,
    FiniteGroup,
    GroupSizeError,
    Subgroup,
    centralizer_of_set,
    class_convolution,
    commutator_distribution,
    convolve,
)

ENUMERATION_LIMIT = 10**7

Coset = Tuple[int, ...]


class InvalidHolonomyError(ValueError):
    """The surface relation fails for the given holonomy data."""


class GluingIdentityError(AssertionError):
    """A gluing identity failed; this signals a bug, not bad input."""


@dataclass(frozen=True)
class HolonomyDatum:
    genus: int
    handles: Tuple[Tuple[int, int], ...]
    monodromies: Tuple[int, ...]

    @classmethod
    def genus_zero(cls, monodromies: Sequence[int]) -> "HolonomyDatum":
        return cls(0, (), tuple(monodromies))

    @property
    def n(self) -> int:
        return len(self.monodromies)

    def image(self) -> Tuple[int, ...]:
        return tuple(x for ab in self.handles for x in ab) + self.monodromies

    def relation(self, G: FiniteGroup) -> int:
        acc = 0
        for a, b in self.handles:
            acc = G.mul(acc, G.commutator(a, b))
        return G.prod((acc,) + self.monodromies)

    def validate(self, G: FiniteGroup) -> None:
        if len(self.handles) != self.genus:
            raise InvalidHolonomyError(f"expected {self.genus} handle pairs, got {len(self.handles)}")
        if self.relation(G) != 0:
            raise InvalidHolonomyError(
                "surface relation fails: product is " + G.label(self.relation(G))
            )

    def conjugate(self, G: FiniteGroup, h: int) -> "HolonomyDatum":
        return HolonomyDatum(
            self.genus,
            tuple((G.conj(a, h), G.conj(b, h)) for a, b in self.handles),
            tuple(G.conj(c, h) for c in self.monodromies),
        )


@dataclass(frozen=True)
class CoverObject:
    holonomy: HolonomyDatum
    pointing: Tuple[Coset, ...]


def right_coset(G: FiniteGroup, c: int, g: int) -> Coset:
    """``<c> g`` as a sorted tuple of element indices."""
    return tuple(sorted(G.mul(x, g) for x in G.cyclic_subgroup(c).elements))


def _left_mul(G: FiniteGroup, h: int, coset: Coset) -> Coset:
    return tuple(sorted(G.mul(h, x) for x in coset))


def _right_mul(G: FiniteGroup, coset: Coset, h: int) -> Coset:
    return tuple(sorted(G.mul(x, h) for x in coset))


def make_cover(G: FiniteGroup, holonomy: HolonomyDatum, translation: Optional[Sequence[int]] = None) -> CoverObject:
    """Cover with pointing ``<c_i> t_i``; the all-identity translation gives the base object."""
    holonomy.validate(G)
    if translation is None:
        translation = (0,) * holonomy.n
    if len(translation) != holonomy.n:
        raise ValueError("one translation element per marked point")
    return CoverObject(
        holonomy,
        tuple(right_coset(G, c, t) for c, t in zip(holonomy.monodromies, translation)),
    )


def is_valid_cover(G: FiniteGroup, obj: CoverObject) -> bool:
    if obj.holonomy.relation(G) != 0:
        return False
    return all(
        P == right_coset(G, c, P[0]) for c, P in zip(obj.holonomy.monodromies, obj.pointing)
    )


def translate(G: FiniteGroup, obj: CoverObject, gammas: Sequence[int]) -> CoverObject:
    """Move each marked point by right multiplication, ``P_i -> P_i gamma_i``."""
    return CoverObject(obj.holonomy, tuple(_right_mul(G, P, g) for P, g in zip(obj.pointing, gammas)))


def monodromy_at(G: FiniteGroup, obj: CoverObject, i: int) -> int:
    """``g^-1 c_i g`` for any representative ``g`` of the i-th pointing coset."""
    return G.conj(obj.holonomy.monodromies[i], obj.pointing[i][0])


def _iso_holds(G: FiniteGroup, obj1: CoverObject, obj2: CoverObject, h: int) -> bool:
    if obj1.holonomy.conjugate(G, h) != obj2.holonomy:
        return False
    hi = G.inv(h)
    return all(_left_mul(G, hi, P1) == P2 for P1, P2 in zip(obj1.pointing, obj2.pointing))


def is_isomorphic(G: FiniteGroup, obj1: CoverObject, obj2: CoverObject) -> Optional[int]:
    """Smallest ``h`` carrying ``obj1`` to ``obj2``, or None.  Exhaustive over G."""
    if obj1.holonomy.genus != obj2.holonomy.genus or obj1.holonomy.n != obj2.holonomy.n:
        raise ValueError("objects live over curves of different type")
    for h in G.elements():
        if _iso_holds(G, obj1, obj2, h):
            return h
    return None


def automorphisms(G: FiniteGroup, obj: CoverObject) -> Subgroup:
    """Automorphism group as ``C(im chi)`` intersected with ``<g_i m_i g_i^-1>`` for each point.

    ``m_i`` is the monodromy at the i-th point and ``g_i`` a representative of
    its coset, so ``g_i m_i g_i^-1`` is the loop image seen from the base point.
    """
    result = centralizer_of_set(G, obj.holonomy.image())
    for i, P in enumerate(obj.pointing):
        g = P[0]
        result = result & G.cyclic_subgroup(G.conj(monodromy_at(G, obj, i), G.inv(g)))
    return result


# -- fibers of the forgetful map ---------------------------------------------------


@dataclass(frozen=True)
class FiberOrbit:
    representative: Tuple[Coset, ...]
    size: int
    aut_order: int


@dataclass(frozen=True)
class FiberGroupoid:
    holonomy: HolonomyDatum
    centralizer_order: int
    raw_pointings: int
    orbits: Tuple[FiberOrbit, ...]

    @property
    def mass(self) -> Fraction:
        """``sum over orbits of 1/|Aut|``."""
        return sum((Fraction(1, o.aut_order) for o in self.orbits), Fraction(0))


def _coset_spaces(G: FiniteGroup, holonomy: HolonomyDatum, limit: int) -> List[List[Coset]]:
    spaces = []
    total = 1
    for c in holonomy.monodromies:
        reps = sorted({right_coset(G, c, g) for g in G.elements()})
        spaces.append(reps)
        total *= len(reps)
    if total > limit:
        raise GroupSizeError(f"{total} pointings exceed the enumeration limit {limit}")
    return spaces


def fiber_groupoid(G: FiniteGroup, holonomy: HolonomyDatum, limit: int = ENUMERATION_LIMIT) -> FiberGroupoid:
    """Pointings of a fixed cover, grouped into isomorphism classes.

    Orbits are found by the diagonal action of ``C(im chi)``; each orbit's
    automorphism order is read off a representative with :func:`automorphisms`.
    """
    holonomy.validate(G)
    spaces = _coset_spaces(G, holonomy, limit)
    cent = centralizer_of_set(G, holonomy.image())
    seen = set()
    orbits = []
    raw = 0
    for pointing in itertools.product(*spaces):
        raw += 1
        if pointing in seen:
            continue
        orbit = {tuple(_left_mul(G, G.inv(h), P) for P in pointing) for h in cent.elements}
        seen |= orbit
        aut = automorphisms(G, CoverObject(holonomy, pointing)).order
        if cent.order != aut * len(orbit):
            raise AssertionError("orbit-stabilizer failed on a fiber")
        orbits.append(FiberOrbit(pointing, len(orbit), aut))
    return FiberGroupoid(holonomy, cent.order, raw, tuple(orbits))


def in_xi(G: FiniteGroup, holonomy: HolonomyDatum, pointing: Sequence[Coset], target: Sequence[int]) -> bool:
    """Whether one transport ``h`` puts every marked point in ``<c_i> h`` with monodromy ``target_i``."""
    cs = holonomy.monodromies
    if len(target) != len(cs):
        return False
    for h in G.elements():
        if all(G.conj(c, h) == m for c, m in zip(cs, target)) and all(
            P == right_coset(G, c, h) for c, P in zip(cs, pointing)
        ):
            return True
    return False


def deg_st_tilde(
    G: FiniteGroup,
    holonomy: HolonomyDatum,
    targets: Optional[Iterable[Sequence[int]]] = None,
    limit: int = ENUMERATION_LIMIT,
) -> Fraction:
    """Stacky degree ``|C(im chi)| * sum 1/|Aut|`` over the (optionally filtered) fiber.

    ``targets`` lists monodromy tuples ``m``; an orbit counts when its
    representative lies in the distinguished component for some ``m``.
    """
    fib = fiber_groupoid(G, holonomy, limit)
    if targets is None:
        chosen = fib.orbits
    else:
        if holonomy.genus != 0:
            raise ValueError("the distinguished-component filter is defined in genus zero")
        targets = [tuple(t) for t in targets]
        chosen = [o for o in fib.orbits if any(in_xi(G, holonomy, o.representative, t) for t in targets)]
    return fib.centralizer_order * sum((Fraction(1, o.aut_order) for o in chosen), Fraction(0))


# -- Hurwitz action ---------------------------------------------------------------


def hurwitz_braid(G: FiniteGroup, ms: Sequence[int], word: Sequence[int]) -> Tuple[int, ...]:
    """Apply a braid word letter by letter, left to right.

    Letter ``i`` is ``b_i``: ``(m_i, m_{i+1}) -> (m_i m_{i+1} m_i^-1, m_i)``;
    letter ``-i`` is its inverse.  Indices are 1-based.
    """
    ms = list(ms)
    for letter in word:
        i = abs(letter)
        if letter == 0 or i >= len(ms):
            raise IndexError(f"braid generator b_{letter} out of range for {len(ms)} strands")
        x, y = ms[i - 1], ms[i]
        if letter > 0:
            ms[i - 1], ms[i] = G.mul(G.mul(x, y), G.inv(x)), x
        else:
            ms[i - 1], ms[i] = y, G.conj(x, y)
    return tuple(ms)


# -- Omega --------------------------------------------------------------------------


_OMEGA_CACHE: "weakref.WeakKeyDictionary[FiniteGroup, Dict]" = weakref.WeakKeyDictionary()


def _cache_for(G: FiniteGroup) -> Dict:
    return _OMEGA_CACHE.setdefault(G, {})


def _product_distribution(G: FiniteGroup, genus: int, classes: Tuple[int, ...]) -> ClassFunction:
    cache = _cache_for(G)
    key = ("dist", genus, classes)
    if key in cache:
        return cache[key]
    if genus == 0 and not classes:
        f = ClassFunction.delta_identity(G)
    elif classes:
        f = class_convolution(G, _product_distribution(G, genus, classes[:-1]), classes[-1])
    else:
        if "T1" not in cache:
            cache["T1"] = commutator_distribution(G)
        f = convolve(G, _product_distribution(G, genus - 1, ()), cache["T1"])
    cache[key] = f
    return f


def omega(G: FiniteGroup, genus: int, classes: Sequence[int]) -> Fraction:
    """``#{(a, b, c) : c_i in class_i, prod [a_j, b_j] prod c_i = 1} / |G|`` by class convolution."""
    if genus < 0:
        raise ValueError("genus must be non-negative")
    classes = tuple(classes)
    dist = _product_distribution(G, genus, classes)
    return dist.at(G, 0) / G.order


def omega_enumerate(G: FiniteGroup, genus: int, classes: Sequence[int], limit: int = ENUMERATION_LIMIT) -> Fraction:
    """Direct enumeration of the same count; raises when the search space exceeds ``limit``."""
    cc = G.conjugacy
    pools = [list(G.elements())] * (2 * genus) + [list(cc.members[c]) for c in classes]
    space = 1
    for p in pools:
        space *= len(p)
    if space > limit:
        raise GroupSizeError(f"direct enumeration space {space} exceeds {limit}")
    # walk prefix products; the last factor is pinned down by the running product
    comms = [G.commutator(a, b) for a in G.elements() for b in G.elements()]
    levels = [comms] * genus + [pools[2 * genus + i] for i in range(len(classes))]
    if not levels:
        return Fraction(1, G.order)
    last = set(levels[-1]) if levels[-1] is not comms else None
    mul = G.mul_table
    inv = G.inv_table

    def walk(depth: int, acc: int) -> int:
        if depth == len(levels) - 1:
            if last is not None:
                return int(inv[acc] in last)
            return sum(1 for x in comms if mul[acc][x] == 0)
        return sum(walk(depth + 1, mul[acc][x]) for x in levels[depth])

    count = walk(0, 0)
    return Fraction(count, G.order)


def holonomy_nonempty(G: FiniteGroup, genus: int, classes: Sequence[int]) -> bool:
    return omega(G, genus, classes) > 0


@dataclass(frozen=True)
class GluingReport:
    mode: str
    genus: int
    classes: Tuple[int, ...]
    split: Tuple
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def gluing_identity_check(
    G: FiniteGroup,
    mode: str,
    genus: int,
    classes: Sequence[int],
    split: Tuple = (),
) -> GluingReport:
    """Evaluate one gluing identity exactly.

    ``mode="tree"``: ``split = (plus_points, genus_plus)`` with ``plus_points``
    a subset of marked-point indices; the minus side gets the rest and genus
    ``genus - genus_plus``.  ``mode="loop"``: needs ``genus >= 1``.
    A failing identity raises :class:`GluingIdentityError`.
    """
    cc = G.conjugacy
    classes = tuple(classes)
    lhs = Fraction(0)
    if mode == "tree":
        plus, g_plus = split
        plus = tuple(plus)
        g_minus = genus - g_plus
        if g_plus < 0 or g_minus < 0 or len(set(plus)) != len(plus) or any(not 0 <= i < len(classes) for i in plus):
            raise ValueError(f"inconsistent split {split!r} for genus {genus}, n={len(classes)}")
        minus = tuple(i for i in range(len(classes)) if i not in plus)
        for c in range(len(cc)):
            lhs += (
                cc.centralizer_orders[c]
                * omega(G, g_plus, tuple(classes[i] for i in plus) + (c,))
                * omega(G, g_minus, (cc.inverse_class[c],) + tuple(classes[i] for i in minus))
            )
        split = (plus, g_plus)
    elif mode == "loop":
        if genus < 1:
            raise ValueError("loop gluing needs genus >= 1")
        for c in range(len(cc)):
            lhs += cc.centralizer_orders[c] * omega(G, genus - 1, classes + (c, cc.inverse_class[c]))
        split = ()
    else:
        raise ValueError(f"unknown gluing mode {mode!r}")
    report = GluingReport(mode, genus, classes, split, lhs, omega(G, genus, classes))
    if not report.holds:
        raise GluingIdentityError(f"{mode} gluing failed: {report}")
    return report


def all_gluing_checks(G: FiniteGroup, genus: int, classes: Sequence[int]) -> List[GluingReport]:
    """Every tree split (all subsets, all genus splits) plus the loop identity when ``genus >= 1``."""
    classes = tuple(classes)
    n = len(classes)
    reports = []
    for r in range(n + 1):
        for plus in itertools.combinations(range(n), r):
            for g_plus in range(genus + 1):
                reports.append(gluing_identity_check(G, "tree", genus, classes, (plus, g_plus)))
    if genus >= 1:
        reports.append(gluing_identity_check(G, "loop", genus, classes))
    return reports


@dataclass(frozen=True)
class OmegaRow:
    genus: int
    classes: Tuple[int, ...]
    value: Fraction


def omega_table(G: FiniteGroup, max_genus: int, max_points: int, limit: int = ENUMERATION_LIMIT) -> List[OmegaRow]:
    """Omega over all class tuples with ``genus <= max_genus`` and ``n <= max_points``."""
    k = len(G.conjugacy)
    size = (max_genus + 1) * sum(k**n for n in range(max_points + 1))
    if size > limit:
        raise GroupSizeError(f"omega table of {size} rows exceeds {limit}")
    rows = []
    for g in range(max_genus + 1):
        for n in range(max_points + 1):
            for classes in itertools.product(range(k), repeat=n):
                rows.append(OmegaRow(g, classes, omega(G, g, classes)))
    return rows


def omega_csv(G: FiniteGroup, rows: Iterable[OmegaRow]) -> str:
    cc = G.conjugacy
    lines = ["genus,classes,numerator,denominator"]
    for row in rows:
        label = ";".join(G.label(cc.reps[c]) for c in row.classes)
        lines.append(f"{row.genus},{label},{row.value.numerator},{row.value.denominator}")
    return "\n".join(lines) + "\n"
