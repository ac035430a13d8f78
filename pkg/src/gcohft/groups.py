"""Finite groups as dense multiplication tables, plus class-level combinatorics.

Elements are the indices ``0 .. order-1`` with ``0`` the identity.  Groups are
built from permutation generators (1-based points in the text grammar) and
multiply left to right: ``x^(pq) = (x^p)^q``, so points carry a *right*
action.  Commutators follow ``[a, b] = a b a^-1 b^-1``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

DEFAULT_ORDER_CAP = 5040

Perm = Tuple[int, ...]


class GroupSpecError(ValueError):
    """Malformed group-spec text."""


class GroupSizeError(ValueError):
    """A generated group (or enumeration) exceeds the configured cap."""


# -- permutations -------------------------------------------------------------


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Apply ``p`` first, then ``q``."""
    return tuple(q[x] for x in p)


def perm_cycles(p: Perm) -> List[Tuple[int, ...]]:
    seen = set()
    cycles = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p[x]
        cycles.append(tuple(cyc))
    return cycles


def cycle_notation(p: Perm) -> str:
    cycles = perm_cycles(p)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cycles)


def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> Perm:
    """Permutation from 1-based cycles; later cycles act after earlier ones."""
    result = tuple(range(degree))
    for cyc in cycles:
        img = list(range(degree))
        pts = [x - 1 for x in cyc]
        if len(set(pts)) != len(pts):
            raise GroupSpecError(f"repeated point in cycle {tuple(cyc)}")
        for x in pts:
            if not 0 <= x < degree:
                raise GroupSpecError(f"point {x + 1} outside 1..{degree}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
        result = perm_mul(result, tuple(img))
    return result


# -- group-spec grammar ----------------------------------------------------------

_PRESET = re.compile(r"^(cyclic|dihedral|symmetric)\s*(\d+)$")
_PERM = re.compile(r"^perm\s*(\d+)\s*:(.*)$", re.S)


def _split_top_level(text: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            if depth:
                raise GroupSpecError("nested parentheses")
            depth += 1
        elif ch == ")":
            if not depth:
                raise GroupSpecError("unbalanced ')'")
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise GroupSpecError("unbalanced '('")
    parts.append("".join(cur))
    return parts


def parse_cycles(text: str) -> List[Tuple[int, ...]]:
    """Parse ``"(1 2)(3 4 5)"`` into 1-based cycles; ``"()"`` is the identity."""
    text = text.strip()
    if not text:
        raise GroupSpecError("empty generator")
    cycles = []
    for m in re.finditer(r"\(([^()]*)\)|(\S)", text):
        if m.group(2) is not None:
            raise GroupSpecError(f"unexpected {m.group(2)!r} in {text!r}")
        body = m.group(1).replace(",", " ").split()
        try:
            pts = tuple(int(tok) for tok in body)
        except ValueError:
            raise GroupSpecError(f"non-integer point in {text!r}") from None
        if pts:
            cycles.append(pts)
    return cycles


def parse_group_spec(text: str) -> Tuple[int, List[Perm], str]:
    """Return ``(degree, generators, canonical name)`` for a group-spec string."""
    src = " ".join(text.split())
    m = _PRESET.match(src)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if n < 1:
            raise GroupSpecError(f"{kind} needs n >= 1")
        if kind == "cyclic":
            gens = [perm_from_cycles([range(1, n + 1)], n)] if n > 1 else []
            return n, gens, f"cyclic {n}"
        if kind == "dihedral":
            if n < 3:
                raise GroupSpecError("dihedral N needs N >= 3 (order 2N on N points)")
            rot = perm_from_cycles([range(1, n + 1)], n)
            refl = perm_from_cycles([(i, n + 2 - i) for i in range(2, n // 2 + 2) if i < n + 2 - i], n)
            return n, [rot, refl], f"dihedral {n}"
        if n == 1:
            return 1, [], "symmetric 1"
        gens = [perm_from_cycles([(1, 2)], n), perm_from_cycles([range(1, n + 1)], n)]
        return n, gens, f"symmetric {n}"
    if src == "quaternion8":
        # right-regular representation of Q8 on 8 points
        i = perm_from_cycles([(1, 2, 4, 7), (3, 6, 8, 5)], 8)
        j = perm_from_cycles([(1, 3, 4, 8), (2, 5, 7, 6)], 8)
        return 8, [i, j], "quaternion8"
    m = _PERM.match(src)
    if m:
        degree = int(m.group(1))
        if degree < 1:
            raise GroupSpecError("perm needs at least one point")
        body = m.group(2).strip()
        gens = []
        if body:
            for part in _split_top_level(body):
                gens.append(perm_from_cycles(parse_cycles(part), degree))
        return degree, gens, "perm " + str(degree) + ": " + ", ".join(cycle_notation(g) for g in gens)
    raise GroupSpecError(f"unrecognised group spec {text!r}")


NAMED_GROUPS = {
    "1": "cyclic 1",
    "Z2": "cyclic 2",
    "Z3": "cyclic 3",
    "Z4": "cyclic 4",
    "Z6": "cyclic 6",
    "V4": "perm 4: (1 2), (3 4)",
    "S3": "symmetric 3",
    "D4": "dihedral 4",
    "Q8": "quaternion8",
    "S4": "symmetric 4",
}


# -- groups ---------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """Membership mask over the elements of a group, with a generating witness."""

    mask: Tuple[bool, ...]
    generators: Tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return sum(self.mask)

    @property
    def elements(self) -> Tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.mask) if b)

    def __contains__(self, g: int) -> bool:
        return self.mask[g]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(tuple(a and b for a, b in zip(self.mask, other.mask)))


@dataclass(frozen=True)
class ConjClassTable:
    class_of: Tuple[int, ...]
    reps: Tuple[int, ...]
    sizes: Tuple[int, ...]
    centralizer_orders: Tuple[int, ...]
    inverse_class: Tuple[int, ...]
    members: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.reps)


class FiniteGroup:
    """A finite group stored as a full multiplication table.

    Immutable after construction; derived tables are cached lazily.
    """

    def __init__(
        self,
        mul: Sequence[Sequence[int]],
        *,
        perms: Optional[Sequence[Perm]] = None,
        labels: Optional[Sequence[str]] = None,
        name: str = "",
        generators: Sequence[int] = (),
    ) -> None:
        self.order = len(mul)
        self.mul_table = tuple(tuple(row) for row in mul)
        self.identity = 0
        if any(self.mul_table[0][g] != g or self.mul_table[g][0] != g for g in range(self.order)):
            raise ValueError("element 0 must be the identity")
        inv = [None] * self.order
        for g in range(self.order):
            row = self.mul_table[g]
            inv[g] = row.index(0)
        self.inv_table = tuple(inv)
        self.perms = tuple(perms) if perms is not None else None
        if labels is None:
            labels = [cycle_notation(p) for p in self.perms] if self.perms else [f"g{i}" for i in range(self.order)]
        self.labels = tuple(labels)
        self.name = name
        self.generators = tuple(generators)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    def prod(self, elems: Iterable[int]) -> int:
        acc = 0
        for e in elems:
            acc = self.mul_table[acc][e]
        return acc

    def conj(self, m: int, g: int) -> int:
        """``g^-1 m g``."""
        t = self.mul_table
        return t[t[self.inv_table[g]][m]][g]

    def commutator(self, a: int, b: int) -> int:
        t, inv = self.mul_table, self.inv_table
        return t[t[t[a][b]][inv[a]]][inv[b]]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        acc = 0
        for _ in range(k):
            acc = self.mul_table[acc][g]
        return acc

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul_table[x][g]
            k += 1
        return k

    def label(self, g: int) -> str:
        return self.labels[g]

    def element(self, text: str) -> int:
        """Look up an element from cycle notation (permutation groups only)."""
        if self.perms is None:
            try:
                return self.labels.index(text)
            except ValueError:
                raise KeyError(text) from None
        p = perm_from_cycles(parse_cycles(text), len(self.perms[0]))
        return self._perm_index[p]

    @cached_property
    def _perm_index(self) -> Dict[Perm, int]:
        return {p: i for i, p in enumerate(self.perms)}

    @cached_property
    def is_abelian(self) -> bool:
        t = self.mul_table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def cyclic_subgroup(self, g: int) -> Subgroup:
        mask = [False] * self.order
        x = 0
        while True:
            mask[x] = True
            x = self.mul_table[x][g]
            if x == 0:
                break
        return Subgroup(tuple(mask), (g,))

    def subgroup_generated(self, gens: Iterable[int]) -> Subgroup:
        gens = tuple(gens)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.mul_table[x][s]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup(tuple(i in seen for i in range(self.order)), gens)

    def whole(self) -> Subgroup:
        return Subgroup((True,) * self.order, self.generators)

    @cached_property
    def conjugacy(self) -> ConjClassTable:
        return conjugacy_data(self)

    @cached_property
    def class_structure_constants(self) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
        """``a[c][d][e] = #{(y, z) : y in c, z in d, y z = x}`` for any fixed ``x`` in class ``e``."""
        cc = self.conjugacy
        k = len(cc)
        a = [[[0] * k for _ in range(k)] for _ in range(k)]
        for e in range(k):
            x = cc.reps[e]
            for c in range(k):
                row = a[c]
                for y in cc.members[c]:
                    z = self.mul_table[self.inv_table[y]][x]
                    row[cc.class_of[z]][e] += 1
        return tuple(tuple(tuple(r) for r in plane) for plane in a)


def build_group(spec: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build the group generated by a group-spec string.

    Elements are ordered breadth-first from the identity over the generators,
    each new layer sorted lexicographically by permutation images.
    """
    degree, gens, name = parse_group_spec(spec)
    ident = tuple(range(degree))
    perms = [ident]
    index = {ident: 0}
    layer = [ident]
    while layer:
        new = set()
        for p in layer:
            for s in gens:
                q = perm_mul(p, s)
                if q not in index and q not in new:
                    new.add(q)
        if len(index) + len(new) > cap:
            raise GroupSizeError(f"group generated by {spec!r} exceeds the order cap {cap}")
        layer = sorted(new)
        for q in layer:
            index[q] = len(perms)
            perms.append(q)
    mul = [[index[perm_mul(p, q)] for q in perms] for p in perms]
    gen_idx = tuple(dict.fromkeys(index[s] for s in gens if s != ident))
    return FiniteGroup(mul, perms=perms, name=name, generators=gen_idx)


def named_group(name: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """``build_group`` that also accepts the short names in :data:`NAMED_GROUPS`."""
    return build_group(NAMED_GROUPS.get(name, name), cap=cap)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """``G1 x G2`` with element ``(a, b)`` at index ``a * |G2| + b``."""
    n2 = g2.order
    mul = [
        [g1.mul(a1, a2) * n2 + g2.mul(b1, b2) for a2 in range(g1.order) for b2 in range(n2)]
        for a1 in range(g1.order)
        for b1 in range(n2)
    ]
    perms = None
    if g1.perms is not None and g2.perms is not None:
        d1 = len(g1.perms[0])
        perms = [p + tuple(d1 + x for x in q) for p in g1.perms for q in g2.perms]
    gens = tuple(a * n2 for a in g1.generators) + tuple(b for b in g2.generators)
    return FiniteGroup(mul, perms=perms, name=f"{g1.name} x {g2.name}", generators=gens)


def pair_index(g2: FiniteGroup, a: int, b: int) -> int:
    return a * g2.order + b


def conjugacy_data(G: FiniteGroup) -> ConjClassTable:
    class_of = [-1] * G.order
    reps, members = [], []
    for g in G.elements():
        if class_of[g] >= 0:
            continue
        c = len(reps)
        orbit = sorted({G.conj(g, h) for h in G.elements()})
        for x in orbit:
            class_of[x] = c
        reps.append(g)
        members.append(tuple(orbit))
    sizes = tuple(len(m) for m in members)
    cent = tuple(G.order // s for s in sizes)
    inverse_class = tuple(class_of[G.inv(r)] for r in reps)
    return ConjClassTable(tuple(class_of), tuple(reps), sizes, cent, inverse_class, tuple(members))


def centralizer(G: FiniteGroup, g: int) -> Subgroup:
    t = G.mul_table
    return Subgroup(tuple(t[g][h] == t[h][g] for h in G.elements()), (g,))


def centralizer_of_set(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    S = tuple(S)
    mask = (True,) * G.order
    for s in S:
        mask = tuple(a and b for a, b in zip(mask, centralizer(G, s).mask))
    return Subgroup(mask, S)


# -- class functions ------------------------------------------------------------


@dataclass(frozen=True)
class ClassFunction:
    """A conjugation-invariant function on G, stored as its value on each class.

    ``values[c]`` is the value at any single element of class ``c``.
    """

    values: Tuple[Fraction, ...]

    @classmethod
    def indicator(cls, G: FiniteGroup, c: int) -> "ClassFunction":
        return cls(tuple(Fraction(int(i == c)) for i in range(len(G.conjugacy))))

    @classmethod
    def delta_identity(cls, G: FiniteGroup) -> "ClassFunction":
        return cls.indicator(G, G.conjugacy.class_of[0])

    def __len__(self) -> int:
        return len(self.values)

    def at(self, G: FiniteGroup, g: int) -> Fraction:
        return self.values[G.conjugacy.class_of[g]]

    def class_totals(self, G: FiniteGroup) -> Tuple[Fraction, ...]:
        return tuple(v * s for v, s in zip(self.values, G.conjugacy.sizes))

    def total_mass(self, G: FiniteGroup) -> Fraction:
        return sum(self.class_totals(G), Fraction(0))

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, k) -> "ClassFunction":
        return ClassFunction(tuple(Fraction(k) * v for v in self.values))


def class_convolution(G: FiniteGroup, f: ClassFunction, c: int) -> ClassFunction:
    """``x -> sum over y in class c of f(y^-1 x)``, via class-algebra structure constants."""
    a = G.class_structure_constants[c]
    k = len(f)
    return ClassFunction(tuple(sum((f.values[d] * a[d][e] for d in range(k)), Fraction(0)) for e in range(k)))


def convolve(G: FiniteGroup, f: ClassFunction, h: ClassFunction) -> ClassFunction:
    """Full convolution ``(f * h)(x) = sum_{yz = x} f(y) h(z)`` of two class functions."""
    out = ClassFunction((Fraction(0),) * len(f))
    for c, w in enumerate(h.values):
        if w:
            out = out + class_convolution(G, f, c).scale(w)
    return out


def commutator_distribution(G: FiniteGroup) -> ClassFunction:
    """Per-element count of pairs ``(a, b)`` with ``[a, b] = x``, by direct enumeration."""
    cc = G.conjugacy
    totals = [0] * len(cc)
    for a in G.elements():
        for b in G.elements():
            totals[cc.class_of[G.commutator(a, b)]] += 1
    return ClassFunction(tuple(Fraction(t, s) for t, s in zip(totals, cc.sizes)))


# -- involutive sections ------------------------------------------------------------


@dataclass(frozen=True)
class SectionResult:
    section: Optional[Tuple[int, ...]]
    witness_class: Optional[int] = None

    @property
    def exists(self) -> bool:
        return self.section is not None


def involutive_section(G: FiniteGroup) -> SectionResult:
    """First section ``s`` with ``s(inverse class) = s(class)^-1``, by backtracking.

    Classes are visited in index order and candidates in element order.  When
    no section exists the witness is the first self-inverse class containing
    no element of order at most 2.
    """
    cc = G.conjugacy
    k = len(cc)
    chosen: List[Optional[int]] = [None] * k

    def extend(c: int) -> bool:
        if c == k:
            return True
        if chosen[c] is not None:
            return extend(c + 1)
        ic = cc.inverse_class[c]
        for g in cc.members[c]:
            gi = G.inv(g)
            if ic == c and gi != g:
                continue
            chosen[c] = g
            chosen[ic] = gi
            if extend(c + 1):
                return True
            chosen[c] = None
            chosen[ic] = None
        return False

    if extend(0):
        return SectionResult(tuple(chosen))
    witness = next(
        c for c in range(k) if cc.inverse_class[c] == c and all(G.inv(g) != g for g in cc.members[c])
    )
    return SectionResult(None, witness)


# -- isomorphisms -----------------------------------------------------------------


def small_generating_set(G: FiniteGroup) -> Tuple[int, ...]:
    gens: List[int] = []
    sub = Subgroup((True,) + (False,) * (G.order - 1))
    for g in G.elements():
        if not sub.mask[g]:
            gens.append(g)
            sub = G.subgroup_generated(gens)
    return tuple(gens)


def group_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[Tuple[int, ...]]:
    """An isomorphism ``G -> H`` as an image table, or None.  Brute force; small groups only."""
    if G.order != H.order:
        return None
    gens = small_generating_set(G)
    orders_h: Dict[int, List[int]] = {}
    for h in H.elements():
        orders_h.setdefault(H.element_order(h), []).append(h)
    candidates = [orders_h.get(G.element_order(g), []) for g in gens]
    for images in itertools.product(*candidates):
        phi = _extend_hom(G, H, gens, images)
        if phi is not None and len(set(phi)) == G.order:
            return phi
    return None


def _extend_hom(G, H, gens, images) -> Optional[Tuple[int, ...]]:
    phi = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, t in zip(gens, images):
                y = G.mul(x, s)
                val = H.mul(phi[x], t)
                if y in phi:
                    if phi[y] != val:
                        return None
                else:
                    phi[y] = val
                    nxt.append(y)
        frontier = nxt
    table = tuple(phi[g] for g in G.elements())
    for a in G.elements():
        for b in G.elements():
            if table[G.mul(a, b)] != H.mul(table[a], table[b]):
                return None
    return table
