"""G-graded G-modules with invariant metrics.

A module has a global basis ``0 .. dim-1``; basis vector ``i`` sits in the
sector ``sector_of[i]`` (an element of G).  ``action[g][i]`` is the sparse
image of basis vector ``i`` under ``rho(g)``, which maps ``H_m`` to
``H_{g^-1 m g}`` and composes as a right action,
``rho(g h) = rho(h) o rho(g)``.  Vectors are sparse ``dict[int, Fraction]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .groups import FiniteGroup, centralizer, direct_product
from .linalg import SparseVec, as_fraction, sp_add, sp_scale

# Scalars are exact rationals; swap these two names to change the field.
Scalar = Fraction
as_scalar = as_fraction

TensorVec = Dict[Tuple[int, ...], Fraction]


class ModuleError(ValueError):
    """Module data violates the G-graded G-module contract."""


class GGradedModule:
    def __init__(
        self,
        group: FiniteGroup,
        sector_of: Sequence[int],
        action: Sequence[Sequence[Mapping[int, Fraction]]],
        metric: Mapping[Tuple[int, int], Fraction],
    ) -> None:
        self.group = group
        self.sector_of = tuple(sector_of)
        self.dim = len(self.sector_of)
        if len(action) != group.order or any(len(a) != self.dim for a in action):
            raise ModuleError("action must give an image for every (group element, basis vector)")
        self.action = tuple(tuple(linalg.sp_clean(v) for v in row) for row in action)
        self.metric = {k: as_scalar(v) for k, v in metric.items() if v}

    @classmethod
    def from_generators(
        cls,
        group: FiniteGroup,
        sector_of: Sequence[int],
        generator_action: Mapping[int, Sequence[Mapping[int, Fraction]]],
        metric: Mapping[Tuple[int, int], Fraction],
    ) -> "GGradedModule":
        """Extend the action of a generating set to all of G through ``rho(x s) = rho(s) o rho(x)``."""
        dim = len(sector_of)
        ident = [{i: Fraction(1)} for i in range(dim)]
        action: Dict[int, List[SparseVec]] = {0: ident}
        frontier = [0]
        gens = sorted(generator_action)
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = group.mul(x, s)
                    if y in action:
                        continue
                    rs = generator_action[s]
                    action[y] = [_apply_images(rs, v) for v in action[x]]
                    nxt.append(y)
            frontier = nxt
        if len(action) != group.order:
            raise ModuleError("the given action generators do not generate the group")
        return cls(group, sector_of, [action[g] for g in group.elements()], metric)

    def __repr__(self) -> str:
        return f"GGradedModule({self.group.name}, dim={self.dim})"

    @cached_property
    def sector_basis(self) -> Tuple[Tuple[int, ...], ...]:
        """``sector_basis[m]`` lists the basis indices of ``H_m``."""
        out: List[List[int]] = [[] for _ in self.group.elements()]
        for i, m in enumerate(self.sector_of):
            out[m].append(i)
        return tuple(tuple(b) for b in out)

    def sector_dims(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.sector_basis)

    def act(self, g: int, v: Mapping[int, Fraction]) -> SparseVec:
        return _apply_images(self.action[g], v)

    def eta(self, v: Mapping[int, Fraction], w: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for i, x in v.items():
            for j, y in w.items():
                c = self.metric.get((i, j))
                if c:
                    total += x * y * c
        return total

    def gram(self, vs: Sequence[Mapping[int, Fraction]], ws: Sequence[Mapping[int, Fraction]]) -> linalg.Matrix:
        return [[self.eta(v, w) for w in ws] for v in vs]

    def sectors(self, v: Mapping[int, Fraction]) -> Tuple[int, ...]:
        return tuple(sorted({self.sector_of[i] for i in v}))

    def component(self, v: Mapping[int, Fraction], m: int) -> SparseVec:
        return {i: x for i, x in v.items() if self.sector_of[i] == m}

    def basis_vector(self, i: int) -> SparseVec:
        return {i: Fraction(1)}


def _apply_images(images: Sequence[Mapping[int, Fraction]], v: Mapping[int, Fraction]) -> SparseVec:
    out: SparseVec = {}
    for i, x in v.items():
        for j, y in images[i].items():
            z = out.get(j, 0) + x * y
            if z:
                out[j] = z
            else:
                out.pop(j, None)
    return out


# -- validation ----------------------------------------------------------------------


Witness = Dict[str, object]


@dataclass
class ModuleReport:
    violations: List[Witness] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_identity_action(M: GGradedModule) -> Optional[Witness]:
    for i in range(M.dim):
        if M.action[0][i] != {i: Fraction(1)}:
            return {"message": "rho(1) is not the identity", "basis": [i]}
    return None


def check_action_grading(M: GGradedModule) -> Optional[Witness]:
    G = M.group
    for g in G.elements():
        for i in range(M.dim):
            target = G.conj(M.sector_of[i], g)
            if any(M.sector_of[j] != target for j in M.action[g][i]):
                return {"message": f"rho({G.label(g)}) leaves sector {G.label(target)}", "element": g, "basis": [i]}
    return None


def check_action_law(M: GGradedModule) -> Optional[Witness]:
    G = M.group
    for g in G.elements():
        for h in G.elements():
            gh = G.mul(g, h)
            for i in range(M.dim):
                if M.action[gh][i] != M.act(h, M.action[g][i]):
                    return {
                        "message": f"rho({G.label(g)}{G.label(h)}) != rho({G.label(h)}) o rho({G.label(g)})",
                        "elements": [g, h],
                        "basis": [i],
                    }
    return None


def check_metric_grading(M: GGradedModule) -> Optional[Witness]:
    G = M.group
    for (i, j) in sorted(M.metric):
        if G.mul(M.sector_of[i], M.sector_of[j]) != 0:
            return {"message": "metric pairs sectors whose product is not 1", "basis": [i, j]}
    return None


def check_metric_symmetric(M: GGradedModule) -> Optional[Witness]:
    for (i, j), c in sorted(M.metric.items()):
        if M.metric.get((j, i)) != c:
            return {"message": "metric is not symmetric", "basis": [i, j]}
    return None


def check_metric_nondegenerate(M: GGradedModule) -> Optional[Witness]:
    full = [[M.metric.get((i, j), Fraction(0)) for j in range(M.dim)] for i in range(M.dim)]
    r = linalg.rank(full)
    if r != M.dim:
        return {"message": f"metric has rank {r} < {M.dim}"}
    return None


def check_metric_invariance(M: GGradedModule) -> Optional[Witness]:
    G = M.group
    for g in G.elements():
        img = M.action[g]
        for i in range(M.dim):
            for j in range(M.dim):
                if M.eta(img[i], img[j]) != M.metric.get((i, j), Fraction(0)):
                    return {"message": f"metric not invariant under {G.label(g)}", "element": g, "basis": [i, j]}
    return None


MODULE_CHECKS: Tuple[Callable[[GGradedModule], Optional[Witness]], ...] = (
    check_identity_action,
    check_action_grading,
    check_action_law,
    check_metric_grading,
    check_metric_symmetric,
    check_metric_nondegenerate,
    check_metric_invariance,
)


def validate_module(M: GGradedModule) -> ModuleReport:
    """Check every G-graded G-module and metric invariant exactly."""
    report = ModuleReport()
    for check in MODULE_CHECKS:
        w = check(M)
        if w is not None:
            report.violations.append(w)
    return report


# -- projectors and coinvariants ----------------------------------------------------


def pi_G(M: GGradedModule, v: Mapping[int, Fraction]) -> SparseVec:
    """Average of ``rho(g) v`` over the group."""
    out: SparseVec = {}
    for g in M.group.elements():
        out = sp_add(out, M.act(g, v))
    return sp_scale(out, Fraction(1, M.group.order))


def pi_Cm(M: GGradedModule, m: int, v: Mapping[int, Fraction]) -> SparseVec:
    """Average over the centralizer of ``m``; ``v`` must lie in ``H_m``."""
    if any(M.sector_of[i] != m for i in v):
        raise ValueError("vector is not in the requested sector")
    C = centralizer(M.group, m)
    out: SparseVec = {}
    for g in C.elements:
        out = sp_add(out, M.act(g, v))
    return sp_scale(out, Fraction(1, C.order))


def invariant_subspace(M: GGradedModule, m: int) -> List[SparseVec]:
    """Basis of ``H_m^{C(m)}``, the kernel of ``pi_C(m) - id`` on ``H_m``."""
    idx = M.sector_basis[m]
    if not idx:
        return []
    cols = [linalg.sp_to_dense(pi_Cm(M, m, {i: Fraction(1)}), idx) for i in idx]
    a = linalg.transpose(cols)
    for r in range(len(idx)):
        a[r][r] -= 1
    return [{idx[k]: x for k, x in enumerate(vec) if x} for vec in linalg.nullspace(a, len(idx))]


@dataclass(frozen=True)
class PiMIso:
    """The mutually inverse maps between ``H_m^{C(m)}`` and the coinvariant sector of ``m``."""

    module: GGradedModule
    m: int
    invariant_basis: Tuple[SparseVec, ...]

    @property
    def scale(self) -> Fraction:
        G = self.module.group
        return Fraction(G.order, centralizer(G, self.m).order)

    def pi(self, v: Mapping[int, Fraction]) -> SparseVec:
        return pi_G(self.module, v)

    def f(self, vbar: Mapping[int, Fraction]) -> SparseVec:
        return sp_scale(self.module.component(vbar, self.m), self.scale)


def pi_m_iso(M: GGradedModule, m: int) -> PiMIso:
    return PiMIso(M, m, tuple(invariant_subspace(M, m)))


@dataclass(frozen=True)
class CoinvariantBasis:
    """Class-sum basis of the coinvariants: ``(|G|/|C(m)|) pi_G(w)`` for ``w`` in ``H_m^{C(m)}``.

    ``vectors[k]`` lives in ``H`` and has class grading ``classes[k]``;
    ``sources[k]`` is the invariant vector ``w`` it was built from.
    """

    vectors: Tuple[SparseVec, ...]
    classes: Tuple[int, ...]
    sources: Tuple[SparseVec, ...]

    def __len__(self) -> int:
        return len(self.vectors)


def coinvariant_basis(M: GGradedModule) -> CoinvariantBasis:
    G = M.group
    cc = G.conjugacy
    vecs, classes, sources = [], [], []
    for c, rep in enumerate(cc.reps):
        iso = pi_m_iso(M, rep)
        for w in iso.invariant_basis:
            vecs.append(sp_scale(pi_G(M, w), iso.scale))
            classes.append(c)
            sources.append(w)
    return CoinvariantBasis(tuple(vecs), tuple(classes), tuple(sources))


def coordinates(basis: Sequence[Mapping[int, Fraction]], v: Mapping[int, Fraction]) -> List[Fraction]:
    """Coordinates of ``v`` in the span of ``basis``; raises if ``v`` is outside it."""
    if not basis:
        if v:
            raise ValueError("vector outside the span")
        return []
    support = sorted(set().union(*[set(b) for b in basis]) | set(v))
    a = linalg.transpose([linalg.sp_to_dense(b, support) for b in basis])
    x = linalg.solve(a, linalg.sp_to_dense(v, support))
    if x is None:
        raise ValueError("vector outside the span")
    return x


@dataclass(frozen=True)
class CoinvariantMetric:
    basis: CoinvariantBasis
    gram: Tuple[Tuple[Fraction, ...], ...]


def coinvariant_metric(M: GGradedModule) -> CoinvariantMetric:
    """``(1/|G|) eta`` restricted to the coinvariants, on the class-sum basis.

    Asserts the factor ``|C(m+)|/|G|`` relating ``eta(pi_G v+, pi_G v-)`` to
    ``eta(v+, v-)`` on invariant bases, and nondegeneracy of the result.
    """
    G = M.group
    check_projection_factor(M)
    basis = coinvariant_basis(M)
    gram = [[M.eta(v, w) / G.order for w in basis.vectors] for v in basis.vectors]
    if linalg.rank(gram) != len(basis):
        raise AssertionError("coinvariant metric is degenerate")
    return CoinvariantMetric(basis, tuple(tuple(r) for r in gram))


def check_projection_factor(M: GGradedModule) -> int:
    """Verify ``eta(pi_G v+, pi_G v-) = |C(m+)|/|G| eta(v+, v-)`` on invariant bases; returns pairs checked."""
    G = M.group
    checked = 0
    for m in G.elements():
        mi = G.inv(m)
        factor = Fraction(centralizer(G, m).order, G.order)
        plus = invariant_subspace(M, m)
        minus = invariant_subspace(M, mi)
        pplus = [pi_G(M, v) for v in plus]
        pminus = [pi_G(M, w) for w in minus]
        for v, pv in zip(plus, pplus):
            for w, pw in zip(minus, pminus):
                if M.eta(pv, pw) != factor * M.eta(v, w):
                    raise AssertionError(f"projection factor fails in sector {G.label(m)}")
                checked += 1
    return checked


# -- tensor products -------------------------------------------------------------------


def tensor_external(M1: GGradedModule, M2: GGradedModule) -> GGradedModule:
    """Module over ``G1 x G2``; basis ``(i, j)`` sits at index ``i * dim2 + j``."""
    G1, G2 = M1.group, M2.group
    G = direct_product(G1, G2)
    n2 = G2.order
    d2 = M2.dim
    sector_of = [M1.sector_of[i] * n2 + M2.sector_of[j] for i in range(M1.dim) for j in range(d2)]
    action = []
    for g1 in G1.elements():
        for g2 in G2.elements():
            row = []
            for i in range(M1.dim):
                for j in range(d2):
                    row.append(_outer(M1.action[g1][i], M2.action[g2][j], lambda a, b: a * d2 + b))
            action.append(row)
    metric = {
        (i1 * d2 + j1, i2 * d2 + j2): c1 * c2
        for (i1, i2), c1 in M1.metric.items()
        for (j1, j2), c2 in M2.metric.items()
    }
    return GGradedModule(G, sector_of, action, metric)


def odot_pairs(M1: GGradedModule, M2: GGradedModule) -> List[Tuple[int, int]]:
    """Basis of ``M1 (.) M2``: pairs of same-sector basis vectors, ordered by sector then index."""
    if M1.group is not M2.group:
        raise ModuleError("the (.) product needs both modules over the same group")
    return [
        (i, j)
        for m in M1.group.elements()
        for i in M1.sector_basis[m]
        for j in M2.sector_basis[m]
    ]


def tensor_odot(M1: GGradedModule, M2: GGradedModule) -> GGradedModule:
    """``sum_m H1_m (x) H2_m`` with the diagonal action."""
    pairs = odot_pairs(M1, M2)
    index = {p: k for k, p in enumerate(pairs)}
    G = M1.group
    sector_of = [M1.sector_of[i] for i, _ in pairs]
    action = [
        [_outer(M1.action[g][i], M2.action[g][j], lambda a, b: index[(a, b)]) for i, j in pairs]
        for g in G.elements()
    ]
    metric = {}
    for (i1, j1), k1 in index.items():
        for (i2, j2), k2 in index.items():
            c = M1.metric.get((i1, i2), 0) * M2.metric.get((j1, j2), 0)
            if c:
                metric[(k1, k2)] = c
    return GGradedModule(G, sector_of, action, metric)


def _outer(u: Mapping[int, Fraction], v: Mapping[int, Fraction], key: Callable[[int, int], int]) -> SparseVec:
    return {key(a, b): x * y for a, x in u.items() for b, y in v.items() if x * y}


# -- braid action on tensor powers -----------------------------------------------------------


def braid_on_tensor(M: GGradedModule, n: int, i: int, w: Mapping[Tuple[int, ...], Fraction]) -> TensorVec:
    """``b_i``: ``... v_a (x) v_b ... -> ... rho(m_a^-1) v_b (x) v_a ...`` with ``m_a`` the sector of ``v_a``.

    ``i`` is 1-based, ``1 <= i < n``.  Negative ``i`` applies the inverse.
    """
    k = abs(i)
    if not 1 <= k < n:
        raise IndexError(f"b_{i} out of range on {n} tensor factors")
    G = M.group
    out: TensorVec = {}
    for key, x in w.items():
        if len(key) != n:
            raise ValueError("tensor key has the wrong arity")
        a, b = key[k - 1], key[k]
        if i > 0:
            image = M.action[G.inv(M.sector_of[a])][b]
            for j, y in image.items():
                _acc(out, key[: k - 1] + (j, a) + key[k + 1:], x * y)
        else:
            # inverse: (v_a, v_b) -> (v_b, rho(m_b) v_a)
            image = M.action[M.sector_of[b]][a]
            for j, y in image.items():
                _acc(out, key[: k - 1] + (b, j) + key[k + 1:], x * y)
    return out


def _acc(d: TensorVec, key: Tuple[int, ...], x: Fraction) -> None:
    y = d.get(key, 0) + x
    if y:
        d[key] = y
    else:
        d.pop(key, None)


def apply_braid_word(M: GGradedModule, n: int, word: Sequence[int], w: Mapping[Tuple[int, ...], Fraction]) -> TensorVec:
    out = dict(w)
    for letter in word:
        out = braid_on_tensor(M, n, letter, out)
    return out


def pure_tensor(vectors: Sequence[Mapping[int, Fraction]]) -> TensorVec:
    out: TensorVec = {(): Fraction(1)}
    for v in vectors:
        out = {key + (i,): x * y for key, x in out.items() for i, y in v.items()}
    return out


# -- constructions ---------------------------------------------------------------------------


def group_ring_module(G: FiniteGroup) -> GGradedModule:
    """``C[G]`` with ``rho(g) e_m = e_{g^-1 m g}`` and ``eta(e_a, e_b) = [a b = 1]``."""
    action = [[{G.conj(m, g): Fraction(1)} for m in G.elements()] for g in G.elements()]
    metric = {(m, G.inv(m)): Fraction(1) for m in G.elements()}
    return GGradedModule(G, list(G.elements()), action, metric)


def untwisted_module(G: FiniteGroup, rep: Sequence[linalg.Matrix], metric: linalg.Matrix) -> GGradedModule:
    """A G-representation placed entirely in the identity sector.

    ``rep[g]`` is the matrix of ``rho(g)`` acting on column vectors.
    """
    d = len(metric)
    action = [[{r: rep[g][r][c] for r in range(d) if rep[g][r][c]} for c in range(d)] for g in G.elements()]
    met = {(i, j): metric[i][j] for i in range(d) for j in range(d) if metric[i][j]}
    return GGradedModule(G, [0] * d, action, met)


def basis_change(M: GGradedModule, P: Mapping[int, linalg.Matrix]) -> Tuple[List[SparseVec], Callable[[Mapping[int, Fraction]], SparseVec]]:
    """New basis vectors (column k of ``P[m]`` in sector ``m``) and the old-to-new coordinate map.

    Sectors absent from ``P`` keep their basis.
    """
    new_vecs: List[SparseVec] = [dict() for _ in range(M.dim)]
    inv_blocks: Dict[int, linalg.Matrix] = {}
    for m in M.group.elements():
        idx = M.sector_basis[m]
        if not idx:
            continue
        block = P.get(m) or linalg.identity(len(idx))
        inv_blocks[m] = linalg.inverse(block)
        for k, i in enumerate(idx):
            new_vecs[i] = {idx[r]: block[r][k] for r in range(len(idx)) if block[r][k]}

    def to_new(v: Mapping[int, Fraction]) -> SparseVec:
        out: SparseVec = {}
        for m in {M.sector_of[i] for i in v}:
            idx = M.sector_basis[m]
            dense = linalg.sp_to_dense(v, idx)
            inv = inv_blocks[m]
            for r in range(len(idx)):
                x = sum((inv[r][c] * dense[c] for c in range(len(idx)) if dense[c]), Fraction(0))
                if x:
                    out[idx[r]] = x
        return out

    return new_vecs, to_new


def change_of_basis(M: GGradedModule, P: Mapping[int, linalg.Matrix]) -> GGradedModule:
    """Re-express ``M`` in the basis given by the blocks ``P`` (see :func:`basis_change`)."""
    new_vecs, to_new = basis_change(M, P)
    action = [[to_new(M.act(g, new_vecs[i])) for i in range(M.dim)] for g in M.group.elements()]
    metric = {}
    for i in range(M.dim):
        for j in range(M.dim):
            c = M.eta(new_vecs[i], new_vecs[j])
            if c:
                metric[(i, j)] = c
    return GGradedModule(M.group, M.sector_of, action, metric)
