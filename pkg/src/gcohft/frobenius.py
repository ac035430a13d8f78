"""G-Frobenius algebras, their axiom checker, and the coinvariant quotient.

A :class:`GFrobeniusAlgebra` is a :class:`GGradedModule` with a product on
basis vectors and a unit.  :class:`FrobeniusAlgebra` is the classical
(commutative) counterpart used for coinvariants, untwisted sectors and
user-supplied coefficient algebras.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import gmodule, linalg
from .gmodule import GGradedModule, SparseVec, Witness
from .groups import FiniteGroup, direct_product, group_isomorphism
from .linalg import Matrix, sp_add


class AlgebraError(ValueError):
    """Algebra data is structurally unusable (wrong shapes, closure failure)."""


class GFrobeniusAlgebra:
    def __init__(
        self,
        module: GGradedModule,
        mult: Mapping[Tuple[int, int], Mapping[int, Fraction]],
        unit: Mapping[int, Fraction],
    ) -> None:
        self.module = module
        self.mult = {k: linalg.sp_clean(v) for k, v in mult.items()}
        self.mult = {k: v for k, v in self.mult.items() if v}
        self.unit = linalg.sp_clean(unit)

    def __repr__(self) -> str:
        return f"GFrobeniusAlgebra({self.group.name}, dim={self.dim})"

    @property
    def group(self) -> FiniteGroup:
        return self.module.group

    @property
    def dim(self) -> int:
        return self.module.dim

    def product(self, v: Mapping[int, Fraction], w: Mapping[int, Fraction]) -> SparseVec:
        out: SparseVec = {}
        for i, x in v.items():
            for j, y in w.items():
                p = self.mult.get((i, j))
                if p:
                    out = sp_add(out, p, x * y)
        return out

    def basis_product(self, i: int, j: int) -> SparseVec:
        return self.mult.get((i, j), {})

    def eta(self, v, w) -> Fraction:
        return self.module.eta(v, w)

    def act(self, g: int, v) -> SparseVec:
        return self.module.act(g, v)

    def mu(self, v1, v2, v3) -> Fraction:
        return mu(self, v1, v2, v3)


def mu(A: GFrobeniusAlgebra, v1, v2, v3) -> Fraction:
    """Three-point function ``eta(v1, v2 . v3)``."""
    return A.eta(v1, A.product(v2, v3))


def mu_on_tensor(A: GFrobeniusAlgebra, w: Mapping[Tuple[int, int, int], Fraction]) -> Fraction:
    total = Fraction(0)
    for (a, b, c), x in w.items():
        total += x * A.eta({a: Fraction(1)}, A.basis_product(b, c))
    return total


# -- axiom reports ------------------------------------------------------------------


AXIOM_NAMES = (
    "graded-module",
    "self-invariance",
    "metric",
    "graded-product",
    "associativity",
    "braided-commutativity",
    "equivariance",
    "metric-G-invariance",
    "metric-product-invariance",
    "unit",
)
TRACE_AXIOM = "trace"


@dataclass
class AxiomResult:
    name: str
    passed: bool
    witness: Optional[Witness] = None

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {"axiom": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


@dataclass
class AxiomReport:
    results: List[AxiomResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> List[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def result(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def __add__(self, other: "AxiomReport") -> "AxiomReport":
        return AxiomReport(self.results + other.results)

    def to_dict(self) -> Dict[str, object]:
        return {"passed": self.ok, "axioms": [r.to_dict() for r in self.results]}


def _jsonable(x):
    if isinstance(x, Fraction):
        return fraction_text(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _vec_witness(v: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    return dict(sorted(v.items()))


def _first(*checks) -> Optional[Witness]:
    for c in checks:
        w = c()
        if w is not None:
            return w
    return None


def check_axioms(A: GFrobeniusAlgebra) -> AxiomReport:
    """Verify the ten non-trace axioms on basis vectors (all are multilinear)."""
    M = A.module
    G = A.group
    n = A.dim
    sec = M.sector_of
    e = lambda i: {i: Fraction(1)}  # noqa: E731

    def graded_module():
        return _first(
            lambda: gmodule.check_identity_action(M),
            lambda: gmodule.check_action_grading(M),
            lambda: gmodule.check_action_law(M),
        )

    def self_invariance():
        for i in range(n):
            m = sec[i]
            if M.action[m][i] != e(i):
                return {"message": f"rho({G.label(m)}) moves a vector of H_{G.label(m)}", "basis": [i]}
        return None

    def metric():
        return _first(
            lambda: gmodule.check_metric_grading(M),
            lambda: gmodule.check_metric_symmetric(M),
            lambda: gmodule.check_metric_nondegenerate(M),
        )

    def graded_product():
        for (i, j), p in sorted(A.mult.items()):
            target = G.mul(sec[i], sec[j])
            if any(sec[k] != target for k in p):
                return {"message": "product leaves sector m1 m2", "basis": [i, j], "product": _vec_witness(p)}
        return None

    def associativity():
        for i in range(n):
            for j in range(n):
                ij = A.basis_product(i, j)
                for k in range(n):
                    lhs = A.product(ij, e(k))
                    rhs = A.product(e(i), A.basis_product(j, k))
                    if lhs != rhs:
                        return {"basis": [i, j, k], "lhs": _vec_witness(lhs), "rhs": _vec_witness(rhs)}
        return None

    def braided_commutativity():
        for i in range(n):
            g = G.inv(sec[i])
            for j in range(n):
                lhs = A.basis_product(i, j)
                rhs = A.product(M.action[g][j], e(i))
                if lhs != rhs:
                    return {"basis": [i, j], "lhs": _vec_witness(lhs), "rhs": _vec_witness(rhs)}
        return None

    def equivariance():
        for g in G.elements():
            img = M.action[g]
            for i in range(n):
                for j in range(n):
                    lhs = A.product(img[i], img[j])
                    rhs = A.act(g, A.basis_product(i, j))
                    if lhs != rhs:
                        return {"element": g, "basis": [i, j], "lhs": _vec_witness(lhs), "rhs": _vec_witness(rhs)}
        return None

    def metric_invariance():
        for i in range(n):
            for j in range(n):
                ij = A.basis_product(i, j)
                for k in range(n):
                    lhs = A.eta(ij, e(k))
                    rhs = A.eta(e(i), A.basis_product(j, k))
                    if lhs != rhs:
                        return {"basis": [i, j, k], "lhs": lhs, "rhs": rhs}
        return None

    def unit():
        if any(sec[i] != 0 for i in A.unit):
            return {"message": "unit is not in the identity sector", "unit": _vec_witness(A.unit)}
        for g in G.elements():
            if A.act(g, A.unit) != A.unit:
                return {"message": f"unit not fixed by {G.label(g)}", "element": g}
        for i in range(n):
            left = A.product(A.unit, e(i))
            right = A.product(e(i), A.unit)
            if left != e(i) or right != e(i):
                return {"message": "unit does not act as identity", "basis": [i],
                        "left": _vec_witness(left), "right": _vec_witness(right)}
        return None

    checks = (
        graded_module, self_invariance, metric, graded_product, associativity,
        braided_commutativity, equivariance, lambda: gmodule.check_metric_invariance(M), metric_invariance, unit,
    )
    report = AxiomReport()
    for name, check in zip(AXIOM_NAMES, checks):
        w = check()
        report.results.append(AxiomResult(name, w is None, w))
    return report


def trace_sides(A: GFrobeniusAlgebra, a: int, b: int, v: Mapping[int, Fraction]) -> Tuple[Fraction, Fraction]:
    """``Tr_{H_a}(L_v rho(b^-1))`` and ``Tr_{H_b}(rho(a) L_v)``."""
    M, G = A.module, A.group
    binv = G.inv(b)
    lhs = Fraction(0)
    for i in M.sector_basis[a]:
        lhs += A.product(v, M.action[binv][i]).get(i, 0)
    rhs = Fraction(0)
    for i in M.sector_basis[b]:
        rhs += A.act(a, A.product(v, {i: Fraction(1)})).get(i, 0)
    return lhs, rhs


def check_trace(A: GFrobeniusAlgebra) -> AxiomReport:
    """The trace axiom for every ``(a, b)`` and every basis vector of ``H_[a,b]``."""
    M, G = A.module, A.group
    for a in G.elements():
        for b in G.elements():
            for k in M.sector_basis[G.commutator(a, b)]:
                lhs, rhs = trace_sides(A, a, b, {k: Fraction(1)})
                if lhs != rhs:
                    w = {"elements": [a, b], "basis": [k], "lhs": lhs, "rhs": rhs}
                    return AxiomReport([AxiomResult(TRACE_AXIOM, False, w)])
    return AxiomReport([AxiomResult(TRACE_AXIOM, True)])


def full_report(A: GFrobeniusAlgebra) -> AxiomReport:
    return check_axioms(A) + check_trace(A)


# -- constructors -------------------------------------------------------------------


def group_ring(G: FiniteGroup) -> GFrobeniusAlgebra:
    """``C[G]``: ``e_a e_b = e_ab``, ``eta(e_a, e_b) = [a b = 1]``, unit ``e_1``."""
    M = gmodule.group_ring_module(G)
    mult = {(a, b): {G.mul(a, b): Fraction(1)} for a in G.elements() for b in G.elements()}
    return GFrobeniusAlgebra(M, mult, {0: Fraction(1)})


def rescale(A: GFrobeniusAlgebra, lam2) -> GFrobeniusAlgebra:
    """Metric ``eta -> eta / lam2``; the product and unit are untouched."""
    lam2 = linalg.as_fraction(lam2)
    if not lam2:
        raise ValueError("rescaling factor must be nonzero")
    M = A.module
    metric = {k: v / lam2 for k, v in M.metric.items()}
    return GFrobeniusAlgebra(GGradedModule(M.group, M.sector_of, M.action, metric), A.mult, A.unit)


def tensor_external_alg(A1: GFrobeniusAlgebra, A2: GFrobeniusAlgebra) -> GFrobeniusAlgebra:
    M = gmodule.tensor_external(A1.module, A2.module)
    d2 = A2.dim
    key = lambda a, b: a * d2 + b  # noqa: E731
    mult = {}
    for (i1, i2), p1 in A1.mult.items():
        for (j1, j2), p2 in A2.mult.items():
            mult[(key(i1, j1), key(i2, j2))] = gmodule._outer(p1, p2, key)
    return GFrobeniusAlgebra(M, mult, gmodule._outer(A1.unit, A2.unit, key))


def tensor_odot_alg(A1: GFrobeniusAlgebra, A2: GFrobeniusAlgebra) -> GFrobeniusAlgebra:
    if A1.group is not A2.group:
        raise AlgebraError("the (.) product needs both algebras over the same group")
    M = gmodule.tensor_odot(A1.module, A2.module)
    pairs = gmodule.odot_pairs(A1.module, A2.module)
    index = {p: k for k, p in enumerate(pairs)}
    mult = {}
    for k1, (i1, j1) in enumerate(pairs):
        for k2, (i2, j2) in enumerate(pairs):
            p = gmodule._outer(A1.basis_product(i1, i2), A2.basis_product(j1, j2), lambda a, b: index[(a, b)])
            if p:
                mult[(k1, k2)] = p
    unit = gmodule._outer(A1.unit, A2.unit, lambda a, b: index[(a, b)])
    return GFrobeniusAlgebra(M, mult, unit)


def direct_sum(A1: GFrobeniusAlgebra, A2: GFrobeniusAlgebra) -> GFrobeniusAlgebra:
    """Block sum over a common group; basis of ``A2`` is shifted by ``A1.dim``."""
    if A1.group is not A2.group:
        raise AlgebraError("direct sum needs a common group")
    G = A1.group
    s = A1.dim
    shift = lambda v: {k + s: x for k, x in v.items()}  # noqa: E731
    sector_of = list(A1.module.sector_of) + list(A2.module.sector_of)
    action = [list(A1.module.action[g]) + [shift(v) for v in A2.module.action[g]] for g in G.elements()]
    metric = dict(A1.module.metric)
    metric.update({(i + s, j + s): c for (i, j), c in A2.module.metric.items()})
    mult = dict(A1.mult)
    mult.update({(i + s, j + s): shift(p) for (i, j), p in A2.mult.items()})
    unit = sp_add(A1.unit, shift(A2.unit))
    return GFrobeniusAlgebra(GGradedModule(G, sector_of, action, metric), mult, unit)


def change_of_basis(A: GFrobeniusAlgebra, P: Mapping[int, Matrix]) -> GFrobeniusAlgebra:
    """Transport the whole structure to the basis given by the per-sector blocks ``P``."""
    new_vecs, to_new = gmodule.basis_change(A.module, P)
    M = gmodule.change_of_basis(A.module, P)
    mult = {}
    for i in range(A.dim):
        for j in range(A.dim):
            p = to_new(A.product(new_vecs[i], new_vecs[j]))
            if p:
                mult[(i, j)] = p
    return GFrobeniusAlgebra(M, mult, to_new(A.unit))


def from_mu(
    module: GGradedModule,
    mu_values: Mapping[Tuple[int, int, int], Fraction],
    unit: Mapping[int, Fraction],
) -> GFrobeniusAlgebra:
    """Recover the product from ``mu(e_a, e_b, e_c)`` and the inverse metric."""
    n = module.dim
    full = [[module.metric.get((i, j), Fraction(0)) for j in range(n)] for i in range(n)]
    inv = linalg.inverse(full)
    mult = {}
    for b in range(n):
        for c in range(n):
            col = [mu_values.get((a, b, c), Fraction(0)) for a in range(n)]
            if not any(col):
                continue
            coords = [sum((inv[k][a] * col[a] for a in range(n) if col[a]), Fraction(0)) for k in range(n)]
            mult[(b, c)] = linalg.sp_from_dense(coords)
    return GFrobeniusAlgebra(module, mult, unit)


# -- isomorphism checks -------------------------------------------------------------


def check_isomorphism(
    A: GFrobeniusAlgebra,
    B: GFrobeniusAlgebra,
    phi: Sequence[Mapping[int, Fraction]],
    group_map: Optional[Sequence[int]] = None,
) -> List[str]:
    """Failures of the linear map ``phi`` (images of A's basis) to be a G-Frobenius isomorphism.

    ``group_map`` sends A's group elements to B's; identity when omitted.
    """
    GA = A.group
    gm = list(group_map) if group_map is not None else list(GA.elements())
    problems: List[str] = []
    if A.dim != B.dim:
        return [f"dimension {A.dim} != {B.dim}"]
    dense = [linalg.sp_to_dense(phi[i], range(B.dim)) for i in range(A.dim)]
    if linalg.rank(dense) != A.dim:
        problems.append("map is not invertible")

    def apply(v):
        out: SparseVec = {}
        for i, x in v.items():
            out = sp_add(out, phi[i], x)
        return out

    for i in range(A.dim):
        want = gm[A.module.sector_of[i]]
        if any(B.module.sector_of[k] != want for k in phi[i]):
            problems.append(f"basis vector {i} lands outside sector {want}")
            break
    for g in GA.elements():
        if any(apply(A.module.action[g][i]) != B.act(gm[g], phi[i]) for i in range(A.dim)):
            problems.append(f"map does not intertwine the action of element {g}")
            break
    for i in range(A.dim):
        for j in range(A.dim):
            if A.eta({i: 1}, {j: 1}) != B.eta(phi[i], phi[j]):
                problems.append(f"metric differs at ({i}, {j})")
                break
            if apply(A.basis_product(i, j)) != B.product(phi[i], phi[j]):
                problems.append(f"product differs at ({i}, {j})")
                break
    if apply(A.unit) != B.unit:
        problems.append("unit is not preserved")
    return problems


def odot_unit_map(R: GFrobeniusAlgebra, A: GFrobeniusAlgebra) -> List[SparseVec]:
    """The map ``e_m (x) v_m -> v_m`` from ``C[G] (.) A`` to ``A`` on the odot basis."""
    pairs = gmodule.odot_pairs(R.module, A.module)
    return [{j: Fraction(1)} for _, j in pairs]


def product_group_map(G1: FiniteGroup, G2: FiniteGroup, H: FiniteGroup) -> Tuple[int, ...]:
    """An isomorphism ``G1 x G2 -> H`` (index tuple), or raise."""
    iso = group_isomorphism(direct_product(G1, G2), H)
    if iso is None:
        raise AlgebraError(f"{G1.name} x {G2.name} is not isomorphic to {H.name}")
    return iso


# -- classical Frobenius algebras ------------------------------------------------------


class FrobeniusAlgebra:
    """Commutative Frobenius algebra with a labelled basis.

    ``table[i][j]`` is the dense coordinate vector of ``e_i e_j``;
    ``labels[i]`` is an optional grading tag (class index for coinvariants).
    """

    def __init__(
        self,
        metric: Matrix,
        table: Sequence[Sequence[Sequence[Fraction]]],
        unit: Sequence[Fraction],
        labels: Optional[Sequence[int]] = None,
        names: Optional[Sequence[str]] = None,
    ) -> None:
        self.dim = len(metric)
        self.metric = [[linalg.as_fraction(x) for x in row] for row in metric]
        self.table = [[[linalg.as_fraction(x) for x in v] for v in row] for row in table]
        self.unit = [linalg.as_fraction(x) for x in unit]
        self.labels = tuple(labels) if labels is not None else (0,) * self.dim
        self.names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(self.dim))

    def __repr__(self) -> str:
        return f"FrobeniusAlgebra(dim={self.dim})"

    @classmethod
    def from_mu(cls, metric: Matrix, mu3, unit, labels=None, names=None) -> "FrobeniusAlgebra":
        """Product from ``mu3[a][b][c] = eta(e_a, e_b e_c)`` and the inverse metric."""
        inv = linalg.inverse(metric)
        n = len(metric)
        table = [
            [[sum((inv[k][a] * mu3[a][b][c] for a in range(n)), Fraction(0)) for k in range(n)] for c in range(n)]
            for b in range(n)
        ]
        return cls(metric, table, unit, labels, names)

    def product(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> List[Fraction]:
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in enumerate(v):
                if y:
                    for k, z in enumerate(self.table[i][j]):
                        if z:
                            out[k] += x * y * z
        return out

    def eta(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum(
            (u[i] * self.metric[i][j] * v[j] for i in range(self.dim) if u[i] for j in range(self.dim) if v[j]),
            Fraction(0),
        )

    def mu(self, u, v, w) -> Fraction:
        return self.eta(u, self.product(v, w))

    def basis(self, i: int) -> List[Fraction]:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def mu_tensor(self) -> List[List[List[Fraction]]]:
        n = self.dim
        return [[[self.mu(self.basis(a), self.basis(b), self.basis(c)) for c in range(n)] for b in range(n)] for a in range(n)]

    def check(self) -> AxiomReport:
        n = self.dim
        e = self.basis
        report = AxiomReport()

        def add(name, w):
            report.results.append(AxiomResult(name, w is None, w))

        w = None
        for i in range(n):
            for j in range(n):
                if self.table[i][j] != self.table[j][i]:
                    w = {"basis": [i, j]}
                    break
            if w:
                break
        add("commutativity", w)
        w = None
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.product(self.table[i][j], e(k)) != self.product(e(i), self.table[j][k]):
                        w = w or {"basis": [i, j, k]}
        add("associativity", w)
        w = None
        for i in range(n):
            if self.product(self.unit, e(i)) != e(i):
                w = {"basis": [i]}
                break
        add("unit", w)
        w = None
        for i in range(n):
            for j in range(n):
                if self.metric[i][j] != self.metric[j][i]:
                    w = {"basis": [i, j]}
        if w is None and linalg.rank(self.metric) != n:
            w = {"message": "metric is degenerate"}
        add("metric", w)
        w = None
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.eta(self.table[i][j], e(k)) != self.eta(e(i), self.table[j][k]):
                        w = w or {"basis": [i, j, k]}
        add("metric-product-invariance", w)
        return report


def classical_isomorphism_failures(F1: FrobeniusAlgebra, F2: FrobeniusAlgebra, phi: Matrix) -> List[str]:
    """``phi[i]`` is the image of ``F1``'s i-th basis vector in ``F2`` coordinates."""
    if F1.dim != F2.dim:
        return ["dimensions differ"]
    n = F1.dim
    out = []
    if linalg.rank(phi) != n:
        out.append("map is not invertible")

    def apply(v):
        res = [Fraction(0)] * n
        for i, x in enumerate(v):
            if x:
                for k in range(n):
                    res[k] += x * phi[i][k]
        return res

    for i in range(n):
        for j in range(n):
            if F1.metric[i][j] != F2.eta(phi[i], phi[j]):
                out.append(f"metric differs at ({i}, {j})")
            if apply(F1.table[i][j]) != F2.product(phi[i], phi[j]):
                out.append(f"product differs at ({i}, {j})")
    if apply(F1.unit) != F2.unit:
        out.append("unit not preserved")
    return out


def trivial_algebra(F: FrobeniusAlgebra) -> GFrobeniusAlgebra:
    """A classical algebra viewed over the trivial group."""
    from .groups import named_group

    G = named_group("1")
    n = F.dim
    action = [[{i: Fraction(1)} for i in range(n)]]
    metric = {(i, j): F.metric[i][j] for i in range(n) for j in range(n) if F.metric[i][j]}
    mult = {(i, j): linalg.sp_from_dense(F.table[i][j]) for i in range(n) for j in range(n)}
    return GFrobeniusAlgebra(GGradedModule(G, [0] * n, action, metric), mult, linalg.sp_from_dense(F.unit))


def untwisted_sector(A: GFrobeniusAlgebra) -> FrobeniusAlgebra:
    idx = A.module.sector_basis[0]
    pos = {i: k for k, i in enumerate(idx)}
    metric = [[A.module.metric.get((i, j), Fraction(0)) for j in idx] for i in idx]
    table = [[_dense_in(A.basis_product(i, j), pos) for j in idx] for i in idx]
    F = FrobeniusAlgebra(metric, table, _dense_in(A.unit, pos))
    if not F.check().ok:
        raise AssertionError("untwisted sector fails the classical Frobenius axioms")
    return F


def _dense_in(v: Mapping[int, Fraction], pos: Mapping[int, int]) -> List[Fraction]:
    out = [Fraction(0)] * len(pos)
    for i, x in v.items():
        out[pos[i]] = x
    return out


def classical_tensor(F1: FrobeniusAlgebra, F2: FrobeniusAlgebra) -> FrobeniusAlgebra:
    n2 = F2.dim
    n = F1.dim * n2
    metric = [[F1.metric[i // n2][j // n2] * F2.metric[i % n2][j % n2] for j in range(n)] for i in range(n)]
    table = [
        [
            [F1.table[i // n2][j // n2][k // n2] * F2.table[i % n2][j % n2][k % n2] for k in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]
    unit = [F1.unit[k // n2] * F2.unit[k % n2] for k in range(n)]
    return FrobeniusAlgebra(metric, table, unit)


def function_algebra(npoints: int) -> FrobeniusAlgebra:
    """Functions on a finite set: pointwise product, counting metric."""
    table = [[[Fraction(int(i == j == k)) for k in range(npoints)] for j in range(npoints)] for i in range(npoints)]
    return FrobeniusAlgebra(linalg.identity(npoints), table, [Fraction(1)] * npoints)


# -- coinvariants and rescalings ----------------------------------------------------------


@dataclass
class CoinvariantAlgebra:
    """Quotient algebra on the class-sum basis together with its provenance."""

    algebra: FrobeniusAlgebra
    basis: gmodule.CoinvariantBasis
    group: FiniteGroup

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def classes(self) -> Tuple[int, ...]:
        return self.basis.classes


def coinvariant_algebra(A: GFrobeniusAlgebra) -> CoinvariantAlgebra:
    """Restriction of the product to the image of ``pi_G`` with metric ``eta / |G|``.

    Checks closure, the ``mu / |G|`` relation on every basis triple, the class
    grading of products, and the classical axioms of the result.
    """
    G = A.group
    M = A.module
    cb = gmodule.coinvariant_basis(M)
    vecs = cb.vectors
    n = len(vecs)
    order = Fraction(G.order)
    metric = [[A.eta(v, w) / order for w in vecs] for v in vecs]
    products = [[A.product(v, w) for w in vecs] for v in vecs]
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            try:
                row.append(gmodule.coordinates(vecs, products[i][j]))
            except ValueError:
                raise AlgebraError("coinvariants are not closed under the product") from None
        table.append(row)
    unit_coords = gmodule.coordinates(vecs, gmodule.pi_G(M, A.unit))
    F = FrobeniusAlgebra(metric, table, unit_coords, labels=cb.classes)
    report = F.check()
    if not report.ok:
        raise AssertionError(f"coinvariant algebra fails {[r.name for r in report.failures()]}")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if F.mu(F.basis(i), F.basis(j), F.basis(k)) != mu(A, vecs[i], vecs[j], vecs[k]) / order:
                    raise AssertionError("restricted three-point function is not mu / |G|")
    _check_class_grading(G, F)
    return CoinvariantAlgebra(F, cb, G)


def _check_class_grading(G: FiniteGroup, F: FrobeniusAlgebra) -> None:
    cc = G.conjugacy
    for i in range(F.dim):
        for j in range(F.dim):
            allowed = {
                cc.class_of[G.mul(a, b)]
                for a in cc.members[F.labels[i]]
                for b in cc.members[F.labels[j]]
            }
            for k, x in enumerate(F.table[i][j]):
                if x and F.labels[k] not in allowed:
                    raise AssertionError("coinvariant product violates the class grading")


def class_algebra(G: FiniteGroup) -> FrobeniusAlgebra:
    """Centre of the group ring on class sums, with metric ``eta / |G|``."""
    cc = G.conjugacy
    k = len(cc)
    const = G.class_structure_constants
    table = [[[Fraction(const[c][d][e]) for e in range(k)] for d in range(k)] for c in range(k)]
    metric = [
        [Fraction(cc.sizes[c], G.order) if d == cc.inverse_class[c] else Fraction(0) for d in range(k)]
        for c in range(k)
    ]
    unit = [Fraction(int(c == 0)) for c in range(k)]
    return FrobeniusAlgebra(metric, table, unit, labels=range(k))


@dataclass
class KRescaling:
    """``phi(v) = k v`` per class and the rescaled algebra it identifies with the original."""

    k: Tuple[int, ...]
    original: FrobeniusAlgebra
    rescaled: FrobeniusAlgebra

    def phi(self) -> Matrix:
        n = len(self.k)
        return [[Fraction(self.k[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def k_rescaling(Q: CoinvariantAlgebra) -> KRescaling:
    """Divide ``mu`` by ``k_1 k_2 k_3`` and the metric by ``k_1 k_2``; verify ``phi`` pulls both back."""
    G = Q.group
    cc = G.conjugacy
    F = Q.algebra
    n = F.dim
    k = tuple(G.element_order(cc.reps[c]) for c in Q.classes)
    metric = [[F.metric[i][j] / (k[i] * k[j]) for j in range(n)] for i in range(n)]
    mu3 = F.mu_tensor()
    mu3p = [[[mu3[a][b][c] / (k[a] * k[b] * k[c]) for c in range(n)] for b in range(n)] for a in range(n)]
    unit = [x / k[i] for i, x in enumerate(F.unit)]
    R = FrobeniusAlgebra.from_mu(metric, mu3p, unit, labels=F.labels)
    out = KRescaling(k, F, R)
    phi = out.phi()
    for a in range(n):
        for b in range(n):
            if R.eta(phi[a], phi[b]) != F.metric[a][b]:
                raise AssertionError("phi does not pull the rescaled metric back")
            for c in range(n):
                if R.mu(phi[a], phi[b], phi[c]) != mu3[a][b][c]:
                    raise AssertionError("phi does not pull the rescaled mu back")
    if classical_isomorphism_failures(F, R, phi):
        raise AssertionError("phi is not an isomorphism onto the rescaled algebra")
    return out
