import random
from fractions import Fraction

import pytest

from conftest import random_algebra, random_vector
from gcohft import frobenius as fr
from gcohft import gmodule, linalg, orbifold
from gcohft.groups import named_group


@pytest.fixture(scope="module")
def S3():
    return named_group("S3")


def e(i):
    return {i: Fraction(1)}


def test_group_ring_structure(S3):
    A = fr.group_ring(S3)
    t12, t13 = S3.element("(1 2)"), S3.element("(1 3)")
    assert A.eta(e(t12), e(t12)) == 1
    assert A.product(e(t12), e(t13)) == e(S3.mul(t12, t13))
    assert fr.full_report(A).ok


def test_mu_on_group_ring(S3):
    A = fr.group_ring(S3)
    for a in S3.elements():
        for b in S3.elements():
            for c in S3.elements():
                assert fr.mu(A, e(a), e(b), e(c)) == int(S3.prod([a, b, c]) == 0)
    rng = random.Random(0)
    v, w = random_vector(6, rng), random_vector(6, rng)
    assert fr.mu(A, A.unit, v, w) == A.eta(v, w)


def test_mu_invariant_under_double_braid():
    G = named_group("D4")
    A = random_algebra(G, seed=4)
    rng = random.Random(4)
    for _ in range(10):
        w = {tuple(rng.randrange(A.dim) for _ in range(3)): Fraction(rng.randint(1, 4)) for _ in range(5)}
        for i in (1, 2):
            assert fr.mu_on_tensor(A, gmodule.apply_braid_word(A.module, 3, [i, i], w)) == fr.mu_on_tensor(A, w)


def test_forced_unit_failure(S3):
    A = fr.group_ring(S3)
    B = fr.GFrobeniusAlgebra(A.module, A.mult, {0: Fraction(2)})
    report = fr.check_axioms(B)
    assert [r.name for r in report.failures()] == ["unit"]
    assert report.result("unit").witness["basis"] == [0]


def test_forced_product_failure(S3):
    A = fr.group_ring(S3)
    mult = dict(A.mult)
    mult[(S3.element("(1 2)"), S3.element("(1 3)"))] = {}
    failing = {r.name for r in fr.full_report(fr.GFrobeniusAlgebra(A.module, mult, A.unit)).failures()}
    assert {"associativity", "metric-product-invariance"} <= failing


def test_forced_metric_failure(S3):
    A = fr.group_ring(S3)
    M = A.module
    metric = {k: v for k, v in M.metric.items() if k != (1, 1)}
    B = fr.GFrobeniusAlgebra(gmodule.GGradedModule(S3, M.sector_of, M.action, metric), A.mult, A.unit)
    report = fr.check_axioms(B)
    assert not report.result("metric").passed
    assert report.to_dict()["passed"] is False


def test_trace_example(S3):
    A = fr.group_ring(S3)
    a, b = S3.element("(1 2)"), S3.element("(1 3)")
    assert fr.trace_sides(A, a, b, e(S3.commutator(a, b))) == (1, 1)
    Z4 = named_group("Z4")
    R = fr.group_ring(Z4)
    for x in Z4.elements():
        for y in Z4.elements():
            assert fr.trace_sides(R, x, y, e(0)) == (1, 1)


def test_trace_detects_missing_twisted_sector():
    # Z2 acting trivially on {x, y} but with a twisted sector over x only:
    # every other axiom holds, yet Tr_{H_t}(L_v) != Tr_{H_1}(rho(t) L_v) for v = delta_y
    Z2 = named_group("Z2")
    full = orbifold.fg_finite_gset(orbifold.trivial_gset(Z2, 2))
    keep = [0, 1, 2]
    sector_of = [full.module.sector_of[i] for i in keep]
    action = [[full.module.action[g][i] for i in keep] for g in Z2.elements()]
    metric = {k: v for k, v in full.module.metric.items() if set(k) <= set(keep)}
    mult = {k: v for k, v in full.mult.items() if set(k) <= set(keep) and set(v) <= set(keep)}
    B = fr.GFrobeniusAlgebra(gmodule.GGradedModule(Z2, sector_of, action, metric), mult, full.unit)
    assert fr.check_axioms(B).ok
    report = fr.check_trace(B)
    assert not report.ok
    w = report.result("trace").witness
    assert w["lhs"] != w["rhs"]


@pytest.mark.parametrize("name", ["S3", "D4", "Q8"])
def test_random_models_pass(name):
    assert fr.full_report(random_algebra(named_group(name), seed=name)).ok


def test_braided_commutativity_is_commutativity_on_abelian():
    G = named_group("V4")
    A = random_algebra(G, seed=2)
    for i in range(A.dim):
        for j in range(A.dim):
            assert A.basis_product(i, j) == A.basis_product(j, i)


def test_coinvariant_algebra_group_ring(S3):
    Q = fr.coinvariant_algebra(fr.group_ring(S3))
    F = Q.algebra
    assert Q.dim == 3
    assert F.table[1][1] == [3, 0, 3]
    assert F.metric[1][1] == Fraction(1, 2)
    assert fr.classical_isomorphism_failures(F, fr.class_algebra(S3), linalg.identity(3)) == []


def test_coinvariant_of_trivial_group_is_identity():
    F = fr.function_algebra(2)
    A = fr.trivial_algebra(F)
    Q = fr.coinvariant_algebra(A)
    assert Q.algebra.metric == F.metric and Q.algebra.table == F.table


@pytest.mark.parametrize("name", ["Q8", "D4", "S4"])
def test_coinvariants_are_class_algebras(name):
    G = named_group(name)
    Q = fr.coinvariant_algebra(fr.group_ring(G))
    k = len(G.conjugacy)
    assert fr.classical_isomorphism_failures(Q.algebra, fr.class_algebra(G), linalg.identity(k)) == []


def test_rescale_keeps_product(S3):
    A = fr.group_ring(S3)
    B = fr.rescale(A, Fraction(1, 6))
    assert B.mult == A.mult and fr.full_report(B).ok
    QB = fr.coinvariant_algebra(B)
    basis = QB.basis.vectors
    for i, v in enumerate(basis):
        for j, w in enumerate(basis):
            assert QB.algebra.metric[i][j] == A.eta(v, w)
    assert fr.rescale(A, 1).module.metric == A.module.metric
    with pytest.raises(ValueError):
        fr.rescale(A, 0)
    rng = random.Random(9)
    v, w = random_vector(6, rng), random_vector(6, rng)
    assert B.product(v, w) == A.product(v, w)
    assert fr.mu(B, v, w, w) == 6 * fr.mu(A, v, w, w)


def test_k_rescaling(S3):
    K = fr.k_rescaling(fr.coinvariant_algebra(fr.group_ring(S3)))
    assert K.k == (1, 2, 3)
    R, F = K.rescaled, K.original
    phi = K.phi()
    for a in range(3):
        for b in range(3):
            for c in range(3):
                expected = F.mu(F.basis(a), F.basis(b), F.basis(c)) / (K.k[a] * K.k[b] * K.k[c])
                assert R.mu(R.basis(a), R.basis(b), R.basis(c)) == expected
                assert R.mu(phi[a], phi[b], phi[c]) == F.mu(F.basis(a), F.basis(b), F.basis(c))
    assert R.check().ok


def test_odot_with_group_ring():
    for name in ("S3", "Q8"):
        G = named_group(name)
        R = fr.group_ring(G)
        for A in (fr.group_ring(G), random_algebra(G, seed=name)):
            O = fr.tensor_odot_alg(R, A)
            assert fr.check_isomorphism(O, A, fr.odot_unit_map(R, A)) == []


def test_external_products_pass_and_z6():
    Z2, Z3, Z6 = named_group("Z2"), named_group("Z3"), named_group("Z6")
    E = fr.tensor_external_alg(fr.group_ring(Z2), fr.group_ring(Z3))
    assert fr.full_report(E).ok
    gm = fr.product_group_map(Z2, Z3, Z6)
    phi = [{gm[E.module.sector_of[i]]: Fraction(1)} for i in range(E.dim)]
    assert fr.check_isomorphism(E, fr.group_ring(Z6), phi, gm) == []
    S3 = named_group("S3")
    A = random_algebra(S3, seed=1)
    T = fr.tensor_external_alg(fr.trivial_algebra(fr.function_algebra(1)), A)
    assert T.mult == A.mult and T.module.metric == A.module.metric


def test_odot_mismatch_raises():
    with pytest.raises(fr.AlgebraError):
        fr.tensor_odot_alg(fr.group_ring(named_group("Z2")), fr.group_ring(named_group("Z3")))


def test_untwisted_sectors(S3):
    U = fr.untwisted_sector(fr.group_ring(S3))
    assert U.dim == 1 and U.table == [[[1]]]
    X = orbifold.natural(S3)
    U = fr.untwisted_sector(orbifold.fg_finite_gset(X))
    assert fr.classical_isomorphism_failures(U, fr.function_algebra(3), linalg.identity(3)) == []
    A, B = random_algebra(S3, seed=3), orbifold.fg_finite_gset(X)
    lhs = fr.untwisted_sector(fr.tensor_odot_alg(A, B))
    rhs = fr.classical_tensor(fr.untwisted_sector(A), fr.untwisted_sector(B))
    assert fr.classical_isomorphism_failures(lhs, rhs, linalg.identity(lhs.dim)) == []


def test_from_mu_recovers_product(S3):
    A = random_algebra(S3, seed=8)
    n = A.dim
    mu_values = {(a, b, c): fr.mu(A, e(a), e(b), e(c)) for a in range(n) for b in range(n) for c in range(n)}
    B = fr.from_mu(A.module, {k: v for k, v in mu_values.items() if v}, A.unit)
    assert B.mult == A.mult


def test_direct_sum_passes(S3):
    A = fr.direct_sum(fr.group_ring(S3), random_algebra(S3, seed=2))
    assert fr.full_report(A).ok


def test_classical_check_flags_noncommutative():
    F = fr.function_algebra(2)
    table = [[list(v) for v in row] for row in F.table]
    table[0][1] = [Fraction(1), Fraction(0)]
    bad = fr.FrobeniusAlgebra(F.metric, table, F.unit)
    assert not bad.check().result("commutativity").passed
