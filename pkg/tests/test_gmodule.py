import random
from fractions import Fraction

import pytest

from conftest import LISTED, random_algebra, random_vector
from gcohft import linalg
from gcohft.gmodule import (
    GGradedModule,
    apply_braid_word,
    braid_on_tensor,
    check_projection_factor,
    coinvariant_basis,
    coinvariant_metric,
    group_ring_module,
    invariant_subspace,
    odot_pairs,
    pi_Cm,
    pi_G,
    pi_m_iso,
    pure_tensor,
    tensor_external,
    tensor_odot,
    untwisted_module,
    validate_module,
)
from gcohft.groups import named_group


@pytest.fixture(scope="module")
def S3():
    return named_group("S3")


def test_group_ring_module_valid(S3):
    assert validate_module(group_ring_module(S3)).ok


def test_untwisted_representation_valid(S3):
    # e_x -> e_{x.g} on C^3, all in the identity sector
    rep = [[[Fraction(int(p[c] == r)) for c in range(3)] for r in range(3)] for p in S3.perms]
    M = untwisted_module(S3, rep, linalg.identity(3))
    assert validate_module(M).ok


def test_bad_metric_block_reported(S3):
    M = group_ring_module(S3)
    metric = dict(M.metric)
    metric[(0, 1)] = metric[(1, 0)] = Fraction(1)
    bad = GGradedModule(S3, M.sector_of, M.action, metric)
    messages = [v["message"] for v in validate_module(bad).violations]
    assert any("product is not 1" in m for m in messages)


def test_non_right_action_reported(S3):
    # a left action (rho(g) e_m = e_{g m g^-1}) breaks the right-action law
    action = [[{S3.conj(m, S3.inv(g)): Fraction(1)} for m in S3.elements()] for g in S3.elements()]
    M = GGradedModule(S3, list(S3.elements()), action, group_ring_module(S3).metric)
    assert not validate_module(M).ok


def test_pi_G_example(S3):
    M = group_ring_module(S3)
    t = S3.element("(1 2)")
    v = pi_G(M, {t: Fraction(1)})
    assert v == {S3.element(x): Fraction(1, 3) for x in ("(1 2)", "(1 3)", "(2 3)")}


def test_projectors_idempotent_and_compatible():
    rng = random.Random(1)
    for name in ("S3", "D4"):
        G = named_group(name)
        A = random_algebra(G, seed=name)
        M = A.module
        for _ in range(5):
            v = random_vector(M.dim, rng)
            p = pi_G(M, v)
            assert pi_G(M, p) == p
            assert all(M.act(g, p) == p for g in G.elements())
        for m in G.elements():
            for i in M.sector_basis[m]:
                v = {i: Fraction(1)}
                c = pi_Cm(M, m, v)
                assert pi_Cm(M, m, c) == c
                assert pi_G(M, v) == pi_G(M, c)


def test_image_of_pi_G_is_fixed_space():
    G = named_group("D4")
    M = random_algebra(G, seed=3).module
    image = [linalg.sp_to_dense(pi_G(M, {i: Fraction(1)}), range(M.dim)) for i in range(M.dim)]
    rows = []
    for g in G.elements():
        for r in range(M.dim):
            rows.append([M.action[g][c].get(r, Fraction(0)) - (1 if r == c else 0) for c in range(M.dim)])
    fixed = len(linalg.nullspace(rows, M.dim))
    assert linalg.rank(image) == fixed == len(coinvariant_basis(M))


def test_pi_G_rejects_wrong_sector(S3):
    M = group_ring_module(S3)
    with pytest.raises(ValueError):
        pi_Cm(M, 1, {2: Fraction(1)})


def test_pi_m_iso_inverse(S3):
    M = group_ring_module(S3)
    t = S3.element("(1 2)")
    iso = pi_m_iso(M, t)
    assert iso.f(iso.pi({t: Fraction(1)})) == {t: Fraction(1)}
    one = pi_m_iso(M, 0)
    assert one.scale == 1


@pytest.mark.parametrize("name", LISTED)
def test_pi_m_iso_round_trips(name):
    G = named_group(name)
    M = random_algebra(G, seed=name).module
    for m in G.elements():
        iso = pi_m_iso(M, m)
        assert len(iso.invariant_basis) == len(invariant_subspace(M, m))
        for w in iso.invariant_basis:
            assert iso.f(iso.pi(w)) == w
            back = iso.pi(iso.f(iso.pi(w)))
            assert back == iso.pi(w)


def test_coinvariant_metric_values(S3):
    M = group_ring_module(S3)
    cm = coinvariant_metric(M)
    assert cm.gram[1][1] == Fraction(1, 2)
    p = pi_G(M, {S3.element("(1 2)"): Fraction(1)})
    assert M.eta(p, p) / 6 == Fraction(1, 18)
    trivial = group_ring_module(named_group("1"))
    assert coinvariant_metric(trivial).gram == ((Fraction(1),),)


@pytest.mark.parametrize("name", LISTED)
def test_projection_factor_on_random_modules(name):
    G = named_group(name)
    assert check_projection_factor(random_algebra(G, seed=name).module) > 0


def test_odot_with_group_ring_is_identity_shaped(S3):
    R = group_ring_module(S3)
    M = random_algebra(S3, seed=7).module
    O = tensor_odot(R, M)
    assert validate_module(O).ok
    assert O.sector_dims() == M.sector_dims()
    for m in S3.elements():
        assert O.sector_dims()[m] == R.sector_dims()[m] * M.sector_dims()[m]
    pairs = odot_pairs(R, M)
    for g in S3.elements():
        for k, (_, j) in enumerate(pairs):
            image = O.action[g][k]
            assert {pairs[kk][1]: x for kk, x in image.items()} == M.action[g][j]


def test_external_with_trivial_group(S3):
    M = random_algebra(S3, seed=5).module
    E = tensor_external(M, group_ring_module(named_group("1")))
    assert E.sector_of == M.sector_of and E.action == M.action and E.metric == M.metric


def test_external_dims_multiply():
    Z2, S3 = named_group("Z2"), named_group("S3")
    M1, M2 = random_algebra(Z2, seed=1).module, random_algebra(S3, seed=2).module
    E = tensor_external(M1, M2)
    assert validate_module(E).ok
    for a in Z2.elements():
        for b in S3.elements():
            assert E.sector_dims()[a * 6 + b] == M1.sector_dims()[a] * M2.sector_dims()[b]


def test_braid_example(S3):
    M = group_ring_module(S3)
    a, b = S3.element("(1 2)"), S3.element("(1 3)")
    out = braid_on_tensor(M, 2, 1, {(a, b): Fraction(1)})
    assert out == {(S3.element("(2 3)"), a): Fraction(1)}
    with pytest.raises(IndexError):
        braid_on_tensor(M, 2, 2, {(a, b): Fraction(1)})


def test_braid_on_identity_sector_is_swap():
    G = named_group("S3")
    M = random_algebra(G, seed=11).module
    idx = M.sector_basis[0]
    w = {(i, j): Fraction(i + 2 * j + 1) for i in idx for j in idx}
    assert braid_on_tensor(M, 2, 1, w) == {(j, i): x for (i, j), x in w.items()}


def _random_tensor(M, n, rng):
    keys = [tuple(rng.randrange(M.dim) for _ in range(n)) for _ in range(6)]
    return {k: Fraction(rng.randint(1, 5)) for k in keys}


@pytest.mark.parametrize("name", ["S3", "Q8"])
def test_braid_relations(name):
    G = named_group(name)
    rng = random.Random(name)
    for M in (group_ring_module(G), random_algebra(G, seed=name).module):
        for n in (3, 4):
            for _ in range(3):
                w = _random_tensor(M, n, rng)
                for i in range(1, n - 1):
                    assert apply_braid_word(M, n, [i, i + 1, i], w) == apply_braid_word(M, n, [i + 1, i, i + 1], w)
                for i in range(1, n):
                    assert apply_braid_word(M, n, [i, -i], w) == w
                if n == 4:
                    assert apply_braid_word(M, n, [1, 3], w) == apply_braid_word(M, n, [3, 1], w)


def test_pure_tensor():
    assert pure_tensor([{0: Fraction(2)}, {1: Fraction(3), 2: Fraction(1)}]) == {(0, 1): 6, (0, 2): 2}
