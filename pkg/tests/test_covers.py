import itertools
import random
from fractions import Fraction

import pytest

from gcohft.covers import (
    GluingIdentityError,
    HolonomyDatum,
    InvalidHolonomyError,
    _iso_holds,
    all_gluing_checks,
    automorphisms,
    deg_st_tilde,
    fiber_groupoid,
    gluing_identity_check,
    holonomy_nonempty,
    hurwitz_braid,
    is_isomorphic,
    make_cover,
    monodromy_at,
    omega,
    omega_csv,
    omega_enumerate,
    omega_table,
    translate,
)
from gcohft.groups import GroupSizeError, named_group


@pytest.fixture(scope="module")
def S3():
    return named_group("S3")


def el(G, text):
    return G.element(text)


def test_make_cover_checks_relation(S3):
    t = el(S3, "(1 2)")
    obj = make_cover(S3, HolonomyDatum.genus_zero((t, t, 0)))
    assert [monodromy_at(S3, obj, i) for i in range(3)] == [t, t, 0]
    with pytest.raises(InvalidHolonomyError):
        make_cover(S3, HolonomyDatum.genus_zero((el(S3, "(1 2 3)"), t, 0)))


def test_genus_one_relation_accepted(S3):
    a, b = el(S3, "(1 2)"), el(S3, "(1 3)")
    c = S3.inv(S3.commutator(a, b))
    obj = make_cover(S3, HolonomyDatum(1, ((a, b),), (c,)))
    assert obj.holonomy.relation(S3) == 0


def test_translation_and_monodromy(S3):
    t, r = el(S3, "(1 2)"), el(S3, "(1 2 3)")
    obj = make_cover(S3, HolonomyDatum.genus_zero((t, t, 0)))
    assert translate(S3, obj, (0, 0, 0)) == obj
    moved = translate(S3, obj, (r, 0, r))
    assert monodromy_at(S3, moved, 0) == S3.conj(t, r)
    assert monodromy_at(S3, moved, 2) == 0
    # translating inside <c_i> leaves the pointing alone
    assert translate(S3, obj, (t, t, 0)) == obj


def test_isomorphism_examples(S3):
    t12, t13 = el(S3, "(1 2)"), el(S3, "(1 3)")
    a = make_cover(S3, HolonomyDatum.genus_zero((t12, t12, 0)))
    b = make_cover(S3, HolonomyDatum.genus_zero((t13, t13, 0)))
    assert is_isomorphic(S3, a, a) == 0
    # base objects of conjugate triples differ by the pointing; the translate is what matches
    assert is_isomorphic(S3, a, b) is None
    g = el(S3, "(2 3)")
    assert S3.conj(t12, g) == t13
    assert is_isomorphic(S3, translate(S3, a, (g, g, g)), b) == g


def test_automorphism_examples():
    Z4 = named_group("Z4")
    t = Z4.generators[0]
    obj = make_cover(Z4, HolonomyDatum.genus_zero((t, t, Z4.mul(t, t))))
    aut = automorphisms(Z4, obj)
    assert aut.order == 2 and Z4.mul(t, t) in aut
    S3 = named_group("S3")
    r = el(S3, "(1 2 3)")
    base = make_cover(S3, HolonomyDatum.genus_zero((r, S3.inv(r), 0)))
    assert automorphisms(S3, base).order == 1


@pytest.mark.parametrize("name", ["Z4", "S3", "D4", "Q8"])
def test_automorphisms_match_scan_on_random_objects(name):
    G = named_group(name)
    rng = random.Random(name)
    for _ in range(15):
        a, b = rng.randrange(G.order), rng.randrange(G.order)
        c1 = rng.randrange(G.order)
        c2 = G.inv(G.mul(G.commutator(a, b), c1))
        hol = HolonomyDatum(1, ((a, b),), (c1, c2))
        obj = make_cover(G, hol, (rng.randrange(G.order), rng.randrange(G.order)))
        scan = {h for h in G.elements() if _iso_holds(G, obj, obj, h)}
        assert scan == set(automorphisms(G, obj).elements)


def test_fiber_example(S3):
    r = el(S3, "(1 2 3)")
    fib = fiber_groupoid(S3, HolonomyDatum.genus_zero((r, S3.inv(r), 0)))
    assert fib.raw_pointings == 24 and fib.centralizer_order == 3
    assert sum(o.size for o in fib.orbits) == 24
    assert fib.centralizer_order * fib.mass == 24


def test_fiber_single_identity_point(S3):
    fib = fiber_groupoid(S3, HolonomyDatum.genus_zero((0,)))
    assert fib.raw_pointings == 6
    assert fib.centralizer_order * fib.mass == 6


def test_deg_st_tilde(S3):
    # unfiltered, all c_i trivial: |C| * sum 1/|Aut| counts every pointing
    assert deg_st_tilde(S3, HolonomyDatum.genus_zero((0, 0, 0))) == 216
    assert deg_st_tilde(S3, HolonomyDatum.genus_zero((0, 0, 0)), targets=[]) == 0
    t = el(S3, "(1 2)")
    targets = [(S3.conj(t, g), S3.conj(t, g), 0) for g in S3.elements()]
    assert deg_st_tilde(S3, HolonomyDatum.genus_zero((t, t, 0)), targets=targets) == 6


def test_hurwitz_examples(S3):
    m = (el(S3, "(1 2)"), el(S3, "(1 3)"), 0)
    out = hurwitz_braid(S3, m, [1])
    assert [S3.label(x) for x in out] == ["(2 3)", "(1 2)", "()"]
    assert hurwitz_braid(S3, m, []) == m
    assert hurwitz_braid(S3, m, [1, -1]) == m
    with pytest.raises(IndexError):
        hurwitz_braid(S3, m, [3])


def test_omega_examples(S3):
    R, T, E = 2, 1, 0
    assert omega(S3, 0, (R, R, R)) == Fraction(1, 3)
    assert omega(S3, 1, (E,)) == 3
    cc = S3.conjugacy
    for c in range(len(cc)):
        assert omega(S3, 0, (c, cc.inverse_class[c], 0)) == Fraction(1, cc.centralizer_orders[c])
    assert not holonomy_nonempty(S3, 0, (T, R, E))
    assert not holonomy_nonempty(S3, 1, (T,))
    assert holonomy_nonempty(S3, 0, (T, T, E))


@pytest.mark.parametrize("name", ["Z2", "V4", "S3"])
def test_omega_matches_enumeration(name):
    G = named_group(name)
    k = len(G.conjugacy)
    for g in range(2):
        for n in range(4):
            for classes in itertools.product(range(k), repeat=n):
                assert omega(G, g, classes) == omega_enumerate(G, g, classes)


def test_enumeration_guard():
    G = named_group("S4")
    with pytest.raises(GroupSizeError):
        omega_enumerate(G, 3, (0,), limit=10**6)


def test_gluing_identities_s3():
    G = named_group("S3")
    for classes in itertools.product(range(3), repeat=4):
        assert all(r.holds for r in all_gluing_checks(G, 0, classes))
    assert gluing_identity_check(G, "loop", 1, (0,)).lhs == 3


def test_gluing_rejects_bad_split():
    G = named_group("S3")
    with pytest.raises(ValueError):
        gluing_identity_check(G, "tree", 0, (0, 0), ((0, 0), 0))
    with pytest.raises(ValueError):
        gluing_identity_check(G, "loop", 0, (0,))


def test_gluing_error_is_assertion():
    assert issubclass(GluingIdentityError, AssertionError)


def test_omega_table_and_csv():
    Z2 = named_group("Z2")
    rows = omega_table(Z2, 0, 3)
    three = {r.classes: r.value for r in rows if len(r.classes) == 3}
    for classes, v in three.items():
        assert v == (Fraction(1, 2) if sum(classes) % 2 == 0 else 0)
    text = omega_csv(Z2, rows)
    assert text.splitlines()[0] == "genus,classes,numerator,denominator"
    assert "0,(1 2);(1 2);(),1,2" in text
