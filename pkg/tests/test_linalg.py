from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gcohft import linalg

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def F(rows):
    return [[Fraction(x, 1 + (i + j) % 3) for j, x in enumerate(row)] for i, row in enumerate(rows)]


def sym(a):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in a])


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    a = F(rows)
    assert linalg.rank(a) == sym(a).rank()
    assert len(linalg.rref(a)[1]) == linalg.rank(a)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_of_right_size(rows):
    a = F(rows)
    ns = linalg.nullspace(a)
    assert len(ns) == len(a[0]) - sym(a).rank()
    for v in ns:
        assert all(sum(r[j] * v[j] for j in range(len(v))) == 0 for r in a)
    if ns:
        assert linalg.rank(ns) == len(ns)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_agrees_with_sympy(rows):
    a = F(rows)
    if sym(a).det() == 0:
        try:
            linalg.inverse(a)
        except ZeroDivisionError:
            return
        raise AssertionError("singular matrix inverted")
    inv = linalg.inverse(a)
    assert linalg.matmul(a, inv) == linalg.identity(len(a))
    assert sym(inv) == sym(a).inv()


def test_solve_inconsistent_returns_none():
    a = linalg.matrix([[1, 1], [2, 2]])
    assert linalg.solve(a, [1, 3]) is None
    x = linalg.solve(a, [1, 2])
    assert x[0] + x[1] == 1


def test_sparse_helpers_drop_zeros():
    u = {0: Fraction(1), 2: Fraction(3)}
    assert linalg.sp_add(u, {0: Fraction(-1)}) == {2: Fraction(3)}
    assert linalg.sp_scale(u, 0) == {}
    assert linalg.sp_to_dense(u, [0, 1, 2]) == [1, 0, 3]
    assert linalg.sp_from_dense([0, 5, 0], offset=3) == {4: 5}


def test_as_fraction_rejects_floats_and_bools():
    assert linalg.as_fraction("3/6") == Fraction(1, 2)
    for bad in (0.5, True):
        try:
            linalg.as_fraction(bad)
        except TypeError:
            continue
        raise AssertionError(f"accepted {bad!r}")
