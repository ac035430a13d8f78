"""Exact rational linear algebra on small dense matrices.

Matrices are lists of rows of :class:`fractions.Fraction`.  Sparse vectors
(``dict[int, Fraction]``, zero entries omitted) are used everywhere else in
the package; the helpers at the bottom of this module operate on those.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]
SparseVec = Dict[int, Fraction]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[as_fraction(x) for x in row] for row in rows]


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = zeros(len(a), ncols)
    for i, row in enumerate(a):
        assert len(row) == inner, "dimension mismatch"
        orow = out[i]
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                for j in range(ncols):
                    if brow[j]:
                        orow[j] += x * brow[j]
    return out


def rref(a: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [list(row) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                ri = m[i]
                rr = m[r]
                for j in range(c, ncols):
                    if rr[j]:
                        ri[j] -= f * rr[j]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    """Rank via fraction-free (Bareiss) elimination; only integer-scaled rows are formed."""
    if not a or not a[0]:
        return 0
    # clear denominators row by row so Bareiss runs over the integers
    rows = []
    for row in a:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        rows.append([int(x * den) for x in row])
    nrows, ncols = len(rows), len(rows[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            for j in range(c, ncols):
                ri[j] = (piv * ri[j] - f * rows[r][j]) // prev
        prev = piv
        r += 1
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def nullspace(a: Matrix, ncols: Optional[int] = None) -> Matrix:
    """Basis of {x : a x = 0}, one basis vector per free column, in column order."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return identity(ncols)
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(v)
    return basis


def column_space(a: Matrix) -> Matrix:
    """Basis (as a list of column vectors) of the span of the columns of ``a``."""
    if not a:
        return []
    _, pivots = rref(a)
    return [[row[c] for row in a] for c in pivots]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def solve(a: Matrix, b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One solution of a x = b, or None when inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [as_fraction(bi)] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = r[i][ncols]
    return x


# -- sparse vectors -----------------------------------------------------------


def sp_add(u: Mapping[int, Fraction], v: Mapping[int, Fraction], scale: Fraction = Fraction(1)) -> SparseVec:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + scale * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def sp_scale(v: Mapping[int, Fraction], c) -> SparseVec:
    c = as_fraction(c)
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def sp_clean(v: Mapping[int, Fraction]) -> SparseVec:
    return {k: as_fraction(x) for k, x in v.items() if x}


def sp_from_dense(v: Sequence[Fraction], offset: int = 0) -> SparseVec:
    return {offset + i: x for i, x in enumerate(v) if x}


def sp_to_dense(v: Mapping[int, Fraction], indices: Sequence[int]) -> List[Fraction]:
    return [v.get(i, Fraction(0)) for i in indices]
