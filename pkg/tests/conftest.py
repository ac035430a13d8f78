import random
from fractions import Fraction

import pytest

from gcohft import frobenius, orbifold
from gcohft.groups import named_group

LISTED = ("Z2", "Z4", "V4", "S3", "D4", "Q8", "S4")
GLUING_GROUPS = ("Z4", "S3", "D4", "Q8")


@pytest.fixture(scope="session")
def groups():
    return {name: named_group(name) for name in LISTED + ("1", "Z3", "Z6")}


def random_gset(G, rng, max_orbits=2):
    """Union of coset spaces of random cyclic or trivial subgroups."""
    X = None
    for _ in range(rng.randint(1, max_orbits)):
        K = G.cyclic_subgroup(rng.randrange(G.order))
        Y = orbifold.coset_space(G, K)
        X = Y if X is None else orbifold.disjoint_union(X, Y)
    return X


def random_invertible(n, rng):
    while True:
        m = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        try:
            from gcohft import linalg

            linalg.inverse(m)
            return m
        except ZeroDivisionError:
            continue


def random_algebra(G, seed):
    """A valid G-Frobenius algebra from a random G-set, in a random per-sector basis."""
    rng = random.Random(seed)
    A = orbifold.fg_finite_gset(random_gset(G, rng))
    P = {m: random_invertible(len(b), rng) for m, b in enumerate(A.module.sector_basis) if b}
    return frobenius.change_of_basis(A, P)


def random_vector(dim, rng, density=0.5):
    return {i: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)) for i in range(dim) if rng.random() < density}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
