"""Shared test utilities: naive oracles and random generators."""

import random

from lfdspectrum.poly import SparsePoly
from lfdspectrum.rational import Q


def naive_det(grid):
    """Cofactor expansion along the first column; the determinant oracle."""
    n = len(grid)
    if n == 1:
        return grid[0][0]
    nvars = grid[0][0].nvars
    total = SparsePoly.zero(nvars)
    for i in range(n):
        entry = grid[i][0]
        if entry.is_zero():
            continue
        minor = [[grid[r][c] for c in range(1, n)] for r in range(n) if r != i]
        term = entry * naive_det(minor)
        total = total + (term if i % 2 == 0 else -term)
    return total


def rand_rational(rng: random.Random, size: int = 6) -> Q:
    num = rng.randint(-size, size)
    den = rng.randint(1, 4)
    return Q(num, den)


def rand_poly(
    rng: random.Random, nvars: int, max_deg: int = 3, max_terms: int = 5
) -> SparsePoly:
    items = []
    for _ in range(rng.randint(0, max_terms)):
        exps = [0] * nvars
        for _ in range(rng.randint(0, max_deg)):
            exps[rng.randrange(nvars)] += 1
        items.append((tuple(exps), rand_rational(rng)))
    return SparsePoly.from_terms(nvars, items)


def rand_linear_poly(rng: random.Random, nvars: int) -> SparsePoly:
    """Random homogeneous degree-1 polynomial (may be zero)."""
    items = []
    for i in range(nvars):
        c = rand_rational(rng)
        if c and rng.random() < 0.7:
            exps = [0] * nvars
            exps[i] = 1
            items.append((tuple(exps), c))
    return SparsePoly.from_terms(nvars, items)


def rand_matrix(rng: random.Random, rows: int, cols: int):
    from lfdspectrum.linalg import RationalMatrix

    return RationalMatrix(
        [[rand_rational(rng) for _ in range(cols)] for _ in range(rows)]
    )


def nc_presentation(n: int):
    """Normal crossing divisor x1*...*xn presented by the diagonal torus."""
    from lfdspectrum.divisor import LFDPresentation
    from lfdspectrum.linalg import RationalMatrix

    basis = []
    for i in range(n):
        m = [[Q(1) if r == i and s == i else Q(0) for s in range(n)] for r in range(n)]
        basis.append(RationalMatrix(m))
    return LFDPresentation(n=n, lie_basis=basis, name=f"nc{n}")


def sym2_presentation():
    """2x2 symmetric matrices under the Borel action; h = x(xz - y^2) up to sign."""
    from lfdspectrum.divisor import LFDPresentation
    from lfdspectrum.linalg import RationalMatrix

    return LFDPresentation(
        n=3,
        lie_basis=[
            RationalMatrix([[2, 0, 0], [0, 1, 0], [0, 0, 0]]),
            RationalMatrix([[0, 0, 0], [0, 1, 0], [0, 0, 2]]),
            RationalMatrix([[0, 0, 0], [1, 0, 0], [0, 2, 0]]),
        ],
        name="sym2",
    )


def path1_equation() -> SparsePoly:
    """Product of the five 2x2 minors m12 m13 m23 m34 m35 of a 2x5 matrix.

    Coordinates x1..x5 form the first row, x6..x10 the second; the
    resulting degree-10 divisor is linear free with vanishing dual.
    """
    n = 10

    def v(i):
        return SparsePoly.variable(n, i - 1)

    def m(i, j):
        return v(i) * v(5 + j) - v(j) * v(5 + i)

    return m(1, 2) * m(1, 3) * m(2, 3) * m(3, 4) * m(3, 5)


def rand_homogeneous(rng: random.Random, nvars: int, degree: int) -> SparsePoly:
    """Random nonzero homogeneous polynomial of exact total degree."""
    while True:
        items = []
        for _ in range(rng.randint(1, 6)):
            exps = [0] * nvars
            for _ in range(degree):
                exps[rng.randrange(nvars)] += 1
            c = rand_rational(rng)
            if c:
                items.append((tuple(exps), c))
        p = SparsePoly.from_terms(nvars, items)
        if not p.is_zero():
            return p
