"""Birkhoff problem: triangular elimination to a pole order one basis.

Seeking a base change B(tau^-1) = Id + sum_i B_i tau^-i, with B_i
supported on the i-th upper off-diagonal, after which the connection
reads Omega_0 + tau^-1 * A_inf with A_inf diagonal.  Comparing tau
powers in the gauge equation forces [B_1,N] to be diagonal and every
higher coefficient matrix X_i to vanish; the off-diagonal content of
X_i determines B_(i+1) from B_i by suffix sums, and one scalar
consistency equation Q^i = 0 per level survives.  The system is
triangular: Q^(n-1) involves b_1^n alone, and each Q^i is univariate in
b_1^(i+1) once the later values are chosen.  For special divisors the
entries b_i^(i+1) can be pinned to zero from the start, which shifts
the unknown of level i to b_1^(i+2) and makes the top equation hold
identically.

Root selection prefers an exact zero, then the largest rational root,
and backtracks through all candidates when a later level goes rootless.
Every accepted solution is re-verified symbolically in (t, tau^-1)
before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentSystem, InvalidConnection, NoRationalRoot
from .gaussmanin import (
    ConnectionCoefficients,
    grid_is_zero,
    grid_mul,
    grid_sub,
    grid_zero,
    omega0_symbolic,
    omega_symbolic,
)
from .poly import SparsePoly, emit
from .poly import rational_roots as _root_multiplicities
from .rational import Q, QONE, QZERO, rat


@dataclass
class BirkhoffSolution:
    n: int
    b: dict  # (i, j) -> b_i^j over i = 1..n-1, j = i+1..n
    nu1: list  # the transformed residue data, A_inf = diag(-nu1)
    root_log: list  # one entry per solved level, in solve order
    special: bool

    def b_matrix_rows(self, s: int) -> list:
        """Dense rows of B_s (rationals)."""
        n = self.n
        rows = [[QZERO] * n for _ in range(n)]
        for j in range(1, n - s + 1):
            rows[j - 1][j - 1 + s] = self.b.get((s, s + j), QZERO)
        return rows


def rational_roots(p: SparsePoly) -> list:
    """All rational roots with multiplicity, sorted ascending."""
    out = []
    for root, mult in sorted(_root_multiplicities(p).items()):
        out.extend([root] * mult)
    return out


def _candidate_order(roots: dict) -> list:
    """Zero first when available, then the remaining roots descending."""
    rest = sorted((r for r in roots if r != QZERO), reverse=True)
    return ([QZERO] if QZERO in roots else []) + rest


def _stage_polynomial(
    n: int, c: list, known: dict, target: int, level: int, special: bool
) -> SparsePoly:
    """Q^level as a univariate polynomial in the unknown b_1^target.

    Entries are produced lazily from the suffix-sum recursion; the
    triangular structure guarantees that only b_1^m with m >= target
    are touched, and any other access raises immediately.
    """
    x = SparsePoly.variable(1, 0)
    bents: dict = {}
    pents: dict = {}

    def b1(m: int) -> SparsePoly:
        if m == target:
            return x
        if m in known:
            return SparsePoly.constant(1, known[m])
        raise InconsistentSystem(
            f"triangular order violated: b_1^{m} requested before assignment"
        )

    def bent(i: int, m: int) -> SparsePoly:
        if i == 1:
            return b1(m)
        if special and m == i + 1:
            return SparsePoly.zero(1)
        if (i, m) not in bents:
            acc = SparsePoly.zero(1)
            for j in range(m - i + 1, n - i + 2):
                acc = acc + pent(i - 1, j)
            bents[(i, m)] = acc.scale(rat(-1))
        return bents[(i, m)]

    def pent(i: int, j: int) -> SparsePoly:
        if (i, j) not in pents:
            bf = bent(i, i + j)
            if j == n - i:
                tail = SparsePoly.constant(1, c[i + 1])
                if bf.is_zero():
                    pents[(i, j)] = tail
                else:
                    bracket = (
                        b1(n).scale(rat(-1))
                        - SparsePoly.constant(1, c[1] + i)
                    )
                    pents[(i, j)] = bf * bracket + tail
            elif bf.is_zero():
                pents[(i, j)] = SparsePoly.zero(1)
            else:
                bracket = b1(i + j + 1) - b1(i + j) - SparsePoly.constant(1, rat(i))
                pents[(i, j)] = bf * bracket
        return pents[(i, j)]

    total = SparsePoly.zero(1)
    for j in range(1, n - level + 1):
        total = total + pent(level, j)
    return total


def _assemble(n: int, c: list, values: dict, special: bool):
    """Numeric b-table and nu from chosen b_1 values, with consistency checks."""

    def b1(m):
        return values[m]

    table = {(1, j): values[j] for j in range(2, n + 1)}
    for i in range(1, n):
        p = {}
        for j in range(1, n - i + 1):
            bf = table.get((i, i + j), QZERO)
            if j == n - i:
                p[j] = bf * (-b1(n) - c[1] - i) + c[i + 1]
            else:
                p[j] = bf * (b1(i + j + 1) - b1(i + j) - i)
        if sum(p.values(), QZERO):
            raise InconsistentSystem(f"Q^{i} is nonzero on the chosen roots")
        if i <= n - 2:
            for k in range(1, n - i):
                tail = sum((p[j] for j in range(k + 1, n - i + 1)), QZERO)
                table[(i + 1, i + k + 1)] = -tail
    if special:
        for i in range(1, n):
            if table.get((i, i + 1), QZERO):
                raise InconsistentSystem(
                    f"special divisor forced b_{i}^{i + 1} = 0 but it is nonzero"
                )
    nu = []
    prev = QZERO
    for j in range(2, n + 1):
        nu.append(b1(j) - prev)
        prev = b1(j)
    nu.append(-b1(n) - c[1])
    return table, nu


def solve_birkhoff(cc: ConnectionCoefficients, special: bool) -> BirkhoffSolution:
    """Solve the triangular system and return a verified solution.

    Levels are processed from the top equation downwards; at each one
    every rational root of the univariate consistency polynomial is a
    branch, explored depth-first in the candidate order.  NoRationalRoot
    is raised only after the whole tree is exhausted, carrying the last
    rootless polynomial.
    """
    if cc.c[0] != QONE:
        raise InvalidConnection("solver expects c_0 normalized to 1")
    n = cc.n
    c = cc.c
    if special and c[n]:
        raise InconsistentSystem("special divisor must have c_n = 0")
    if special:
        levels = list(range(n - 2, 0, -1))
        base_known = {2: QZERO} if n >= 2 else {}
        unknown_of = {s: s + 2 for s in levels}
    else:
        levels = list(range(n - 1, 0, -1))
        base_known = {}
        unknown_of = {s: s + 1 for s in levels}
    last_failure = None

    def attempt(idx: int, known: dict):
        nonlocal last_failure
        if idx == len(levels):
            return dict(known), []
        s = levels[idx]
        target = unknown_of[s]
        qpoly = _stage_polynomial(n, c, known, target, s, special)
        if qpoly.is_zero():
            roots = {QZERO: 1}
            poly_text = "0"
        else:
            roots = _root_multiplicities(qpoly)
            poly_text = emit(qpoly, var_prefix="u")
            if not roots:
                last_failure = (s, target, poly_text)
                return None
        entry = {
            "unknown": f"b1^{target}",
            "level": s,
            "poly": poly_text,
            "roots": [str(r) for r in sorted(roots) for _ in range(roots[r])],
        }
        for root in _candidate_order(roots):
            known[target] = root
            deeper = attempt(idx + 1, known)
            if deeper is not None:
                values, tail = deeper
                return values, [dict(entry, chosen=str(root))] + tail
            del known[target]
        return None

    result = attempt(0, dict(base_known))
    if result is None:
        if last_failure is None:
            raise InconsistentSystem("no levels to solve yet no solution found")
        level, target, poly_text = last_failure
        raise NoRationalRoot(
            f"consistency equation Q^{level} for b1^{target} has no rational root",
            poly_text=poly_text,
        )
    values, root_log = result
    table, nu = _assemble(n, c, values, special)
    sol = BirkhoffSolution(n=n, b=table, nu1=nu, root_log=root_log, special=special)
    if not verify_birkhoff(sol, cc):
        raise InconsistentSystem("reconstructed basis failed symbolic verification")
    return sol


def solve_all_branches(cc: ConnectionCoefficients, special: bool) -> list:
    """Every verified solution over the full root-choice tree.

    Exists for the intrinsicness tests: downstream invariants must not
    depend on which branch solve_birkhoff happens to prefer.
    """
    if cc.c[0] != QONE:
        raise InvalidConnection("solver expects c_0 normalized to 1")
    n = cc.n
    c = cc.c
    if special:
        levels = list(range(n - 2, 0, -1))
        base_known = {2: QZERO} if n >= 2 else {}
        unknown_of = {s: s + 2 for s in levels}
    else:
        levels = list(range(n - 1, 0, -1))
        base_known = {}
        unknown_of = {s: s + 1 for s in levels}
    found = []

    def walk(idx: int, known: dict):
        if idx == len(levels):
            table, nu = _assemble(n, c, dict(known), special)
            sol = BirkhoffSolution(
                n=n, b=table, nu1=nu, root_log=[], special=special
            )
            if not verify_birkhoff(sol, cc):
                raise InconsistentSystem("branch failed symbolic verification")
            found.append(sol)
            return
        s = levels[idx]
        target = unknown_of[s]
        qpoly = _stage_polynomial(n, c, known, target, s, special)
        roots = {QZERO: 1} if qpoly.is_zero() else _root_multiplicities(qpoly)
        for root in _candidate_order(roots):
            known[target] = root
            walk(idx + 1, known)
            del known[target]

    walk(0, dict(base_known))
    return found


def birkhoff_residual(sol: BirkhoffSolution, cc: ConnectionCoefficients) -> list:
    """dB/dtau + Omega*B - B*(Omega_0 + theta*A_inf) over (t, theta).

    Zero exactly when B conjugates the connection into the pole order
    one normal form.
    """
    n = cc.n
    theta = SparsePoly.variable(2, 1)
    bgrid = grid_zero(n)
    dgrid = grid_zero(n)
    for i in range(n):
        bgrid[i][i] = SparsePoly.constant(2, QONE)
    for s in range(1, n):
        rows = sol.b_matrix_rows(s)
        ts = theta**s
        dts = (theta ** (s + 1)).scale(rat(-s))
        for i in range(n):
            for j in range(n):
                if rows[i][j]:
                    bgrid[i][j] = bgrid[i][j] + ts.scale(rows[i][j])
                    dgrid[i][j] = dgrid[i][j] + dts.scale(rows[i][j])
    target = omega0_symbolic(cc)
    for i in range(n):
        target[i][i] = target[i][i] + theta.scale(-rat(sol.nu1[i]))
    lhs = grid_sub(
        grid_mul(omega_symbolic(cc), bgrid), grid_mul(bgrid, target)
    )
    for i in range(n):
        for j in range(n):
            lhs[i][j] = lhs[i][j] + dgrid[i][j]
    return lhs


def verify_birkhoff(sol: BirkhoffSolution, cc: ConnectionCoefficients) -> bool:
    """Exact gauge check of the solution against the input connection."""
    return grid_is_zero(birkhoff_residual(sol, cc))
