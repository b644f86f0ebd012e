"""Exact linear algebra over Q, plus determinants of polynomial matrices.

RationalMatrix is a small dense exact matrix type (no pivoting
heuristics needed; arithmetic is exact).  SparseEchelon is the shared
incremental row-reduction engine: it produces unique normal forms
modulo a growing span and can track how every stored row was built
from the vectors fed to it, which is what the independent division
oracle needs.
"""

from __future__ import annotations

from .errors import DeterminantVanishes
from .poly import SparsePoly, exact_divide
from .rational import Q, QONE, QZERO, rat


class RationalMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        data = tuple(tuple(rat(v) for v in row) for row in entries)
        if not data:
            raise ValueError("empty matrix")
        width = len(data[0])
        if width == 0 or any(len(row) != width for row in data):
            raise ValueError("ragged matrix rows")
        self.entries = data
        self.rows = len(data)
        self.cols = width

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[QZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[QONE if i == j else QZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values) -> "RationalMatrix":
        vals = [rat(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else QZERO for j in range(n)] for i in range(n)])

    # -- access -------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> list:
        return list(self.entries[i])

    def col(self, j: int) -> list:
        return [self.entries[i][j] for i in range(self.rows)]

    def to_lists(self) -> list:
        return [list(row) for row in self.entries]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(not v for row in self.entries for v in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"<RationalMatrix {self.rows}x{self.cols}>"

    # -- arithmetic ---------------------------------------------------

    def _check_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __add__(self, other) -> "RationalMatrix":
        self._check_shape(other)
        return RationalMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other) -> "RationalMatrix":
        self._check_shape(other)
        return RationalMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix([[-a for a in row] for row in self.entries])

    def scale(self, value) -> "RationalMatrix":
        value = rat(value)
        return RationalMatrix([[a * value for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError("inner dimension mismatch")
            ot = other.entries
            out = []
            for row in self.entries:
                out_row = []
                for j in range(other.cols):
                    acc = QZERO
                    for k, a in enumerate(row):
                        if a:
                            acc = acc + a * ot[k][j]
                    out_row.append(acc)
                out.append(out_row)
            return RationalMatrix(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def apply(self, vec) -> list:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        vec = [rat(v) for v in vec]
        return [
            sum((a * v for a, v in zip(row, vec) if a), QZERO) for row in self.entries
        ]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def trace(self):
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), QZERO)

    # -- elimination --------------------------------------------------

    def rref_with_transform(self):
        """(R, pivot_columns, U) with U*self = R in reduced row echelon form.

        Pivot choice is the first row with a nonzero entry, scanning
        columns left to right, so the result is deterministic.
        """
        m, n = self.rows, self.cols
        a = [list(row) for row in self.entries]
        u = [[QONE if i == j else QZERO for j in range(m)] for i in range(m)]
        pivots = []
        r = 0
        for c in range(n):
            pr = next((i for i in range(r, m) if a[i][c]), None)
            if pr is None:
                continue
            if pr != r:
                a[r], a[pr] = a[pr], a[r]
                u[r], u[pr] = u[pr], u[r]
            pv = a[r][c]
            if pv != QONE:
                inv = QONE / pv
                a[r] = [v * inv for v in a[r]]
                u[r] = [v * inv for v in u[r]]
            for i in range(m):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
                    u[i] = [vi - f * vr for vi, vr in zip(u[i], u[r])]
            pivots.append(c)
            r += 1
            if r == m:
                break
        return RationalMatrix(a), pivots, RationalMatrix(u)

    def rref(self):
        r, pivots, _ = self.rref_with_transform()
        return r, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(row) for row in self.entries]
        det = QONE
        for c in range(n):
            pr = next((i for i in range(c, n) if a[i][c]), None)
            if pr is None:
                return QZERO
            if pr != c:
                a[c], a[pr] = a[pr], a[c]
                det = -det
            pv = a[c][c]
            det = det * pv
            inv = QONE / pv
            for i in range(c + 1, n):
                if a[i][c]:
                    f = a[i][c] * inv
                    a[i] = [vi - f * vc for vi, vc in zip(a[i], a[c])]
        return det

    def inverse(self) -> "RationalMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        r, pivots, u = self.rref_with_transform()
        if len(pivots) != self.rows:
            raise DeterminantVanishes("matrix is singular")
        return u

    def solve(self, b):
        """A particular solution of self * x = b, or None if inconsistent.

        Free variables are set to zero.
        """
        if len(b) != self.rows:
            raise ValueError("right-hand side length mismatch")
        b = [rat(v) for v in b]
        aug = RationalMatrix(
            [list(row) + [b[i]] for i, row in enumerate(self.entries)]
        )
        r, pivots, _ = aug.rref_with_transform()
        if self.cols in pivots:
            return None
        x = [QZERO] * self.cols
        for i, c in enumerate(pivots):
            x[c] = r[i, self.cols]
        return x

    def minimal_polynomial(self) -> SparsePoly:
        """Monic minimal polynomial, univariate, via Krylov iteration on powers."""
        if not self.is_square():
            raise ValueError("minimal polynomial of a non-square matrix")
        n = self.rows
        ech = SparseEchelon(track=True)
        power = RationalMatrix.identity(n)
        k = 0
        while True:
            flat = {
                i * n + j: power.entries[i][j]
                for i in range(n)
                for j in range(n)
                if power.entries[i][j]
            }
            residual, combo = ech.reduce(flat)
            if not residual:
                # 0 = A^k + sum combo[j] * A^j
                terms = {k: QONE}
                for j, c in combo.items():
                    terms[j] = c
                return SparsePoly(1, terms)
            ech.add(flat, tag=k)
            power = power * self
            k += 1
            if k > n + 1:
                raise AssertionError("Krylov iteration failed to terminate")


def commutator(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    return a * b - b * a


def kernel_basis(m: RationalMatrix) -> list:
    """Deterministic basis of the right kernel (one vector per free column,
    in column order)."""
    r, pivots, _ = m.rref_with_transform()
    pivot_set = set(pivots)
    basis = []
    for fc in range(m.cols):
        if fc in pivot_set:
            continue
        v = [QZERO] * m.cols
        v[fc] = QONE
        for i, pc in enumerate(pivots):
            v[pc] = -r[i, fc]
        basis.append(v)
    return basis


def linear_change(p: SparsePoly, L: RationalMatrix) -> SparsePoly:
    """Compose p with x -> L*x.  L must be invertible."""
    if not L.is_square() or L.rows != p.nvars:
        raise ValueError("substitution matrix has the wrong shape")
    if L.rank() != L.rows:
        raise ValueError("substitution matrix is singular")
    from .poly import linear_form

    subs = [linear_form(p.nvars, L.row(i)) for i in range(L.rows)]
    return p.compose(subs)


class SparseEchelon:
    """Incremental echelon over sparse Q-vectors keyed by ints.

    Stored rows are normalized so the pivot (largest key) has
    coefficient 1.  reduce() returns the unique normal form whose
    support avoids every pivot, so membership in the span is exactly
    "residual is empty".  With track=True every stored row remembers
    its expression in the vectors that were add()ed, and reduce()
    reports the combination it subtracted.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self._rows: dict = {}  # pivot key -> (vec dict, combo dict)

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: dict, combo: dict | None = None):
        """Normal form of vec modulo the current span.

        Returns (residual, combo) satisfying
            residual = vec + sum_t combo[t] * original_vector_t
        over the tags passed to add().
        """
        out = {k: rat(v) for k, v in vec.items() if v}
        if combo is None:
            combo = {}
        bound = None
        while out:
            if bound is None:
                k = max(out)
            else:
                k = max((key for key in out if key < bound), default=None)
                if k is None:
                    break
            row = self._rows.get(k)
            if row is not None and out.get(k):
                factor = out[k]
                rvec, rcombo = row
                for rk, rv in rvec.items():
                    cur = out.get(rk, QZERO) - factor * rv
                    if cur:
                        out[rk] = cur
                    else:
                        out.pop(rk, None)
                if self.track:
                    for t, c in rcombo.items():
                        cur = combo.get(t, QZERO) - factor * c
                        if cur:
                            combo[t] = cur
                        else:
                            combo.pop(t, None)
            bound = k
        return out, combo

    def add(self, vec: dict, tag=None) -> bool:
        """Reduce vec and store the residual if independent.

        Returns True if the vector enlarged the span.
        """
        start_combo = {tag: QONE} if (self.track and tag is not None) else {}
        residual, combo = self.reduce(vec, dict(start_combo))
        if not residual:
            return False
        pivot = max(residual)
        lead = residual[pivot]
        inv = QONE / lead
        norm_vec = {k: v * inv for k, v in residual.items()}
        norm_combo = {t: c * inv for t, c in combo.items()} if self.track else {}
        self._rows[pivot] = (norm_vec, norm_combo)
        return True

    def contains(self, vec: dict) -> bool:
        residual, _ = self.reduce(vec)
        return not residual

    def basis(self) -> list:
        """Stored rows as (pivot, vec, combo), descending pivot order."""
        return [
            (pivot, dict(vec), dict(combo))
            for pivot, (vec, combo) in sorted(self._rows.items(), reverse=True)
        ]


def matrix_span_echelon(mats) -> SparseEchelon:
    """Echelon spanned by flattened square matrices (all the same size)."""
    ech = SparseEchelon(track=True)
    for idx, m in enumerate(mats):
        n = m.rows
        flat = {
            i * n + j: m.entries[i][j]
            for i in range(n)
            for j in range(n)
            if m.entries[i][j]
        }
        ech.add(flat, tag=idx)
    return ech


def matrix_in_span(target: RationalMatrix, ech: SparseEchelon) -> bool:
    n = target.rows
    flat = {
        i * n + j: target.entries[i][j]
        for i in range(n)
        for j in range(n)
        if target.entries[i][j]
    }
    return ech.contains(flat)


# -- polynomial determinants -------------------------------------------


def _det_masked_cofactor(grid) -> SparsePoly:
    """Division-free determinant: memoized cofactor expansion along columns.

    State = set of consumed rows (bitmask) after processing a prefix of
    columns; the permutation sign is accumulated from inversion counts,
    which only need the set, not the order.  Sparsity in the columns
    prunes the state space hard.
    """
    n = len(grid)
    nvars = grid[0][0].nvars
    prev = {0: SparsePoly.constant(nvars, 1)}
    for j in range(n):
        col = [(r, grid[r][j]) for r in range(n) if not grid[r][j].is_zero()]
        nxt: dict = {}
        for mask, val in prev.items():
            for r, entry in col:
                bit = 1 << r
                if mask & bit:
                    continue
                sign = -1 if (mask >> (r + 1)).bit_count() & 1 else 1
                contrib = val * entry
                if sign < 0:
                    contrib = -contrib
                key = mask | bit
                cur = nxt.get(key)
                nxt[key] = contrib if cur is None else cur + contrib
        # drop exact-zero partial sums to keep each level small
        prev = {k: v for k, v in nxt.items() if not v.is_zero()}
        if not prev:
            return SparsePoly.zero(nvars)
    return prev.get((1 << n) - 1, SparsePoly.zero(nvars))


def _det_bareiss(grid) -> SparsePoly:
    """Fraction-free elimination; every division is exact by construction."""
    n = len(grid)
    nvars = grid[0][0].nvars
    a = [list(row) for row in grid]
    one = SparsePoly.constant(nvars, 1)
    prev = one
    sign = 1
    for k in range(n - 1):
        pivot_row = None
        best = None
        for i in range(k, n):
            if not a[i][k].is_zero():
                size = len(a[i][k].terms)
                if best is None or size < best:
                    best = size
                    pivot_row = i
        if pivot_row is None:
            return SparsePoly.zero(nvars)
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        pk = a[k][k]
        prev_is_one = prev.is_constant() and prev.constant_value() == QONE
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pk * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num if prev_is_one else exact_divide(num, prev)
            a[i][k] = SparsePoly.zero(nvars)
        prev = pk
    result = a[n - 1][n - 1]
    if sign < 0:
        result = -result
    return result


def det_poly_matrix(grid) -> SparsePoly:
    """Exact determinant of a square grid of SparsePoly entries.

    Memoized cofactor expansion (division-free, sparsity-pruned) is the
    workhorse; dense larger matrices fall back to fraction-free
    elimination, whose intermediate entries are honest minors.
    """
    n = len(grid)
    if any(len(row) != n for row in grid):
        raise ValueError("grid is not square")
    if n == 0:
        raise ValueError("empty grid")
    nvars = grid[0][0].nvars
    if any(p.nvars != nvars for row in grid for p in row):
        raise ValueError("entries disagree on variable count")
    if n == 1:
        return grid[0][0]
    nonzero = sum(1 for row in grid for p in row if not p.is_zero())
    density = nonzero / (n * n)
    if n <= 8 or density <= 0.5:
        return _det_masked_cofactor(grid)
    return _det_bareiss(grid)
