"""Linear free divisors from their Lie-algebra presentations.

A divisor D in C^n is presented by n rational matrices A_1..A_n whose
fields xi_i(x) = (d/dx) A_i x span the weight-zero logarithmic fields.
This module validates the presentation (Saito's criterion), extracts
the character weights and the normalized basis {Euler, annihilators},
decides specialness and a reductivity criterion, computes the dual
equation, and checks the Hessian and b0 identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .errors import (
    BadPresentation,
    DegreeMismatch,
    DeterminantVanishes,
    IdentityFails,
    NotReduced,
    NotSemiInvariant,
    ResourceCapExceeded,
)
from .linalg import (
    RationalMatrix,
    SparseEchelon,
    commutator,
    det_poly_matrix,
    kernel_basis,
    matrix_span_echelon,
)
from .poly import (
    SparsePoly,
    apply_derivation,
    exact_divide,
    linear_form,
    squarefree_test,
    uni_coeffs,
)
from .rational import Q, QONE, QZERO, rat, rat_str

DEFAULT_MAX_MONOMIALS = 10**7
HESSIAN_DIRECT_CAP = 6
B0_SIZE_CAP = 8


@dataclass
class LFDPresentation:
    n: int
    lie_basis: list
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise BadPresentation("dimension must be positive")
        if len(self.lie_basis) != self.n:
            raise BadPresentation(
                f"need exactly n={self.n} matrices, got {len(self.lie_basis)}"
            )
        for a in self.lie_basis:
            if not isinstance(a, RationalMatrix):
                raise BadPresentation("lie_basis entries must be RationalMatrix")
            if a.rows != self.n or a.cols != self.n:
                raise BadPresentation(
                    f"matrix is {a.rows}x{a.cols}, expected {self.n}x{self.n}"
                )


def presentation_from_json(data: dict) -> LFDPresentation:
    if not isinstance(data, dict):
        raise BadPresentation("input record must be a JSON object")
    try:
        n = data["n"]
        lie_basis = data["lie_basis"]
    except (KeyError, TypeError) as exc:
        raise BadPresentation(f"missing required field: {exc}") from exc
    name = data.get("name", "")
    if not isinstance(n, int) or not isinstance(name, str):
        raise BadPresentation("field types: n must be int, name must be string")
    if not isinstance(lie_basis, list):
        raise BadPresentation("lie_basis must be a list of row-major matrices")
    mats = []
    for idx, rows in enumerate(lie_basis):
        try:
            mats.append(RationalMatrix(rows))
        except (TypeError, ValueError) as exc:
            raise BadPresentation(f"lie_basis[{idx}]: {exc}") from exc
    return LFDPresentation(n=n, lie_basis=mats, name=name)


def presentation_to_json(p: LFDPresentation) -> dict:
    return {
        "name": p.name,
        "n": p.n,
        "lie_basis": [
            [[rat_str(v) for v in row] for row in a.entries] for a in p.lie_basis
        ],
    }


@dataclass
class DivisorData:
    presentation: LFDPresentation
    saito_matrix: list  # n x n grid of linear SparsePoly
    h: SparsePoly  # monic in grevlex
    saito_scalar: Q
    weights: tuple | None = None  # lambda per original basis matrix
    euler_combo: tuple | None = None
    euler_index: int | None = None
    log_h_basis: list | None = None  # n-1 annihilating matrices
    normalized_basis: list | None = None  # [identity] + log_h_basis
    norm_scalar: Q | None = None  # det(normalized saito matrix) / h
    special: bool | None = None
    reductive: str | None = None  # yes | no | unknown
    h_dual: SparsePoly | None = None
    dual_scalar: Q | None = None

    @property
    def n(self) -> int:
        return self.presentation.n


def saito_matrix_of(p: LFDPresentation) -> list:
    """Row i holds the coefficients of xi_i as linear forms: (A_i x)_j."""
    n = p.n
    return [
        [linear_form(n, a.row(j)) for j in range(n)]
        for a in p.lie_basis
    ]


def _check_lie_closure(p: LFDPresentation) -> None:
    ech = matrix_span_echelon(p.lie_basis)
    if len(ech) != p.n:
        raise BadPresentation("basis matrices are linearly dependent")
    n = p.n
    for i in range(n):
        for j in range(i + 1, n):
            c = commutator(p.lie_basis[i], p.lie_basis[j])
            flat = {
                r * n + s: c.entries[r][s]
                for r in range(n)
                for s in range(n)
                if c.entries[r][s]
            }
            if not ech.contains(flat):
                raise BadPresentation(
                    f"span is not closed under commutator (pair {i},{j})"
                )


def saito_check(
    p: LFDPresentation, max_monomials: int = DEFAULT_MAX_MONOMIALS
) -> DivisorData:
    """Validate Saito's criterion and store the monic equation h.

    The determinant of the field coefficient matrix must be a nonzero
    squarefree polynomial; its degree is automatically n.  Refuses to
    expand determinants whose dense graded piece exceeds max_monomials.

    Lie closure of the span is deliberately not checked here: a
    corrupted basis can still have a reduced determinant, and the
    sharper diagnostic (a field failing to rescale h) belongs to
    character_weights.  Closure is validated there instead.
    """
    n = p.n
    if comb(2 * n - 1, n) > max_monomials:
        raise ResourceCapExceeded(
            f"degree-{n} determinant piece has up to {comb(2 * n - 1, n)} "
            f"monomials (cap {max_monomials})"
        )
    grid = saito_matrix_of(p)
    det = det_poly_matrix(grid)
    if det.is_zero():
        raise DeterminantVanishes("coefficient determinant vanishes identically")
    if not det.is_homogeneous() or det.degree() != n:
        raise DegreeMismatch(
            f"determinant has degree {det.degree()}, expected {n}"
        )
    if not squarefree_test(det):
        raise NotReduced("coefficient determinant is not squarefree")
    _, lead = det.leading_grevlex()
    h = det.scale(QONE / lead)
    return DivisorData(
        presentation=p, saito_matrix=grid, h=h, saito_scalar=lead
    )


def character_weights(d: DivisorData) -> DivisorData:
    """Weights, Euler normalization, and the annihilating basis.

    Each field must rescale h exactly: xi_i(h) = lambda_i h.  The
    identity matrix (Euler field) must lie in the span; subtracting
    (lambda_i/n)*id from each A_i lands in the annihilator of h, and the
    first n-1 independent such matrices form log_h_basis.
    """
    p = d.presentation
    n = p.n
    h = d.h
    weights = []
    for idx, a in enumerate(p.lie_basis):
        xh = apply_derivation(a, h)
        if xh.is_zero():
            weights.append(QZERO)
            continue
        kmax = max(h.terms)
        if kmax not in xh.terms:
            raise NotSemiInvariant(f"field {idx} does not rescale h")
        lam = xh.terms[kmax] / h.terms[kmax]
        if xh != h.scale(lam):
            raise NotSemiInvariant(f"field {idx} does not rescale h")
        weights.append(lam)

    _check_lie_closure(p)

    # Euler field: identity = sum c_i A_i
    flat_cols = RationalMatrix(
        [
            [p.lie_basis[i].entries[r][s] for i in range(n)]
            for r in range(n)
            for s in range(n)
        ]
    )
    ident = RationalMatrix.identity(n)
    rhs = [ident.entries[r][s] for r in range(n) for s in range(n)]
    combo = flat_cols.solve(rhs)
    if combo is None:
        raise BadPresentation("Euler field is not in the span of the basis")
    lam_e = sum((c * w for c, w in zip(combo, weights)), QZERO)
    if lam_e != rat(n):
        raise NotSemiInvariant(
            f"Euler combination has weight {rat_str(lam_e)}, expected {n}"
        )

    ech = SparseEchelon()
    log_basis = []
    picked_indices = []
    for i, a in enumerate(p.lie_basis):
        shifted = a - ident.scale(weights[i] / n)
        flat = {
            r * n + s: shifted.entries[r][s]
            for r in range(n)
            for s in range(n)
            if shifted.entries[r][s]
        }
        if ech.add(flat):
            log_basis.append(shifted)
            picked_indices.append(i)
        if len(log_basis) == n - 1:
            break
    if len(log_basis) != n - 1:
        raise BadPresentation(
            "annihilating fields span less than n-1 dimensions"
        )
    for idx, a in enumerate(log_basis):
        if not apply_derivation(a, h).is_zero():
            raise NotSemiInvariant(
                f"normalized field {idx} fails to annihilate h"
            )

    # scalar of the normalized Saito determinant: the normalized basis is
    # T * (original basis) row-wise, so det scales by det(T)
    t_rows = [list(combo)]
    for i in picked_indices:
        row = [-(weights[i] / n) * combo[j] for j in range(n)]
        row[i] = row[i] + QONE
        t_rows.append(row)
    t = RationalMatrix(t_rows)
    norm_scalar = t.det() * d.saito_scalar
    if not norm_scalar:
        raise BadPresentation("normalized basis is degenerate")

    d.weights = tuple(weights)
    d.euler_combo = tuple(combo)
    d.euler_index = 0
    d.log_h_basis = log_basis
    d.normalized_basis = [ident] + log_basis
    d.norm_scalar = norm_scalar
    return d


def specialness_check(d: DivisorData) -> bool:
    """True iff every annihilating field is trace-free.

    Equivalent formulation on the original basis: lambda_i = trace(A_i)
    for all i.  Both are computed and must agree.
    """
    if d.log_h_basis is None:
        raise ValueError("character_weights must run first")
    by_traces = all(not a.trace() for a in d.log_h_basis)
    by_weights = all(
        a.trace() == w for a, w in zip(d.presentation.lie_basis, d.weights)
    )
    if by_traces != by_weights:
        raise IdentityFails("specialness criteria disagree; internal bug")
    d.special = by_traces
    return by_traces


def reductivity_check(d: DivisorData) -> str:
    """Lie-algebra reductivity criterion: yes / no / unknown.

    "yes" needs g = center + derived as a direct sum, a nondegenerate
    Killing form on the derived subalgebra, and squarefree minimal
    polynomials for the center basis (diagonalizability; center
    elements commute, so checking a basis suffices).  Failed
    specialness forces "no"; any other failure is "unknown".
    """
    if d.special is None:
        specialness_check(d)
    if not d.special:
        d.reductive = "no"
        return "no"
    p = d.presentation
    n = p.n

    def flatten(m):
        return {
            r * n + s: m.entries[r][s]
            for r in range(n)
            for s in range(n)
            if m.entries[r][s]
        }

    # derived subalgebra: span of all commutators
    derived = []
    dech = SparseEchelon()
    for i in range(n):
        for j in range(i + 1, n):
            c = commutator(p.lie_basis[i], p.lie_basis[j])
            if dech.add(flatten(c)):
                derived.append(c)
    ddim = len(derived)

    # center: X = sum c_i A_i with [X, A_j] = 0 for all j
    cols = []
    for i in range(n):
        col = []
        for j in range(n):
            c = commutator(p.lie_basis[i], p.lie_basis[j])
            col.extend(c.entries[r][s] for r in range(n) for s in range(n))
        cols.append(col)
    system = RationalMatrix(
        [[cols[i][k] for i in range(n)] for k in range(n * n * n)]
    )
    center = [
        sum(
            (p.lie_basis[i].scale(v[i]) for i in range(1, n)),
            p.lie_basis[0].scale(v[0]),
        )
        for v in kernel_basis(system)
    ]
    zdim = len(center)

    if zdim + ddim != n:
        d.reductive = "unknown"
        return "unknown"
    total = SparseEchelon()
    for m in center + derived:
        total.add(flatten(m))
    if len(total) != n:
        d.reductive = "unknown"
        return "unknown"

    # Killing form on the derived subalgebra
    if ddim:
        basis_ech = SparseEchelon(track=True)
        for t_idx, m in enumerate(derived):
            basis_ech.add(flatten(m), tag=t_idx)

        def bracket_coords(a, b):
            residual, combo = basis_ech.reduce(flatten(commutator(a, b)))
            if residual:
                raise IdentityFails("derived subalgebra not bracket-closed")
            # residual(=0) = [a,b] + sum combo[t] * derived[t]
            return [-combo.get(t, QZERO) for t in range(ddim)]

        ad = []
        for a in derived:
            cols_ad = [bracket_coords(a, b) for b in derived]
            ad.append(
                RationalMatrix(
                    [[cols_ad[b][t] for b in range(ddim)] for t in range(ddim)]
                )
            )
        killing = RationalMatrix(
            [
                [(ad[a] * ad[b]).trace() for b in range(ddim)]
                for a in range(ddim)
            ]
        )
        if not killing.det():
            d.reductive = "unknown"
            return "unknown"

    for z in center:
        mp = z.minimal_polynomial()
        if not squarefree_test(mp):
            d.reductive = "unknown"
            return "unknown"

    d.reductive = "yes"
    return "yes"


def dual_equation(
    d: DivisorData, max_monomials: int = DEFAULT_MAX_MONOMIALS
) -> SparsePoly:
    """Equation of the dual divisor from the normalized basis.

    Row i holds the coefficients of the dual field (d/dy) tA_i y.  The
    determinant may vanish identically (non-prehomogeneous dual); the
    zero polynomial is then stored.  Otherwise h_dual is made monic and
    the scalar recorded.
    """
    if d.normalized_basis is None:
        raise ValueError("character_weights must run first")
    n = d.n
    if comb(2 * n - 1, n) > max_monomials:
        raise ResourceCapExceeded(
            f"degree-{n} dual determinant exceeds the monomial cap"
        )
    grid = [
        [linear_form(n, [a.entries[k][j] for k in range(n)]) for j in range(n)]
        for a in d.normalized_basis
    ]
    det = det_poly_matrix(grid)
    if det.is_zero():
        d.h_dual = det
        d.dual_scalar = QZERO
        return det
    _, lead = det.leading_grevlex()
    d.h_dual = det.scale(QONE / lead)
    d.dual_scalar = lead
    return d.h_dual


@dataclass
class HessianReport:
    status: str  # ok | skipped
    constant: Q | None = None  # h_dual(grad h) = constant * H * h
    literal_match: bool = False  # |constant| equals n - 1
    route: str = ""
    reason: str = ""


def hessian_identity_check(
    d: DivisorData, direct_cap: int = HESSIAN_DIRECT_CAP
) -> HessianReport:
    """Verify h_dual(grad h) = c * det(Hessian h) * h exactly.

    Always verified through the matrix identities
        Hess(h) * x       = (n-1) * grad h
        Hess(h) * (A'x)   = -tA' * grad h        (A' annihilating)
    column-bundling them into Hess * t(saito) = t(dual_saito(grad h)) * J
    with J = diag(n-1, -1, ..., -1); taking determinants then forces the
    scalar identity with
        c = (-1)^(n-1) * norm_scalar / ((n-1) * dual_scalar).
    Small instances additionally expand h_dual(grad h) directly and
    compare against c * H * h term by term.
    """
    if d.h_dual is None:
        raise ValueError("dual_equation must run first")
    if d.h_dual.is_zero():
        return HessianReport(status="skipped", reason="dual equation vanishes")
    n = d.n
    if n < 2:
        return HessianReport(status="skipped", reason="needs n >= 2")
    h = d.h
    grad = h.gradient()
    hess = [[h.partial(i).partial(j) for j in range(n)] for i in range(n)]

    def hess_times(vec_forms):
        # vec_forms[k] is a linear SparsePoly; result row j of Hess * vec
        return [
            sum(
                (hess[j][k] * vec_forms[k] for k in range(1, n)),
                hess[j][0] * vec_forms[0],
            )
            for j in range(n)
        ]

    coords = [SparsePoly.variable(n, k) for k in range(n)]
    euler_lhs = hess_times(coords)
    for j in range(n):
        if euler_lhs[j] != grad[j].scale(n - 1):
            raise IdentityFails("Euler column of the Hessian identity fails")
    for idx, a in enumerate(d.log_h_basis):
        fields = [linear_form(n, a.row(k)) for k in range(n)]
        lhs = hess_times(fields)
        for j in range(n):
            rhs = -sum(
                (grad[k].scale(a.entries[k][j]) for k in range(1, n)),
                grad[0].scale(a.entries[0][j]),
            )
            if lhs[j] != rhs:
                raise IdentityFails(
                    f"Hessian identity fails on annihilating field {idx}"
                )

    sign = QONE if (n - 1) % 2 == 0 else -QONE
    constant = sign * d.norm_scalar / (rat(n - 1) * d.dual_scalar)
    route = "matrix"
    if n <= direct_cap:
        big_h = det_poly_matrix(hess)
        direct = d.h_dual.compose(grad)
        if direct != (big_h * h).scale(constant):
            raise IdentityFails("direct Hessian expansion disagrees")
        route = "matrix+direct"
    return HessianReport(
        status="ok",
        constant=constant,
        literal_match=abs(constant) == rat(n - 1),
        route=route,
    )


@dataclass
class B0Report:
    status: str  # ok | skipped
    constant: Q | None = None
    reason: str = ""


def b0_check(d: DivisorData, size_cap: int = B0_SIZE_CAP) -> B0Report:
    """(n-1) * det(Hessian h) = b0 * h^(n-2) for reductive divisors."""
    if d.reductive is None:
        raise ValueError("reductivity_check must run first")
    if d.reductive != "yes":
        return B0Report(status="skipped", reason=f"reductive={d.reductive}")
    n = d.n
    if n > size_cap:
        return B0Report(
            status="skipped", reason=f"n={n} above size cap {size_cap}"
        )
    h = d.h
    hess = [[h.partial(i).partial(j) for j in range(n)] for i in range(n)]
    big_h = det_poly_matrix(hess)
    try:
        quotient = exact_divide(big_h.scale(n - 1), h ** (n - 2))
    except Exception as exc:
        raise IdentityFails(f"(n-1)H is not divisible by h^(n-2): {exc}") from exc
    if not quotient.is_constant():
        raise IdentityFails("(n-1)H / h^(n-2) is not constant")
    return B0Report(status="ok", constant=quotient.constant_value())


def analyze_divisor(
    p: LFDPresentation, max_monomials: int = DEFAULT_MAX_MONOMIALS
) -> DivisorData:
    """Run the whole divisor-level pipeline in order."""
    d = saito_check(p, max_monomials=max_monomials)
    character_weights(d)
    specialness_check(d)
    reductivity_check(d)
    dual_equation(d, max_monomials=max_monomials)
    return d


def fields_from_equation(h: SparsePoly) -> list:
    """Candidate presentation matrices for a given homogeneous equation.

    Solves the linear system xi_A(h) = lambda * h over the pair
    (A, lambda) and returns the matrix parts of a kernel basis.  For a
    genuine linear free divisor equation this yields n independent
    matrices; feed them to saito_check for validation.
    """
    n = h.nvars
    columns = []
    for pq in range(n * n):
        pwr, qwr = divmod(pq, n)
        e = RationalMatrix(
            [
                [QONE if (r, s) == (pwr, qwr) else QZERO for s in range(n)]
                for r in range(n)
            ]
        )
        columns.append(apply_derivation(e, h))
    support = set(h.terms)
    for c in columns:
        support.update(c.terms)
    support = sorted(support)
    rows = []
    for key in support:
        row = [c.terms.get(key, QZERO) for c in columns]
        row.append(-h.terms.get(key, QZERO))
        rows.append(row)
    out = []
    for v in kernel_basis(RationalMatrix(rows)):
        entries = [[v[r * n + s] for s in range(n)] for r in range(n)]
        m = RationalMatrix(entries)
        if not m.is_zero():
            out.append(m)
    return out
