"""Connection matrix of the Brieskorn lattice family.

The lattice is free of rank n over the (tau^-1, t)-polynomials, with
basis (-f)^(i-1) * alpha.  Differentiating the top basis element along
tau gives (-f)^n * alpha, which the division step rewrites against h
and the Jacobian forms; each quotient term tau*k_j*xi_j(f)*alpha turns
back into a polynomial of one degree less, so n steps exhaust the
iteration and fill the last column of the matrix.

Matrices over the two symbolic variables are kept as plain n x n lists
of SparsePoly; variable 0 is t throughout, variable 1 is tau^-1 in the
verification grids and tau itself in the t-direction matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .divisor import DivisorData
from .errors import DegreeMismatch, InconsistentSystem, InvalidConnection
from .poly import SparsePoly, apply_derivation
from .rational import Q, QONE, QZERO, rat
from .sections import FinitenessCertificate, divide, divide_oracle

MINUS_ONE = rat(-1)


@dataclass
class GMElement:
    """Finite sum of poly * tau^(-m) * alpha, keyed by m >= 0.

    The generator alpha itself is never materialized; only coefficient
    polynomials are stored.  Homogeneous elements satisfy a grading in
    which tau has degree -1 and each tau^(-m) therefore shifts the
    coefficient degree up by m.
    """

    nvars: int
    terms: dict

    def __post_init__(self):
        self.terms = {m: p for m, p in self.terms.items() if not p.is_zero()}

    @classmethod
    def from_poly(cls, p: SparsePoly) -> "GMElement":
        return cls(p.nvars, {0: p})

    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "GMElement") -> "GMElement":
        merged = dict(self.terms)
        for m, p in other.terms.items():
            merged[m] = merged[m] + p if m in merged else p
        return GMElement(self.nvars, merged)

    def scale(self, value) -> "GMElement":
        return GMElement(self.nvars, {m: p.scale(value) for m, p in self.terms.items()})

    def shift(self, k: int = 1) -> "GMElement":
        """Multiply by tau^(-k)."""
        if k < 0 and any(m + k < 0 for m in self.terms):
            raise ValueError("positive tau powers leave the lattice")
        return GMElement(self.nvars, {m + k: p for m, p in self.terms.items()})

    def graded_degree(self) -> int | None:
        """Common value of deg(poly) + m, or None if mixed."""
        seen = {p.hom_degree() + m for m, p in self.terms.items()}
        if len(seen) == 1:
            return seen.pop()
        return None


@dataclass
class ConnectionCoefficients:
    c: list  # c_0 .. c_n
    normalized: bool
    t_scale: Q

    @property
    def n(self) -> int:
        return len(self.c) - 1


@dataclass
class BasisDegrees:
    degrees: list

    @classmethod
    def initial(cls, n: int) -> "BasisDegrees":
        return cls(list(range(n)))

    def after_rescales(self, k: int) -> "BasisDegrees":
        n = len(self.degrees)
        return BasisDegrees([k * n + d for d in self.degrees])


def trick_reduce(kjs: list, d: DivisorData) -> SparsePoly:
    """Rewrite sum_j tau * k_j * xi_j(f) * alpha as a single polynomial.

    For a field xi annihilating h the exchange rule reads
    tau*g*xi(f)*alpha = (xi(g) + trace(xi)*g)*alpha, so the result is
    sum_j (xi_j(k_j) + trace(xi_j) * k_j) over the annihilating basis.
    The k_j must share one degree; the output has that same degree.
    """
    if d.log_h_basis is None:
        raise InconsistentSystem("divisor weights have not been computed")
    if len(kjs) != len(d.log_h_basis):
        raise DegreeMismatch(
            f"expected {len(d.log_h_basis)} quotients, got {len(kjs)}"
        )
    degrees = set()
    for k in kjs:
        if k.is_zero():
            continue
        if not k.is_homogeneous():
            raise DegreeMismatch("quotient polynomial is not homogeneous")
        degrees.add(k.hom_degree())
    if len(degrees) > 1:
        raise DegreeMismatch(f"quotient degrees differ: {sorted(degrees)}")
    n = d.n
    total = SparsePoly.zero(n)
    for k, a in zip(kjs, d.log_h_basis):
        if k.is_zero():
            continue
        total = total + apply_derivation(a, k) + k.scale(a.trace())
    return total


def connection_matrix(
    d: DivisorData,
    cert: FinitenessCertificate,
    use_oracle: bool = False,
) -> ConnectionCoefficients:
    """The coefficients c_0..c_n of the tau-connection in the power basis.

    Step r divides the working polynomial (degree exactly n-r) by the
    Jacobian ideal: the coefficient lands on h for r=0 and on
    (-f)^(n-r) afterwards, the quotients feed trick_reduce to produce
    the next working polynomial.  use_oracle switches the division
    routine; the resulting c-vector must not depend on it.
    """
    n = d.n
    f = cert.section.poly()
    division = divide_oracle if use_oracle else divide
    g = f.scale(MINUS_ONE) ** n
    cs = []
    for r in range(n + 1):
        if not g.is_zero() and g.hom_degree() != n - r:
            raise InconsistentSystem(
                f"step {r}: working degree {g.hom_degree()}, expected {n - r}"
            )
        res = division(g, cert, d)
        if r == 0:
            cs.append(res.c)
        else:
            # divide reports the coefficient on f^(n-r), the chain wants
            # it on (-f)^(n-r)
            cs.append(res.c * MINUS_ONE ** (n - r))
        if r < n:
            g = trick_reduce(res.quotients, d)
    if not cs[0]:
        raise InvalidConnection("(-f)^n is not a nonzero multiple of h")
    if d.special is True and cs[n]:
        raise InconsistentSystem(
            f"special divisor produced c_n = {cs[n]}, expected 0"
        )
    return ConnectionCoefficients(c=cs, normalized=cs[0] == QONE, t_scale=QONE)


def normalize_c0(cc: ConnectionCoefficients) -> ConnectionCoefficients:
    """Rescale the base coordinate t so that c_0 becomes 1.

    Only the single t-dependent matrix entry c_0*t changes under the
    rescale, so the remaining coefficients carry over unchanged; the
    factor is recorded in t_scale.
    """
    c0 = cc.c[0]
    if not c0:
        raise InvalidConnection("cannot normalize: c_0 = 0")
    return ConnectionCoefficients(
        c=[QONE] + list(cc.c[1:]), normalized=True, t_scale=cc.t_scale * c0
    )


# ---------------------------------------------------------------------------
# symbolic matrix grids

def grid_zero(n: int, nvars: int = 2) -> list:
    return [[SparsePoly.zero(nvars) for _ in range(n)] for _ in range(n)]


def grid_constant(m, nvars: int = 2) -> list:
    entries = getattr(m, "entries", m)
    return [[SparsePoly.constant(nvars, v) for v in row] for row in entries]


def grid_add(a: list, b: list) -> list:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def grid_sub(a: list, b: list) -> list:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def grid_scale(a: list, s) -> list:
    return [[x.scale(s) for x in row] for row in a]


def grid_mul(a: list, b: list) -> list:
    n, mid, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(cols):
            acc = SparsePoly.zero(a[0][0].nvars)
            for k in range(mid):
                if a[i][k].is_zero() or b[k][j].is_zero():
                    continue
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def grid_commutator(a: list, b: list) -> list:
    return grid_sub(grid_mul(a, b), grid_mul(b, a))


def grid_is_zero(a: list) -> bool:
    return all(x.is_zero() for row in a for x in row)


def omega0_symbolic(cc: ConnectionCoefficients) -> list:
    """Omega_0 over (t, .): subdiagonal ones, c_0*t in the corner."""
    n = cc.n
    grid = grid_zero(n)
    for i in range(1, n):
        grid[i][i - 1] = SparsePoly.constant(2, QONE)
    grid[0][n - 1] = grid[0][n - 1] + SparsePoly.variable(2, 0).scale(cc.c[0])
    return grid


def omega_pole_part(cc: ConnectionCoefficients, k: int) -> list:
    """Coefficient matrix Omega_k of tau^(-k), k = 1..n: one entry c_k."""
    n = cc.n
    grid = grid_zero(n)
    if cc.c[k]:
        grid[n - k][n - 1] = SparsePoly.constant(2, cc.c[k])
    return grid


def omega_symbolic(cc: ConnectionCoefficients) -> list:
    """Full matrix of tau-differentiation over (t, theta), theta = tau^-1.

    Last column of row j (1-indexed) carries c_(n-j+1) * theta^(n-j+1),
    with the extra c_0*t summand in row 1.
    """
    n = cc.n
    grid = omega0_symbolic(cc)
    theta = SparsePoly.variable(2, 1)
    for k in range(1, n + 1):
        if cc.c[k]:
            grid[n - k][n - 1] = grid[n - k][n - 1] + (theta**k).scale(cc.c[k])
    return grid


def omega0_report(cc: ConnectionCoefficients) -> list:
    """String form of Omega_0 for reports: entries over the symbol t."""
    n = cc.n
    rows = [["0"] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = "1"
    c0 = cc.c[0]
    rows[0][n - 1] = "t" if c0 == QONE else f"{c0}*t"
    return rows


@dataclass
class TConnectionMatrix:
    """Matrix of n*t*d/dt in the final basis, over (t, tau).

    warning is set when the divisor is not known to be reductive: the
    matrix is still emitted but the closed form is only proved in the
    reductive case.
    """

    matrix: list
    warning: str | None = None


def t_connection_matrix(spectrum, n: int) -> TConnectionMatrix:
    """diag(0..n-1) + k*n*Id + tau*Omega_0 + A_infinity of the final basis.

    The diagonal part equals n * residue_eigenvalues, so it vanishes
    exactly when every nu_i equals i-1 and k = 0.
    """
    cc = spectrum.cc
    if cc.n != n:
        raise InconsistentSystem(f"spectrum rank {cc.n} does not match n={n}")
    tau = SparsePoly.variable(2, 1)
    grid = grid_zero(n)
    for i in range(1, n):
        grid[i][i - 1] = tau
    grid[0][n - 1] = grid[0][n - 1] + (tau * SparsePoly.variable(2, 0)).scale(cc.c[0])
    for i in range(n):
        diag = rat(i) + rat(spectrum.k * n) - spectrum.nu3[i]
        grid[i][i] = grid[i][i] + SparsePoly.constant(2, diag)
    warning = None
    if getattr(spectrum, "reductive", "unknown") != "yes":
        warning = (
            "divisor is not known reductive: the t-direction matrix is "
            "emitted without a validity claim"
        )
    return TConnectionMatrix(matrix=grid, warning=warning)


def flatness_identities(cc: ConnectionCoefficients, a_inf_diag: list) -> bool:
    """Commutation relations tying the tau- and t-direction matrices.

    With A = Omega_0 (entries over t), A' = A/n, B = A_infinity and
    B' = (B + diag(0..n-1))/n the flat pair satisfies [A,A'] = 0,
    [B,B'] = 0 and t*dA/dt - A' = [A,B'] - [A',B], all checked
    symbolically in t.
    """
    n = cc.n
    if len(a_inf_diag) != n:
        raise InconsistentSystem("diagonal length does not match the rank")
    a = omega0_symbolic(cc)
    a_prime = grid_scale(a, Q(1, n))
    b = grid_zero(n)
    b_prime = grid_zero(n)
    for i in range(n):
        b[i][i] = SparsePoly.constant(2, rat(a_inf_diag[i]))
        b_prime[i][i] = SparsePoly.constant(2, (rat(a_inf_diag[i]) + i) / n)
    if not grid_is_zero(grid_commutator(a, a_prime)):
        return False
    if not grid_is_zero(grid_commutator(b, b_prime)):
        return False
    t_da = [[_t_euler(x) for x in row] for row in a]
    lhs = grid_sub(t_da, a_prime)
    rhs = grid_sub(grid_commutator(a, b_prime), grid_commutator(a_prime, b))
    return grid_is_zero(grid_sub(lhs, rhs))


def _t_euler(p: SparsePoly) -> SparsePoly:
    """t * d/dt on a polynomial whose variable 0 is t."""
    return p.partial(0).mul_var(0)
