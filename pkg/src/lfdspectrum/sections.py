"""Linear sections, finiteness certificates, and Jacobian-algebra division.

A linear section f is divided against the ideal generated by the n-1
derivatives xi_j(f) along the annihilating fields.  Finiteness of f on
the divisor reduces to a rank condition plus nonvanishing of h on the
residual line; division then writes any homogeneous g as

    g = c * h^(l div n) * f^(l mod n) + sum_j k_j * xi_j(f)

exactly, which is the engine behind the connection computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .divisor import DivisorData
from .errors import BadPresentation, NotFinite, NotHomogeneous
from .linalg import RationalMatrix, SparseEchelon
from .poly import SparsePoly, apply_derivation, linear_form
from .rational import Q, QONE, QZERO, rat, rat_str


@dataclass(frozen=True)
class LinearSection:
    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(rat(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not any(coeffs):
            raise BadPresentation("linear section is the zero vector")

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def poly(self) -> SparsePoly:
        return linear_form(self.n, list(self.coefficients))


def section_from_json(obj, n: int) -> LinearSection:
    if not isinstance(obj, dict) or "f" not in obj:
        raise BadPresentation('section record must be {"f": [...]}')
    coeffs = obj["f"]
    if not isinstance(coeffs, list) or len(coeffs) != n:
        raise BadPresentation(f"section needs exactly {n} coefficients")
    return LinearSection(tuple(rat(c) for c in coeffs))


def section_to_json(f: LinearSection) -> dict:
    return {"f": [rat_str(c) for c in f.coefficients]}


@dataclass
class FinitenessCertificate:
    section: LinearSection
    jacobian_forms: list  # the n-1 linear forms xi_j(f)
    rank: int
    lf_direction: tuple | None  # primitive integer spanning vector of L_f
    c_h: Q  # h on the direction; zero iff not finite
    f_value: Q  # f on the direction
    rd_finite: bool
    rh_finite: bool
    reason: str = ""


def _primitive_direction(v: list) -> tuple:
    """Scale a rational vector to primitive integers, first nonzero > 0."""
    den = 1
    for c in v:
        den = den * c.denominator // gcd(den, int(c.denominator))
    ints = [int(c * den) for c in v]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    ints = [c // g for c in ints]
    lead = next(c for c in ints if c)
    if lead < 0:
        ints = [-c for c in ints]
    return tuple(rat(c) for c in ints)


def rd_finiteness(f: LinearSection, d: DivisorData) -> bool:
    """f avoids the dual divisor: h_dual at the coefficient vector is nonzero.

    A vanishing dual equation (non-prehomogeneous dual action) makes
    every section fail.
    """
    if d.h_dual is None:
        raise ValueError("dual_equation must run first")
    if d.h_dual.is_zero():
        return False
    return bool(d.h_dual.evaluate(list(f.coefficients)))


def rh_finiteness(f: LinearSection, d: DivisorData) -> FinitenessCertificate:
    """Rank test plus restriction of h to the residual line.

    The n-1 forms xi_j(f) must be independent; their common kernel is
    then a line L_f, and finiteness demands h not vanish on it.  The
    certificate records the primitive direction and the values of h and
    f there; both are scale-normalized by the primitive choice.
    """
    if d.log_h_basis is None:
        raise ValueError("character_weights must run first")
    n = d.n
    if f.n != n:
        raise BadPresentation(f"section has {f.n} coefficients, divisor has {n}")
    fpoly = f.poly()
    forms = [apply_derivation(a, fpoly) for a in d.log_h_basis]
    rows = [
        [form.coeff(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)]
        for form in forms
    ]
    jmat = RationalMatrix(rows)
    rank = jmat.rank()
    if rank < n - 1:
        return FinitenessCertificate(
            section=f,
            jacobian_forms=forms,
            rank=rank,
            lf_direction=None,
            c_h=QZERO,
            f_value=QZERO,
            rd_finite=rd_finiteness(f, d),
            rh_finite=False,
            reason=f"jacobian forms have rank {rank} < {n - 1}",
        )
    kernel = kernel_line(jmat)
    v = _primitive_direction(kernel)
    c_h = d.h.evaluate(list(v))
    f_value = fpoly.evaluate(list(v))
    finite = bool(c_h)
    return FinitenessCertificate(
        section=f,
        jacobian_forms=forms,
        rank=rank,
        lf_direction=v,
        c_h=c_h,
        f_value=f_value,
        rd_finite=rd_finiteness(f, d),
        rh_finite=finite,
        reason="" if finite else "h vanishes on the residual line",
    )


def kernel_line(jmat: RationalMatrix) -> list:
    """The 1-dimensional kernel of a rank n-1 matrix of n columns."""
    from .linalg import kernel_basis

    basis = kernel_basis(jmat)
    if len(basis) != 1:
        raise ValueError(f"kernel dimension {len(basis)}, expected 1")
    return basis[0]


@dataclass
class DivisionResult:
    c: Q
    power_index: int  # l mod n
    h_power: int  # l div n
    quotients: list  # n-1 polynomials k_j, degree l-1

    def reconstruct(self, cert: FinitenessCertificate, d: DivisorData) -> SparsePoly:
        f = cert.section.poly()
        total = (d.h ** self.h_power * f ** self.power_index).scale(self.c)
        for k, form in zip(self.quotients, cert.jacobian_forms):
            total = total + k * form
        return total


def _division_frame(cert: FinitenessCertificate, n: int):
    """RREF data shared by divide: pivot relations and the transform U.

    Returns (pivot_cols, gammas, free_col, u) where row r of U expresses
    x_{pivot_r} - gamma_r * x_free in terms of the jacobian forms.
    """
    rows = [
        [form.coeff(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)]
        for form in cert.jacobian_forms
    ]
    jmat = RationalMatrix(rows)
    red, pivots, u = jmat.rref_with_transform()
    free = next(j for j in range(n) if j not in pivots)
    gammas = [-red.entries[r][free] for r in range(n - 1)]
    return pivots, gammas, free, u


def divide(
    g: SparsePoly, cert: FinitenessCertificate, d: DivisorData
) -> DivisionResult:
    """Exact division of homogeneous g by the Jacobian ideal of f.

    On the kernel line every xi_j(f) vanishes, so c is forced by
    evaluating g there against h^(l div n) * f^(l mod n).  The residual
    then vanishes on the line and telescoping substitution of each pivot
    relation x_p -> gamma * x_free extracts one difference quotient per
    relation; transforming back through the RREF matrix yields the k_j.
    The remainder after all substitutions must be identically zero.
    """
    if not cert.rh_finite:
        raise NotFinite("section is not finite; division undefined")
    n = d.n
    if g.is_zero():
        zero = SparsePoly.zero(n)
        return DivisionResult(
            c=QZERO, power_index=0, h_power=0, quotients=[zero] * (n - 1)
        )
    if not g.is_homogeneous():
        raise NotHomogeneous("division requires a homogeneous polynomial")
    ell = g.degree()
    h_power, power_index = divmod(ell, n)
    v = list(cert.lf_direction)
    base_value = cert.c_h ** h_power * cert.f_value ** power_index
    c = g.evaluate(v) / base_value
    f = cert.section.poly()
    base = d.h ** h_power * f ** power_index
    residual = g - base.scale(c)
    quotients = [SparsePoly.zero(n)] * (n - 1)
    if residual.is_zero():
        return DivisionResult(
            c=c, power_index=power_index, h_power=h_power, quotients=quotients
        )
    pivots, gammas, free, u = _division_frame(cert, n)
    partials = []
    current = residual
    for r, p in enumerate(pivots):
        current, kprime = current.subst_var_scaled(p, gammas[r], free)
        partials.append(kprime)
    if not current.is_zero():
        raise ValueError("division remainder is nonzero; inconsistent certificate")
    for j in range(n - 1):
        acc = SparsePoly.zero(n)
        for r in range(n - 1):
            coeff = u.entries[r][j]
            if coeff:
                acc = acc + partials[r].scale(coeff)
        quotients[j] = acc
    return DivisionResult(
        c=c, power_index=power_index, h_power=h_power, quotients=quotients
    )


def divide_oracle(
    g: SparsePoly, cert: FinitenessCertificate, d: DivisorData
) -> DivisionResult:
    """Brute-force division by solving the full linear system.

    Columns are h^(l div n) * f^(l mod n) followed by every monomial
    multiple of every jacobian form, echelonized with combination
    tracking; reducing g must leave residual zero, and the tracked
    combination reads off c and the k_j coefficients.  Independent of
    the substitution method in divide.
    """
    if not cert.rh_finite:
        raise NotFinite("section is not finite; division undefined")
    n = d.n
    if g.is_zero():
        zero = SparsePoly.zero(n)
        return DivisionResult(
            c=QZERO, power_index=0, h_power=0, quotients=[zero] * (n - 1)
        )
    if not g.is_homogeneous():
        raise NotHomogeneous("division requires a homogeneous polynomial")
    ell = g.degree()
    h_power, power_index = divmod(ell, n)
    f = cert.section.poly()
    base = d.h ** h_power * f ** power_index

    monomials = _monomials_of_degree(n, ell - 1)
    ech = SparseEchelon(track=True)
    ech.add(dict(base.terms), tag=("c", None))
    for j, form in enumerate(cert.jacobian_forms):
        for m in monomials:
            col = form
            for i, e in enumerate(m):
                if e:
                    col = col.mul_var(i, e)
            ech.add(dict(col.terms), tag=(j, m))
    residual, combo = ech.reduce(dict(g.terms))
    if residual:
        raise ValueError("oracle: g is not in the span; inconsistent input")
    coeffs = {tag: -value for tag, value in combo.items()}
    c = coeffs.get(("c", None), QZERO)
    quotients = []
    for j in range(n - 1):
        terms = [
            (tag[1], value)
            for tag, value in coeffs.items()
            if tag[0] == j and value
        ]
        quotients.append(SparsePoly.from_terms(n, terms))
    return DivisionResult(
        c=c, power_index=power_index, h_power=h_power, quotients=quotients
    )


def _monomials_of_degree(nvars: int, degree: int) -> list:
    """All exponent tuples of the given total degree, lexicographic."""
    if degree < 0:
        return []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], degree, nvars)
    return out
