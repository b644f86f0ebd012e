"""Built-in example families: quiver discriminants and friends.

A quiver with dimension vector d gives the representation space
Rep(Q,d) = direct sum of Hom(C^{d_tail}, C^{d_head}) over the arrows,
acted on by prod GL(d_v) via X_a -> A_head X_a A_tail^(-1).  When the
dimension identity sum_a d_t*d_h = sum_v d_v^2 - 1 holds and the
complement of the open orbit is a divisor, the infinitesimal action
presents it as a linear free divisor.  The one-dimensional scalar
kernel of the action is removed by dropping a single generator: the
scalar block of the lexicographically last node.  Dropping that node's
(1,1) elementary matrix leaves the same generator set and keeps the
remaining fields independent.

Non-quiver families: the normal crossing divisor on the diagonal
torus, and the k x k symmetric matrices under the upper-triangular
group acting by S -> tB.S + S.B (coordinates s_pq, p <= q, in lex
order; the equation is the product of leading principal minors).

Constructions whose validation determinant exceeds the monomial cap
(the 22-dimensional e6 space, the larger sym/dynkinD members at
default caps) are returned construction-only; callers that want the
full check re-run saito_check with a raised cap.
"""

import random
from dataclasses import dataclass

from .divisor import (
    DEFAULT_MAX_MONOMIALS,
    DivisorData,
    LFDPresentation,
    saito_check,
)
from .errors import (
    DegreeMismatch,
    DeterminantVanishes,
    DimensionMismatch,
    ExhaustedAttempts,
    NotReduced,
    ResourceCapExceeded,
    SaitoFailure,
    UnsupportedParameter,
)
from .linalg import RationalMatrix
from .rational import Q, QONE, QZERO, rat
from .sections import FinitenessCertificate, LinearSection, rh_finiteness


@dataclass(frozen=True)
class QuiverSpec:
    nodes: tuple
    arrows: tuple  # pairs (tail label, head label)
    dims: tuple  # positive integer per node, parallel to nodes
    name: str = ""

    def __post_init__(self):
        if len(self.nodes) != len(set(self.nodes)):
            raise ValueError("node labels must be distinct")
        if len(self.dims) != len(self.nodes):
            raise ValueError("need one dimension per node")
        if any(d < 1 for d in self.dims):
            raise ValueError("dimensions must be positive")
        known = set(self.nodes)
        for tail, head in self.arrows:
            if tail not in known or head not in known:
                raise ValueError(f"arrow ({tail},{head}) references unknown node")
            if tail == head:
                raise ValueError(f"oriented loop at node {tail}")

    def dim_of(self, label) -> int:
        return self.dims[self.nodes.index(label)]

    def rep_dimension(self) -> int:
        return sum(self.dim_of(t) * self.dim_of(h) for t, h in self.arrows)

    def group_dimension(self) -> int:
        return sum(d * d for d in self.dims)


def quiver_lfd(
    q: QuiverSpec,
    max_monomials: int = DEFAULT_MAX_MONOMIALS,
    validate: bool = True,
) -> LFDPresentation:
    """Presentation of the discriminant in Rep(Q,d).

    Coordinates are the matrix entries, arrow by arrow in listed order,
    row-major within each arrow (so a full column per arrow when the
    tails are one-dimensional).  Generators are the elementary matrices
    of each gl(d_v) in node order, minus the scalar block of the
    lexicographically last node.

    With validate on, Saito's criterion is checked and a non-reduced or
    degenerate determinant raises SaitoFailure; a determinant too large
    for the monomial cap is skipped, leaving the construction validated
    by the dimension identity only.
    """
    n = q.rep_dimension()
    if n != q.group_dimension() - 1:
        raise DimensionMismatch(
            f"rep dimension {n} != group dimension {q.group_dimension()} - 1"
        )
    offsets = {}
    pos = 0
    for a in q.arrows:
        offsets[a] = pos
        pos += q.dim_of(a[0]) * q.dim_of(a[1])

    def coord(a, row, col):
        return offsets[a] + row * q.dim_of(a[0]) + col

    dropped = max(q.nodes)
    basis = []
    for v in q.nodes:
        d = q.dim_of(v)
        for p in range(d):
            for s in range(d):
                if v == dropped and p == 0 and s == 0:
                    continue
                entries = [[QZERO] * n for _ in range(n)]
                for a in q.arrows:
                    dt = q.dim_of(a[0])
                    if a[1] == v:
                        for c in range(dt):
                            entries[coord(a, p, c)][coord(a, s, c)] += QONE
                    if a[0] == v:
                        for r in range(q.dim_of(a[1])):
                            entries[coord(a, r, s)][coord(a, r, p)] -= QONE
                basis.append(RationalMatrix(entries))
    pres = LFDPresentation(n=n, lie_basis=basis, name=q.name)
    if validate:
        try:
            saito_check(pres, max_monomials=max_monomials)
        except ResourceCapExceeded:
            pass
        except (DeterminantVanishes, NotReduced, DegreeMismatch) as exc:
            raise SaitoFailure(f"quiver {q.name or q.nodes}: {exc}") from exc
    return pres


def star_quiver(m: int) -> QuiverSpec:
    """m exterior one-dimensional nodes feeding a central node of dim m-1."""
    nodes = ("c",) + tuple(f"v{j:02d}" for j in range(1, m + 1))
    dims = (m - 1,) + (1,) * m
    arrows = tuple((f"v{j:02d}", "c") for j in range(1, m + 1))
    return QuiverSpec(nodes=nodes, arrows=arrows, dims=dims, name=f"star:{m}")


def dynkin_d_quiver(m: int) -> QuiverSpec:
    """D_m with the highest root (1,2,...,2,1,1), arrows toward the branch."""
    nodes = tuple(f"n{j:02d}" for j in range(1, m + 1))
    dims = (1,) + (2,) * (m - 3) + (1, 1)
    arrows = tuple(
        (f"n{j:02d}", f"n{j + 1:02d}") for j in range(1, m - 2)
    ) + (
        (f"n{m - 1:02d}", f"n{m - 2:02d}"),
        (f"n{m:02d}", f"n{m - 2:02d}"),
    )
    return QuiverSpec(nodes=nodes, arrows=arrows, dims=dims, name=f"dynkinD:{m}")


def e6_quiver() -> QuiverSpec:
    """E6 with the highest root (1,2,3,2,1; 2), oriented as a double chain.

    Both chain ends feed toward the center; the branch arrow leaves the
    center upward.  This orientation matters here: unlike the A and D
    series, the E6 discriminants for different orientations are not
    isomorphic.
    """
    nodes = ("n1", "n2", "n3", "n4", "n5", "n6")
    dims = (1, 2, 3, 2, 1, 2)
    arrows = (("n1", "n2"), ("n2", "n3"), ("n3", "n6"), ("n4", "n3"), ("n5", "n4"))
    return QuiverSpec(nodes=nodes, arrows=arrows, dims=dims, name="e6")


def nc_presentation(n: int) -> LFDPresentation:
    """x1*...*xn presented by the diagonal torus E_11,...,E_nn."""
    basis = [
        RationalMatrix(
            [[QONE if r == s == i else QZERO for s in range(n)] for r in range(n)]
        )
        for i in range(n)
    ]
    return LFDPresentation(n=n, lie_basis=basis, name=f"nc:{n}")


def sym_presentation(k: int) -> LFDPresentation:
    """Symmetric k x k matrices under the upper-triangular group.

    Coordinates s_pq (p <= q) in lex order; the generator for the
    elementary matrix E_pq sends S to tE_pq.S + S.E_pq.
    """
    pairs = [(p, s) for p in range(k) for s in range(p, k)]
    index = {pq: i for i, pq in enumerate(pairs)}
    n = len(pairs)
    basis = []
    for p, s in pairs:
        entries = [[QZERO] * n for _ in range(n)]
        for r, c in pairs:
            if r == s:
                entries[index[(r, c)]][index[(min(p, c), max(p, c))]] += QONE
            if c == s:
                entries[index[(r, c)]][index[(min(r, p), max(r, p))]] += QONE
        basis.append(RationalMatrix(entries))
    return LFDPresentation(n=n, lie_basis=basis, name=f"sym:{k}")


FAMILY_KINDS = ("nc", "star", "dynkinD", "e6", "sym")


@dataclass(frozen=True)
class FamilyId:
    kind: str
    param: int | None = None

    @staticmethod
    def parse(text: str) -> "FamilyId":
        kind, sep, tail = text.partition(":")
        if kind not in FAMILY_KINDS:
            raise UnsupportedParameter(f"unknown family {kind!r}")
        if not sep:
            return FamilyId(kind=kind)
        try:
            param = int(tail)
        except ValueError:
            raise UnsupportedParameter(
                f"family parameter must be an integer, got {tail!r}"
            ) from None
        return FamilyId(kind=kind, param=param)

    def __str__(self):
        return self.kind if self.param is None else f"{self.kind}:{self.param}"


_PARAM_BOUNDS = {"nc": 1, "star": 2, "dynkinD": 4, "sym": 1}


def _validated(fid) -> FamilyId:
    if isinstance(fid, str):
        fid = FamilyId.parse(fid)
    if fid.kind == "e6":
        if fid.param is not None:
            raise UnsupportedParameter("e6 takes no parameter")
        return fid
    if fid.param is None:
        raise UnsupportedParameter(f"family {fid.kind} needs a parameter")
    if fid.param < _PARAM_BOUNDS[fid.kind]:
        raise UnsupportedParameter(
            f"family {fid.kind} needs parameter >= {_PARAM_BOUNDS[fid.kind]}, "
            f"got {fid.param}"
        )
    return fid


def family(
    fid,
    max_monomials: int = DEFAULT_MAX_MONOMIALS,
    validate: bool = True,
) -> LFDPresentation:
    """Construct a built-in family member ("nc:4", "star:3", "e6", ...)."""
    fid = _validated(fid)
    if fid.kind == "nc":
        pres = nc_presentation(fid.param)
    elif fid.kind == "sym":
        pres = sym_presentation(fid.param)
    elif fid.kind == "star":
        return quiver_lfd(
            star_quiver(fid.param), max_monomials=max_monomials, validate=validate
        )
    elif fid.kind == "dynkinD":
        return quiver_lfd(
            dynkin_d_quiver(fid.param), max_monomials=max_monomials, validate=validate
        )
    else:
        return quiver_lfd(
            e6_quiver(), max_monomials=max_monomials, validate=validate
        )
    if validate:
        try:
            saito_check(pres, max_monomials=max_monomials)
        except ResourceCapExceeded:
            pass
    return pres


E6_SECTION = (
    1, 2, 0, 1, 3, 0, 1, 3, 2, 1, 0,
    2, 1, 3, 0, 1, 3, 0, 2, 1, 3, 2,
)

# star:3 in column-major coordinates a11,a21,a12,a22,a13,a23: the form
# a11 + a12 + a22 + a23.  Its coefficient matrix [[1,1,0],[0,1,1]] has
# all three maximal minors nonzero, which is exactly finiteness here.
_STAR3_SECTION = (1, 0, 1, 1, 0, 1)


def canonical_f(fid) -> LinearSection | None:
    """The distinguished section of a family, where one is singled out."""
    fid = _validated(fid)
    if fid.kind == "nc":
        return LinearSection(tuple(rat(1) for _ in range(fid.param)))
    if fid.kind == "star" and fid.param == 3:
        return LinearSection(tuple(rat(c) for c in _STAR3_SECTION))
    if fid.kind == "sym" and fid.param == 2:
        return LinearSection((rat(1), rat(0), rat(1)))
    if fid.kind == "e6":
        return LinearSection(tuple(rat(c) for c in E6_SECTION))
    return None


@dataclass
class SeededSection:
    section: LinearSection
    attempts: int
    certificate: FinitenessCertificate


def random_finite_f(
    d: DivisorData, seed: int, max_attempts: int = 10_000
) -> SeededSection:
    """First finite section drawn from a seeded small-integer stream.

    Entries are uniform in {0,...,9}; the zero vector is skipped but
    counts as a draw.  Exhaustion signals a divisor whose dual action
    leaves no room for finite sections.
    """
    rng = random.Random(seed)
    n = d.n
    for attempt in range(1, max_attempts + 1):
        vec = tuple(rat(rng.randrange(10)) for _ in range(n))
        if all(c == 0 for c in vec):
            continue
        cert = rh_finiteness(LinearSection(vec), d)
        if cert.rh_finite:
            return SeededSection(
                section=cert.section, attempts=attempt, certificate=cert
            )
    raise ExhaustedAttempts(
        f"no finite section among {max_attempts} seeded draws (seed {seed})"
    )
