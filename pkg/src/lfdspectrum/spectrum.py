"""Exchange algorithms, spectra, monodromy, and the conjecture report.

Algorithm 1 repairs adjacency violations nu_i - nu_(i-1) > 1 by trading
a tau power between neighboring basis elements; its fixpoint carries
the t = 0 spectrum.  Algorithm 2 additionally wraps the last element
around to the front at the price of one t multiplication per step
(counted by k), after which the V+ inequalities hold cyclically and
the values are the spectrum at generic t.  Both terminate; a step
budget guards against bookkeeping bugs, not against inputs.

Everything downstream of the solved Birkhoff problem is exact list
arithmetic: monodromy exponents are kept as rationals mod 1, residue
eigenvalues and the conjectural symmetries are plain formulas in nu.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IdentityFails, StepBudgetExceeded
from .gaussmanin import ConnectionCoefficients, omega0_symbolic
from .rational import Q, QZERO, rat


def _default_budget(n: int) -> int:
    return n**3 + 10 * n


def _run_alg1(nu: list, scan: str, remaining: int):
    """Exchange loop; returns (fixpoint, moves, remaining budget)."""
    if scan not in ("smallest", "largest"):
        raise ValueError(f"unknown scan order {scan!r}")
    n = len(nu)
    moves = []
    while True:
        viol = [j for j in range(1, n) if nu[j] - nu[j - 1] > 1]
        if not viol:
            return nu, moves, remaining
        if remaining <= 0:
            raise StepBudgetExceeded("algorithm 1 ran past its move budget")
        j = viol[0] if scan == "smallest" else viol[-1]
        nu[j - 1], nu[j] = nu[j] - 1, nu[j - 1] + 1
        moves.append(j + 1)  # 1-indexed position of the violation
        remaining -= 1


def algorithm1(nu1: list, scan: str = "smallest", budget: int | None = None):
    """Fixpoint of the adjacent exchange move, with the applied moves.

    Each move picks a violating index i (smallest first by default) and
    replaces (nu_(i-1), nu_i) by (nu_i - 1, nu_(i-1) + 1); the log
    records the 1-indexed i per move.
    """
    nu = [rat(v) for v in nu1]
    remaining = _default_budget(len(nu)) if budget is None else budget
    nu, moves, _ = _run_alg1(nu, scan, remaining)
    return nu, moves


def algorithm2(nu2: list, budget: int | None = None):
    """Wraparound passes on an Algorithm 1 fixpoint.

    While nu_1 - nu_n > 1 the pair is replaced by (nu_n + 1, nu_1 - 1),
    k goes up by one (the underlying base change multiplies by t), and
    Algorithm 1 is re-run.  Returns (nu3, k, log); wrap moves appear in
    the log as "wrap", re-run exchanges as their violating index.
    """
    nu = [rat(v) for v in nu2]
    n = len(nu)
    remaining = _default_budget(n) if budget is None else budget
    k = 0
    log = []
    while n > 1 and nu[0] - nu[-1] > 1:
        if remaining <= 0:
            raise StepBudgetExceeded("algorithm 2 ran past its move budget")
        nu[0], nu[-1] = nu[-1] + 1, nu[0] - 1
        k += 1
        log.append("wrap")
        remaining -= 1
        nu, moves, remaining = _run_alg1(nu, "smallest", remaining)
        log.extend(moves)
    return nu, k, log


def vplus_verify(nu: list, mode: str) -> bool:
    """Adjacency inequalities certifying a V+ solution.

    t0 mode checks nu_i - nu_(i-1) <= 1; generic mode adds the
    wraparound bound nu_1 - nu_n <= 1.
    """
    if mode not in ("t0", "generic"):
        raise ValueError(f"unknown mode {mode!r}")
    vals = [rat(v) for v in nu]
    if any(vals[j] - vals[j - 1] > 1 for j in range(1, len(vals))):
        return False
    if mode == "generic" and len(vals) > 1 and vals[0] - vals[-1] > 1:
        return False
    return True


@dataclass
class MonodromyData:
    semisimple_exponents: list  # nu mod 1, basis order; eigenvalue e^(-2 pi i nu)
    jordan_blocks: list  # block sizes, ascending

    def __post_init__(self):
        assert sum(self.jordan_blocks) == len(self.semisimple_exponents)


def monodromy(nu: list, mode: str) -> MonodromyData:
    """Semisimple part and Jordan block sizes from the nu values.

    An edge i -> i+1 contributes to a block iff nu_(i+1) - nu_i = 1; in
    generic mode the basis is cyclic (omega_(n+1) = omega_1) so the
    edge n -> 1 participates under the same rule, at t = 0 it is absent.
    """
    if mode not in ("t0", "generic"):
        raise ValueError(f"unknown mode {mode!r}")
    vals = [rat(v) for v in nu]
    n = len(vals)
    exponents = [v - (v.numerator // v.denominator) for v in vals]
    if n == 1:
        return MonodromyData(exponents, [1])
    edges = [vals[j + 1] - vals[j] == 1 for j in range(n - 1)]
    edges.append(mode == "generic" and vals[0] - vals[-1] == 1)
    if all(edges):  # unreachable for consistent nu; defensive
        return MonodromyData(exponents, [n])
    breaks = [j for j in range(n) if not edges[j - 1]]
    sizes = []
    for pos, start in enumerate(breaks):
        end = breaks[(pos + 1) % len(breaks)]
        sizes.append((end - start) % n or n)
    return MonodromyData(exponents, sorted(sizes))


def residue_eigenvalues(nu3: list, k: int, n: int) -> list:
    """r_i = (i - 1 + k*n - nu_i) / n, the residue spectrum along t."""
    return [(rat(i) + rat(k * n) - rat(nu3[i])) / n for i in range(n)]


@dataclass
class ConjectureReport:
    extra_symmetry: bool
    t0_symmetry: bool
    min_mult: int
    residues: list
    residues_symmetric: bool
    predicted_S_support: list
    flat_indices: list


def _pair_symmetric(nu: list) -> bool:
    n = len(nu)
    target = rat(n - 1)
    return all(nu[i] + nu[n - 1 - i] == target for i in range(n))


def conjecture_report(nu2: list, nu3: list, k: int, n: int) -> ConjectureReport:
    """Observed state of the conjectural symmetries; reported, not asserted."""
    nu2 = [rat(v) for v in nu2]
    nu3 = [rat(v) for v in nu3]
    residues = residue_eigenvalues(nu3, k, n)
    spectrum = sorted(nu3)
    return ConjectureReport(
        extra_symmetry=_pair_symmetric(nu3),
        t0_symmetry=_pair_symmetric(nu2),
        min_mult=spectrum.count(spectrum[0]),
        residues=residues,
        residues_symmetric=sorted(residues) == sorted(-r for r in residues),
        predicted_S_support=[(i, n + 1 - i) for i in range(1, n + 1)],
        flat_indices=[i + 1 for i in range(n) if nu3[i] == rat(i)],
    )


@dataclass
class FrobeniusInitialData:
    B0_matrix: list  # Omega_0, symbolic in t
    Binfty_diag: list  # -nu3
    pairing_support: list
    primitive_candidates: list
    t0_primitive: int = 1


def frobenius_initial_data(spec, cc: ConnectionCoefficients, report: ConjectureReport):
    """Initial data (W, B_0, B_infinity, candidates) for the Frobenius side.

    With a unique minimal spectral number every index is a primitive
    candidate; otherwise only the indices realizing the minimum are.
    """
    nu3 = [rat(v) for v in spec.nu3]
    n = len(nu3)
    if report.min_mult == 1:
        candidates = list(range(1, n + 1))
    else:
        low = min(nu3)
        candidates = [i + 1 for i in range(n) if nu3[i] == low]
    return FrobeniusInitialData(
        B0_matrix=omega0_symbolic(cc),
        Binfty_diag=[-v for v in nu3],
        pairing_support=report.predicted_S_support,
        primitive_candidates=candidates,
    )


@dataclass
class SpectrumResult:
    nu1: list
    nu2: list
    nu3: list
    k: int
    alg1_log: list
    alg2_log: list
    spectrum_t0: list
    spectrum_generic: list
    cc: ConnectionCoefficients | None = None
    reductive: str = "unknown"


def spectrum_from_nu1(
    nu1: list,
    cc: ConnectionCoefficients | None = None,
    reductive: str = "unknown",
) -> SpectrumResult:
    """Run both algorithms and package the spectra.

    The generic-t spectrum symmetry alpha_i + alpha_(n+1-i) = n-1 is a
    theorem in that case, so its failure is raised as an inconsistency;
    the t = 0 counterpart is only conjectural and stays a report field.
    """
    nu1 = [rat(v) for v in nu1]
    n = len(nu1)
    nu2, log1 = algorithm1(nu1)
    nu3, k, log2 = algorithm2(nu2)
    total = sum(nu1, QZERO)
    if sum(nu2, QZERO) != total or sum(nu3, QZERO) != total:
        raise IdentityFails("exchange moves changed the nu sum")
    if not _pair_symmetric(sorted(nu3)):
        raise IdentityFails(
            "generic spectrum violates the symmetry alpha_i + alpha_(n+1-i) = n-1"
        )
    return SpectrumResult(
        nu1=nu1,
        nu2=nu2,
        nu3=nu3,
        k=k,
        alg1_log=log1,
        alg2_log=log2,
        spectrum_t0=sorted(nu2),
        spectrum_generic=sorted(nu3),
        cc=cc,
        reductive=reductive,
    )
