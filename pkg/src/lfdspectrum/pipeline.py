"""End-to-end analysis: divisor checks through spectrum and reports.

The stages live in their own modules; this one runs them in dependency
order, times each, and flattens the results into a JSON-ready dict.
Everything in that dict is a string, int, bool, list or dict, so its
serialization is byte-identical across runs for the same input and
schema version.  Wall-clock timings are kept on the result object for
the plain-text table but never enter the JSON payload.
"""

from __future__ import annotations

import hashlib
from contextlib import contextmanager
from dataclasses import dataclass
from time import perf_counter

from .birkhoff import BirkhoffSolution, solve_birkhoff
from .divisor import (
    DEFAULT_MAX_MONOMIALS,
    DivisorData,
    LFDPresentation,
    analyze_divisor,
    b0_check,
    hessian_identity_check,
    presentation_to_json,
)
from .errors import LfdError, NotFinite
from .gaussmanin import (
    ConnectionCoefficients,
    TConnectionMatrix,
    connection_matrix,
    normalize_c0,
    t_connection_matrix,
)
from .poly import SparsePoly
from .rational import rat_str
from .sections import (
    FinitenessCertificate,
    LinearSection,
    rh_finiteness,
    section_to_json,
)
from .spectrum import (
    ConjectureReport,
    FrobeniusInitialData,
    MonodromyData,
    SpectrumResult,
    conjecture_report,
    frobenius_initial_data,
    monodromy,
    spectrum_from_nu1,
)

SCHEMA_VERSION = 1
H_TEXT_TERM_CAP = 10_000


@contextmanager
def _stage(name: str, timings: dict):
    """Time a stage and tag any package error with its name."""
    start = perf_counter()
    try:
        yield
    except LfdError as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise
    finally:
        timings[name] = timings.get(name, 0.0) + perf_counter() - start


def _term_chunks(p: SparsePoly, var_prefix: str = "x"):
    """Emission chunks, one term at a time, concatenating to emit(p)."""
    first = True
    for exps, c in p.terms_grevlex():
        mag = c if c > 0 else -c
        factors = [rat_str(mag)]
        for i, e in enumerate(exps):
            if e:
                factors.append(f"{var_prefix}{i + 1}^{e}")
        body = "*".join(factors)
        if first:
            yield body if c > 0 else "-" + body
            first = False
        else:
            yield (" + " if c > 0 else " - ") + body


def capped_poly_text(p: SparsePoly, cap: int = H_TEXT_TERM_CAP) -> dict:
    """Size-capped rendering with a hash of the full canonical text.

    The hash is computed over the complete emission even when only the
    first `cap` terms are kept, so two reports agree on the polynomial
    exactly when the hashes match.
    """
    digest = hashlib.sha256()
    kept = []
    terms = 0
    for chunk in _term_chunks(p):
        digest.update(chunk.encode())
        if terms < cap:
            kept.append(chunk)
        terms += 1
    if terms == 0:
        kept = ["0"]
        digest.update(b"0")
    text = "".join(kept)
    truncated = terms > cap
    if truncated:
        text += f" ... [truncated, {terms - cap} more terms]"
    return {
        "text": text,
        "terms": max(terms, 1),
        "sha256": digest.hexdigest(),
        "truncated": truncated,
    }


def _render_grid(grid: list, names: tuple) -> list:
    """String matrix for a grid of polynomials in named variables."""

    def render(p):
        out = []
        for exps, c in p.terms_grevlex():
            mag = c if c > 0 else -c
            factors = [rat_str(mag)]
            for name, e in zip(names, exps):
                if e:
                    factors.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(factors)
            if not out:
                out.append(body if c > 0 else "-" + body)
            else:
                out.append((" + " if c > 0 else " - ") + body)
        return "".join(out) or "0"

    return [[render(p) for p in row] for row in grid]


@dataclass
class AnalysisResult:
    divisor: DivisorData
    section: LinearSection
    certificate: FinitenessCertificate
    cc: ConnectionCoefficients
    birkhoff: BirkhoffSolution
    spectrum: SpectrumResult
    monodromy_t0: MonodromyData
    monodromy_generic: MonodromyData
    conjectures: ConjectureReport
    frobenius: FrobeniusInitialData
    t_connection: TConnectionMatrix
    timings: dict
    steps: dict


def analyze(
    subject,
    f: LinearSection,
    max_monomials: int = DEFAULT_MAX_MONOMIALS,
) -> AnalysisResult:
    """Run the full chain on a presentation or a prebuilt DivisorData.

    Accepting DivisorData avoids recomputing the determinant when the
    caller already needed the divisor (for seeded section search).  The
    finiteness certificate is enforced here: everything downstream
    silently assumes it, so a failing section raises NotFinite instead
    of producing garbage.
    """
    timings: dict = {}
    with _stage("divisor", timings):
        if isinstance(subject, DivisorData):
            d = subject
        else:
            d = analyze_divisor(subject, max_monomials=max_monomials)
    with _stage("finiteness", timings):
        cert = rh_finiteness_checked(f, d)
    with _stage("connection", timings):
        cc = normalize_c0(connection_matrix(d, cert))
    with _stage("birkhoff", timings):
        sol = solve_birkhoff(cc, special=bool(d.special))
    with _stage("spectrum", timings):
        spec = spectrum_from_nu1(sol.nu1, cc=cc, reductive=d.reductive or "unknown")
        mono_t0 = monodromy(spec.nu2, "t0")
        mono_gen = monodromy(spec.nu3, "generic")
        report = conjecture_report(spec.nu2, spec.nu3, spec.k, d.n)
        frob = frobenius_initial_data(spec, cc, report)
        tmat = t_connection_matrix(spec, d.n)
    steps = {
        "alg1_moves": len(spec.alg1_log),
        "alg2_moves": len(spec.alg2_log),
        "rescales": spec.k,
        "birkhoff_levels": len(sol.root_log),
    }
    return AnalysisResult(
        divisor=d,
        section=f,
        certificate=cert,
        cc=cc,
        birkhoff=sol,
        spectrum=spec,
        monodromy_t0=mono_t0,
        monodromy_generic=mono_gen,
        conjectures=report,
        frobenius=frob,
        t_connection=tmat,
        timings=timings,
        steps=steps,
    )


def rh_finiteness_checked(f: LinearSection, d: DivisorData) -> FinitenessCertificate:
    cert = rh_finiteness(f, d)
    if not cert.rh_finite:
        raise NotFinite(f"section fails the finiteness test: {cert.reason}")
    return cert


def _certificate_dict(cert: FinitenessCertificate) -> dict:
    return {
        "rank": cert.rank,
        "lf_direction": (
            [rat_str(c) for c in cert.lf_direction] if cert.lf_direction else None
        ),
        "h_on_line": rat_str(cert.c_h),
        "f_on_line": rat_str(cert.f_value),
        "rd_finite": cert.rd_finite,
        "rh_finite": cert.rh_finite,
        "reason": cert.reason,
    }


def _monodromy_dict(m: MonodromyData) -> dict:
    return {
        "exponents": [rat_str(v) for v in m.semisimple_exponents],
        "jordan_blocks": list(m.jordan_blocks),
    }


def build_report(result: AnalysisResult, input_echo: dict | None = None) -> dict:
    """Flatten an AnalysisResult into the versioned JSON-ready dict."""
    d = result.divisor
    spec = result.spectrum
    rep = result.conjectures
    frob = result.frobenius
    dual = (
        capped_poly_text(d.h_dual)
        if d.h_dual is not None and not d.h_dual.is_zero()
        else None
    )
    echo = dict(input_echo or {})
    echo["presentation"] = presentation_to_json(d.presentation)
    echo["section"] = section_to_json(result.section)
    return {
        "schema_version": SCHEMA_VERSION,
        "input": echo,
        "divisor": {
            "n": d.n,
            "name": d.presentation.name,
            "h": capped_poly_text(d.h),
            "h_dual": dual,
            "weights": [rat_str(w) for w in d.weights],
            "euler_index": d.euler_index,
            "special": d.special,
            "reductive": d.reductive,
        },
        "finiteness": _certificate_dict(result.certificate),
        "connection": {
            "c": [rat_str(v) for v in result.cc.c],
            "t_scale": rat_str(result.cc.t_scale),
        },
        "birkhoff": {
            "special_mode": result.birkhoff.special,
            "b_table": [
                [i, j, rat_str(v)]
                for (i, j), v in sorted(result.birkhoff.b.items())
            ],
            "root_log": result.birkhoff.root_log,
        },
        "spectrum": {
            "nu1": [rat_str(v) for v in spec.nu1],
            "nu2": [rat_str(v) for v in spec.nu2],
            "nu3": [rat_str(v) for v in spec.nu3],
            "k": spec.k,
            "spectrum_t0": [rat_str(v) for v in spec.spectrum_t0],
            "spectrum_generic": [rat_str(v) for v in spec.spectrum_generic],
        },
        "monodromy": {
            "t0": _monodromy_dict(result.monodromy_t0),
            "generic": _monodromy_dict(result.monodromy_generic),
        },
        "residues": [rat_str(v) for v in rep.residues],
        "conjectures": {
            "extra_symmetry": rep.extra_symmetry,
            "t0_symmetry": rep.t0_symmetry,
            "min_mult": rep.min_mult,
            "residues_symmetric": rep.residues_symmetric,
            "predicted_S_support": [list(pair) for pair in rep.predicted_S_support],
            "flat_indices": list(rep.flat_indices),
        },
        "frobenius": {
            "B0_matrix": _render_grid(frob.B0_matrix, ("t", "theta")),
            "Binfty_diag": [rat_str(v) for v in frob.Binfty_diag],
            "primitive_candidates": list(frob.primitive_candidates),
            "t0_primitive": frob.t0_primitive,
        },
        "t_connection": {
            "matrix": _render_grid(result.t_connection.matrix, ("t", "tau")),
            "warning": result.t_connection.warning,
        },
        "steps": dict(result.steps),
    }


@dataclass
class VerifyResult:
    divisor: DivisorData
    hessian: object
    b0: object
    timings: dict


def verify(
    p: LFDPresentation, max_monomials: int = DEFAULT_MAX_MONOMIALS
) -> VerifyResult:
    """Divisor-level checks only: Saito, weights, flags, Hessian, b0."""
    timings: dict = {}
    with _stage("divisor", timings):
        d = analyze_divisor(p, max_monomials=max_monomials)
    with _stage("hessian", timings):
        hess = hessian_identity_check(d)
    with _stage("b0", timings):
        b0 = b0_check(d)
    return VerifyResult(divisor=d, hessian=hess, b0=b0, timings=timings)


def build_verify_report(result: VerifyResult, input_echo: dict | None = None) -> dict:
    d = result.divisor
    echo = dict(input_echo or {})
    echo["presentation"] = presentation_to_json(d.presentation)
    dual = (
        capped_poly_text(d.h_dual)
        if d.h_dual is not None and not d.h_dual.is_zero()
        else None
    )
    return {
        "schema_version": SCHEMA_VERSION,
        "input": echo,
        "divisor": {
            "n": d.n,
            "name": d.presentation.name,
            "h": capped_poly_text(d.h),
            "h_dual": dual,
            "weights": [rat_str(w) for w in d.weights],
            "euler_index": d.euler_index,
            "special": d.special,
            "reductive": d.reductive,
        },
        "hessian": {
            "status": result.hessian.status,
            "constant": (
                rat_str(result.hessian.constant)
                if result.hessian.constant is not None
                else None
            ),
            "literal_match": result.hessian.literal_match,
            "route": result.hessian.route,
            "reason": result.hessian.reason,
        },
        "b0": {
            "status": result.b0.status,
            "constant": (
                rat_str(result.b0.constant)
                if result.b0.constant is not None
                else None
            ),
            "reason": result.b0.reason,
        },
    }
