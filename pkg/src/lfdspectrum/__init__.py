"""Exact spectra of linear sections of linear free divisors.

The package computes, in exact rational arithmetic, the spectrum and
monodromy of a generic linear form on the Milnor fibre of a linear free
divisor, via the Gauss-Manin connection on the Brieskorn lattice and an
explicit solution of the attached Birkhoff problem.

Typical use:

    from lfdspectrum import analyze, build_report, canonical_f, family
    report = build_report(analyze(family("star:3"), canonical_f("star:3")))
"""

from .catalog import canonical_f, family, random_finite_f
from .divisor import LFDPresentation, analyze_divisor, presentation_from_json
from .pipeline import analyze, build_report, build_verify_report, verify
from .sections import LinearSection

__version__ = "0.1.0"

__all__ = [
    "LFDPresentation",
    "LinearSection",
    "analyze",
    "analyze_divisor",
    "build_report",
    "build_verify_report",
    "canonical_f",
    "family",
    "presentation_from_json",
    "random_finite_f",
    "verify",
    "__version__",
]
