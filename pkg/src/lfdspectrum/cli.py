"""Command line front end.

Four subcommands: analyze runs the full pipeline on one divisor and
section, verify runs the divisor-level checks only, regress replays the
built-in expectation table, catalog lists the built-in families.  JSON
output is schema-versioned and byte-identical across runs for the same
input; timings appear only in the plain-text tables.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from time import perf_counter

from . import regress as regress_mod
from .catalog import canonical_f, family, random_finite_f
from .divisor import (
    DEFAULT_MAX_MONOMIALS,
    analyze_divisor,
    presentation_from_json,
)
from .errors import EXIT_INPUT, EXIT_OK, BadPresentation, LfdError, exit_code_for
from .pipeline import analyze, build_report, build_verify_report, verify
from .poly import emit
from .sections import section_from_json


def _read_json_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise BadPresentation(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadPresentation(f"{path} is not valid JSON: {exc}") from exc


def _load_presentation(args, cap: int):
    if args.family and args.input:
        raise BadPresentation("pass either --family or --input, not both")
    if args.family:
        return family(args.family, max_monomials=cap, validate=False), {
            "family": args.family
        }
    if args.input:
        data = _read_json_file(args.input)
        return presentation_from_json(data), {"input_file": args.input}
    raise BadPresentation("one of --family or --input is required")


def _resolve_section(fspec: str, d, family_id):
    if fspec == "canonical":
        if family_id is None:
            raise BadPresentation(
                "canonical sections exist only for named families; "
                "pass --f random:SEED or --f FILE"
            )
        f = canonical_f(family_id)
        if f is None:
            raise BadPresentation(
                f"no canonical section for {family_id}; "
                "pass --f random:SEED or --f FILE"
            )
        return f, {"f": "canonical"}
    if fspec.startswith("random:"):
        try:
            seed = int(fspec.split(":", 1)[1])
        except ValueError as exc:
            raise BadPresentation(f"bad seed in {fspec!r}") from exc
        seeded = random_finite_f(d, seed)
        return seeded.section, {"f": fspec, "attempts": seeded.attempts}
    data = _read_json_file(fspec)
    return section_from_json(data, d.n), {"f": "file", "f_path": fspec}


def _write_json(payload: dict, out: str) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _rows(pairs) -> str:
    return "\n".join(f"{key:<22}{value}" for key, value in pairs)


def _shorten(text: str, width: int = 110) -> str:
    return text if len(text) <= width else text[: width - 4] + " ..."


def _poly_cell(info: dict | None) -> str:
    if info is None:
        return "0 (vanishes identically)"
    return _shorten(info["text"]) + f"  [{info['terms']} terms]"


def _timing_cell(timings: dict) -> str:
    return " | ".join(f"{k} {v:.2f}s" for k, v in timings.items())


def cmd_analyze(args) -> int:
    cap = args.max_monomials
    p, echo = _load_presentation(args, cap)
    start = perf_counter()
    d = analyze_divisor(p, max_monomials=cap)
    divisor_time = perf_counter() - start
    f, fecho = _resolve_section(args.f, d, args.family)
    echo.update(fecho)
    echo["max_monomials"] = cap
    res = analyze(d, f, max_monomials=cap)
    res.timings["divisor"] = divisor_time
    rep = build_report(res, echo)
    spec = rep["spectrum"]
    conj = rep["conjectures"]
    pairs = [
        ("divisor", f"{rep['divisor']['name'] or '(unnamed)'}  n = {rep['divisor']['n']}"),
        ("h", _poly_cell(rep["divisor"]["h"])),
        ("h_dual", _poly_cell(rep["divisor"]["h_dual"])),
        ("special / reductive", f"{rep['divisor']['special']} / {rep['divisor']['reductive']}"),
        ("f", emit(res.section.poly())),
        ("L_f direction", f"{rep['finiteness']['lf_direction']}  h there = {rep['finiteness']['h_on_line']}"),
        ("c-vector", ", ".join(rep["connection"]["c"]) + f"  (t scale {rep['connection']['t_scale']})"),
        ("nu1", ", ".join(spec["nu1"])),
        ("nu2 (t = 0)", ", ".join(spec["nu2"])),
        ("nu3 (generic t)", ", ".join(spec["nu3"]) + f"  k = {spec['k']}"),
        ("spectrum t0", ", ".join(spec["spectrum_t0"])),
        ("spectrum generic", ", ".join(spec["spectrum_generic"])),
        ("jordan blocks", f"t0 {rep['monodromy']['t0']['jordan_blocks']} / generic {rep['monodromy']['generic']['jordan_blocks']}"),
        ("residues", ", ".join(rep["residues"])),
        ("symmetries", f"extra={conj['extra_symmetry']} t0={conj['t0_symmetry']} residues={conj['residues_symmetric']}"),
        ("min_mult / flat", f"{conj['min_mult']} / {conj['flat_indices']}"),
        ("primitive candidates", str(rep["frobenius"]["primitive_candidates"])),
        ("steps", " ".join(f"{k}={v}" for k, v in rep["steps"].items())),
        ("timing", _timing_cell(res.timings)),
    ]
    if rep["t_connection"]["warning"]:
        pairs.append(("warning", rep["t_connection"]["warning"]))
    print(_rows(pairs))
    if args.json:
        _write_json(rep, args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    cap = args.max_monomials
    p, echo = _load_presentation(args, cap)
    echo["max_monomials"] = cap
    result = verify(p, max_monomials=cap)
    rep = build_verify_report(result, echo)
    hess = rep["hessian"]
    b0 = rep["b0"]
    pairs = [
        ("divisor", f"{rep['divisor']['name'] or '(unnamed)'}  n = {rep['divisor']['n']}"),
        ("h", _poly_cell(rep["divisor"]["h"])),
        ("h_dual", _poly_cell(rep["divisor"]["h_dual"])),
        ("weights", ", ".join(rep["divisor"]["weights"]) + f"  (euler index {rep['divisor']['euler_index']})"),
        ("special", str(rep["divisor"]["special"])),
        ("reductive", rep["divisor"]["reductive"]),
        ("hessian identity", _check_cell(hess["status"], hess["constant"], hess["route"] or hess["reason"])),
        ("b0 identity", _check_cell(b0["status"], b0["constant"], b0["reason"])),
        ("timing", _timing_cell(result.timings)),
    ]
    print(_rows(pairs))
    if args.json:
        _write_json(rep, args.json)
    return EXIT_OK


def _check_cell(status: str, constant, detail: str) -> str:
    base = status
    if constant is not None:
        base += f" (constant {constant}"
        base += f", {detail})" if detail else ")"
    elif detail:
        base += f" ({detail})"
    return base


def cmd_regress(args) -> int:
    results = regress_mod.run_regress(
        only=args.only, extended=args.extended, cap_floor=args.max_monomials
    )
    if not results:
        print(f"no regression rows match {args.only!r}")
        return EXIT_INPUT
    failed = 0
    for r in results:
        status = "pass" if r.ok else "FAIL"
        if not r.ok:
            failed += 1
        print(f"{r.row.row_id:<14}{status:<6}{r.elapsed:>8.1f}s")
        if r.error:
            print(f"{'':14}{r.error}")
        for name, ok, got, want in r.checks:
            if not ok:
                print(f"{'':14}{name}: got {got}, want {want}")
        if r.info:
            support = " ".join(
                f"{k}={'yes' if v else 'no'}" for k, v in sorted(r.info.items())
            )
            print(f"{'':14}supported: {support}")
    print(f"{len(results) - failed} passed, {failed} failed")
    if args.json:
        payload = {
            "schema_version": 1,
            "rows": [
                {
                    "row_id": r.row.row_id,
                    "ok": r.ok,
                    "error": r.error,
                    "checks": [list(c) for c in r.checks],
                    "info": r.info,
                }
                for r in results
            ],
        }
        _write_json(payload, args.json)
    return EXIT_OK if failed == 0 else 1


def cmd_catalog(args) -> int:
    lines = [
        ("nc:N", "normal crossing divisor, n = N, canonical f = sum of coordinates"),
        ("star:M", "star quiver with M arms (M >= 2), n = M(M-1); canonical f at M = 3"),
        ("dynkinD:M", "type D quiver (M >= 4), n = 4M-10; star:3 equals dynkinD:4"),
        ("e6", "type E6 quiver, n = 22; construction and verify only"),
        ("sym:K", "symmetric K x K matrices under GL(K), n = K(K+1)/2; canonical f at K = 2"),
    ]
    print(_rows(lines))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfdspectrum",
        description="Exact spectra of linear sections of linear free divisors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_flags(sp):
        sp.add_argument("--family", help="catalog family, e.g. nc:4 or sym:3")
        sp.add_argument("--input", help="JSON file with a divisor presentation")
        sp.add_argument(
            "--max-monomials",
            type=int,
            default=DEFAULT_MAX_MONOMIALS,
            help="refuse determinant expansions above this many monomials",
        )
        sp.add_argument("--json", help="write the JSON report here ('-' for stdout)")

    sp = sub.add_parser("analyze", help="run the full pipeline")
    add_input_flags(sp)
    sp.add_argument(
        "--f",
        default="canonical",
        help="section: 'canonical', 'random:SEED', or a JSON file",
    )
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("verify", help="divisor-level checks only")
    add_input_flags(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("regress", help="replay the built-in expectation table")
    sp.add_argument("--only", help="run only rows whose id contains this text")
    sp.add_argument(
        "--extended",
        action="store_true",
        help="include the large extended rows (minutes to an hour)",
    )
    sp.add_argument(
        "--max-monomials",
        type=int,
        default=None,
        help="raise every row's monomial cap to at least this",
    )
    sp.add_argument("--json", help="write machine-readable results here")
    sp.set_defaults(func=cmd_regress)

    sp = sub.add_parser("catalog", help="list the built-in families")
    sp.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LfdError as exc:
        stage = getattr(exc, "stage", None)
        where = f" [{stage}]" if stage else ""
        print(f"error{where} {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except BrokenPipeError:
        # reader went away mid-stream (e.g. piped into head); not an error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
