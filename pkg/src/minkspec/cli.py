"""Command line entry point.

Exit codes: 0 success, 2 invalid input (parse or validation errors), 3
numerical failure inside the toolkit.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .analysis import analyze, as_spectral_form, verify
from .errors import IoError, MinkspecError, NumericalError
from .io import analysis_to_dict, emit_csv, emit_svg, load_problem
from .model import BorderedPencil
from .oracle import nu_curves
from .sweep import critical_a_values, eigenvalue_trajectories

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3


def _fmt_complex(z):
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.10g}"
    return f"{z.real:.10g} {'+' if z.imag > 0 else '-'} {abs(z.imag):.10g}i"


def _cmd_analyze(args, problem):
    out = analyze(problem)
    if args.json:
        return analysis_to_dict(out)
    lines = [f"case: {out.case_label}"]
    if out.case_label != out.reduced_case_label:
        lines.append(f"case of the observable part: {out.reduced_case_label}")
    lines.append(f"observable: {'yes' if out.observability.observable else 'no'}")
    lines.append("eigenvalues:")
    for r in out.records:
        extra = f" (x{r.algebraic_multiplicity}, Jordan block {r.jordan_block_size})" \
            if r.algebraic_multiplicity > 1 else ""
        tag = " [detached]" if r.detached else ""
        lines.append(f"  {_fmt_complex(r.value)}{extra}{tag}")
    lines.append("blocks:")
    for b in out.blocks:
        eps = "" if b.epsilon is None else f" epsilon={b.epsilon:+d}"
        lines.append(f"  type {b.block_type} size {b.size} at {_fmt_complex(b.eigenvalue)}{eps}")
    lines.append(f"signs: {out.sign_string()}")
    return "\n".join(lines)


def _cmd_critical(args, problem):
    values = critical_a_values(as_spectral_form(problem))
    if args.json:
        return [{"a_star": c.a_star, "tangency_point": c.tangency_point,
                 "interval_index": c.interval_index, "resulting_case": c.resulting_case}
                for c in values]
    lines = [f"{'a_star':>22} {'t':>22}  case"]
    lines += [f"{c.a_star:22.15g} {c.tangency_point:22.15g}  {c.resulting_case}" for c in values]
    return "\n".join(lines)


def _cmd_sweep(args, problem):
    form = as_spectral_form(problem)
    points = eigenvalue_trajectories(form, args.a_min, args.a_max, args.steps)
    if args.csv:
        emit_csv(points, args.csv)
    if args.svg:
        emit_svg(points, args.svg, poles=list(form.poles))
    labels = []
    for p in points:
        if not labels or labels[-1][0] != p.case_label:
            labels.append([p.case_label, p.a, p.a])
        labels[-1][2] = p.a
    if args.json:
        return {"samples": len(points),
                "segments": [{"case_label": c, "a_first": lo, "a_last": hi} for c, lo, hi in labels]}
    lines = [f"{len(points)} samples"]
    lines += [f"  {c:>4}  a in [{lo:.6g}, {hi:.6g}]" for c, lo, hi in labels]
    return "\n".join(lines)


def _cmd_nu(args, problem):
    pencil = problem if isinstance(problem, BorderedPencil) else problem.to_pencil()
    grid = np.linspace(args.center - args.window, args.center + args.window, args.samples)
    samples = nu_curves(pencil, grid)
    if args.csv:
        emit_csv(samples, args.csv)
    if args.svg:
        emit_svg(samples, args.svg, poles=list(as_spectral_form(problem).poles))
    if args.json:
        return {"lambda": [p.lam for p in samples], "nu": [list(map(float, p.nus)) for p in samples]}
    return f"{len(samples)} samples of {pencil.n} curves on [{grid[0]:.6g}, {grid[-1]:.6g}]"


def _cmd_verify(args, problem):
    report = verify(problem)
    if args.json:
        result = {"passed": report.passed,
                  "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                             for c in report.checks]}
    else:
        result = "\n".join(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}"
                           for c in report.checks)
    return result, report.passed


def build_parser():
    parser = argparse.ArgumentParser(
        prog="minkspec",
        description="Spectral structure of bordered matrices selfadjoint in an indefinite inner product.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="eigenvalues, case, signs and canonical blocks")
    p.add_argument("file")
    p = sub.add_parser("critical-a", help="shifts at which eigenvalues collide")
    p.add_argument("file")
    p = sub.add_parser("sweep", help="eigenvalue branches over a range of shifts")
    p.add_argument("file")
    p.add_argument("--a-min", type=float, required=True)
    p.add_argument("--a-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p = sub.add_parser("nu-curves", help="eigenvalues of lambda H - HA around a point")
    p.add_argument("file")
    p.add_argument("--center", type=float, required=True)
    p.add_argument("--window", type=float, required=True, help="half-width of the lambda range")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p = sub.add_parser("verify", help="cross-check the analysis against the oracles")
    p.add_argument("file")
    for p in sub.choices.values():
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                       help="machine-readable output")
    return parser


_COMMANDS = {"analyze": _cmd_analyze, "critical-a": _cmd_critical, "sweep": _cmd_sweep,
             "nu-curves": _cmd_nu}


def _emit(result, as_json):
    if as_json:
        print(json.dumps(result, indent=1))
    else:
        print(result)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        problem = load_problem(args.file)
        if args.command == "verify":
            result, passed = _cmd_verify(args, problem)
            _emit(result, args.json)
            return EXIT_OK if passed else EXIT_NUMERICAL
        _emit(_COMMANDS[args.command](args, problem), args.json)
        return EXIT_OK
    except NumericalError as exc:
        _report(exc, args.json)
        return EXIT_NUMERICAL
    except (MinkspecError, ValueError, IoError) as exc:
        _report(exc, args.json)
        return EXIT_INPUT


def _report(exc, as_json):
    message = f"{type(exc).__name__}: {exc}"
    if as_json:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
    print(f"minkspec: {message}", file=sys.stderr)


def run_cli(argv=None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
