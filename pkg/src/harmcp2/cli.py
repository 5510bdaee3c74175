"""Command-line front end: every subcommand prints one JSON report.

Exit status is 0 when every record passes, 1 when a check fails and 2
when an input cannot be parsed.  A one-line human summary and the wall
time go to standard error, so standard output is reproducible byte for
byte.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .algebra import AlgebraError
from .curves import CurveError, HoloCurve, affine_form, make_curve
from .deform import IntegrationError, integrate_holo_field
from .gauss import g_curve, gauss_prime_rep
from . import checks
from .grid import GridError
from .io import (
    ParseError,
    bipoly_to_json,
    curve_from_json,
    curve_to_json,
    family_to_json,
    field_from_json,
    load_json,
    resolve_data_file,
)
from .pipeline import PipelineError, coefficient_directions
from .report import RunReport, digest
from .sampled import TRANSFORMS, SamplingError

__all__ = ["main", "run", "THREADS_ENV"]

THREADS_ENV = "HARMCP2_THREADS"
NULLITY_CAVEAT = (
    "rank of explicitly constructed Jacobi fields: a lower bound for the nullity, "
    "certified maximal by the spectral gap of the Gram matrix, not by an eigensolve"
)


class UsageError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _load_curve(report: RunReport, name: str) -> tuple[HoloCurve, Path]:
    path = resolve_data_file(name)
    raw = curve_from_json(load_json(path))
    try:
        curve = make_curve(raw)
    except (CurveError, AlgebraError) as exc:
        raise ParseError(f"{name}: {exc}") from exc
    report.inputs[Path(name).name] = digest(path)
    return curve, path


def _expected_sidecar(path: Path) -> Optional[dict]:
    side = path.with_name(path.stem + ".expected.json")
    return load_json(side) if side.exists() else None


def _require_full(report: RunReport, curve: HoloCurve) -> bool:
    if not curve.full:
        report.add("curve is full", False, False, target=True, tolerance=0)
    return curve.full


# --- subcommands ---

def cmd_curve_info(args, report: RunReport) -> None:
    curve, path = _load_curve(report, args.curve)
    info = checks.check_invariants(report, "curve", curve, _expected_sidecar(path))
    report.payload = {"curve": curve_to_json(curve.F), "invariants": info}


def cmd_gauss_transform(args, report: RunReport) -> None:
    curve, _ = _load_curve(report, args.curve)
    if not _require_full(report, curve):
        return
    phi, g = gauss_prime_rep(curve), g_curve(curve)
    report.payload = {
        "phi": [bipoly_to_json(c) for c in phi],
        "g": [bipoly_to_json(c) for c in g],
    }
    checks.check_invariants(report, "curve", curve)


def cmd_gauss_verify(args, report: RunReport) -> None:
    curve, _ = _load_curve(report, args.curve)
    if not _require_full(report, curve):
        return
    checks.check_identities(report, "identity", curve, workers=_threads())


def _grid_meta(report: RunReport, N: int, extra: Optional[dict] = None) -> None:
    report.grid = {"N": N, "charts": ["z", "w=1/z"], "fd_order": 4, **(extra or {})}


def _numeric_setup(args, report: RunReport) -> Optional[HoloCurve]:
    curve, _ = _load_curve(report, args.curve)
    if args.transform == "gauss-prime" and not _require_full(report, curve):
        return None
    _grid_meta(report, args.grid)
    return curve


def cmd_energy(args, report: RunReport) -> None:
    curve = _numeric_setup(args, report)
    if curve is not None:
        rtol = checks.ENERGY_RTOL if args.tol is None else args.tol
        report.payload = checks.check_energy_degree(report, args.transform, curve, args.transform, args.grid,
                                                    ("energy",), energy_rtol=rtol)


def cmd_degree(args, report: RunReport) -> None:
    curve = _numeric_setup(args, report)
    if curve is not None:
        atol = checks.DEGREE_ATOL if args.tol is None else args.tol
        report.payload = checks.check_energy_degree(report, args.transform, curve, args.transform, args.grid,
                                                    ("degree",), degree_atol=atol)


def cmd_tension(args, report: RunReport) -> None:
    curve = _numeric_setup(args, report)
    if curve is not None:
        r1, r2 = checks.check_tension(report, args.transform, curve, args.transform, args.grid, args.tol)
        report.grid["refined_N"] = 2 * args.grid
        report.payload = {"residual": r1, "refined_residual": r2}


def cmd_integrate(args, report: RunReport) -> None:
    curve, _ = _load_curve(report, args.curve)
    fpath = resolve_data_file(args.field)
    report.inputs[Path(args.field).name] = digest(fpath)
    try:
        dens = [Q for _, Q in affine_form(curve)]
    except CurveError as exc:
        raise ParseError(str(exc)) from exc
    v = field_from_json(load_json(fpath), dens)
    fam = integrate_holo_field(curve, v)
    ok = fam.matches(v)
    report.add("t-derivative at 0 equals the field", {"exact-zero": ok}, ok, target={"exact-zero": True}, tolerance=0)
    report.payload = {"family": family_to_json(fam)}


def cmd_nullity(args, report: RunReport) -> None:
    curve = _numeric_setup(args, report)
    if curve is None:
        return
    if args.transform == "gauss-prime" and curve.r != 0:
        report.add("curve is unramified (r = 0)", curve.r, False, target=0, tolerance=0)
        return
    report.payload = checks.check_nullity(report, args.transform, curve, args.transform, args.grid, args.tol)
    report.caveats.append(NULLITY_CAVEAT)


def _direction_name(curve: HoloCurve, choice: str) -> str:
    names = [n for n, _ in coefficient_directions(curve.F)]
    if choice in names:
        return choice
    try:
        return names[int(choice)]
    except (ValueError, IndexError):
        raise UsageError(f"--direction must be an index 0..{len(names) - 1} or one of {names}")


def cmd_roundtrip(args, report: RunReport) -> None:
    curve, _ = _load_curve(report, args.curve)
    if not _require_full(report, curve):
        return
    name = _direction_name(curve, args.direction)
    N2 = 2 * ((3 * args.grid + 3) // 4)
    _grid_meta(report, args.grid, {"refined_N": N2})
    tol = checks.ROUNDTRIP_TOL if args.tol is None else args.tol
    try:
        report.payload = checks.check_roundtrip(report, "roundtrip", curve, [name], args.grid, N2, tol)
    except PipelineError as exc:
        report.add("round trip admissible", str(exc), False)


def cmd_selftest(args, report: RunReport) -> None:
    """Acceptance checks on the built-in examples at resolutions N and 2N."""
    N, N2 = args.grid, 2 * args.grid
    _grid_meta(report, N, {"refined_N": N2})
    ver, _ = _load_curve(report, "veronese.json")
    cub, _ = _load_curve(report, "cubic_r1.json")
    line, _ = _load_curve(report, "line.json")
    workers = _threads()
    for label, c, path in (("veronese", ver, "veronese.json"), ("cubic_r1", cub, "cubic_r1.json")):
        checks.check_identities(report, f"{label} identity", c, workers=workers)
        checks.check_invariants(report, label, c, _expected_sidecar(resolve_data_file(path)))
    checks.check_invariants(report, "line", line, _expected_sidecar(resolve_data_file("line.json")))
    checks.check_energy_degree(report, "line", line, "none", N)
    checks.check_energy_degree(report, "veronese gauss", ver, "gauss-prime", N)
    checks.check_tension(report, "veronese gauss", ver, "gauss-prime", N)
    checks.check_integrator_random(report)
    checks.check_jacobi_generation(report, "veronese gauss", ver, N, N2)
    checks.check_nullity(report, "line", line, "none", N)
    checks.check_nullity(report, "veronese gauss", ver, "gauss-prime", N)
    report.caveats.append(NULLITY_CAVEAT)
    checks.check_roundtrip(report, "veronese", ver, ["F1[z^1]", "i*F2[z^0]", "F0[z^2]"], N, N2)
    checks.check_isotropy_variation(report, "veronese gauss", ver, "F1[z^1]", N, N2)


# --- argument parsing ---

def _add_numeric(p: argparse.ArgumentParser, transform_default: str = "gauss-prime") -> None:
    p.add_argument("curve", help="curve JSON file (or a built-in name such as veronese.json)")
    p.add_argument("--transform", choices=TRANSFORMS, default=transform_default)
    p.add_argument("--grid", type=int, default=32, metavar="N", help="cells per chart side (default 32)")
    p.add_argument("--tol", type=float, default=None, metavar="T", help="override the calibrated tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmcp2", description="Harmonic maps S^2 -> CP^2 from rational curves.")
    parser.add_argument("--format", choices=["json"], default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("curve", help="holomorphic curve utilities")
    csub = curve.add_subparsers(dest="action", required=True)
    info = csub.add_parser("info", help="degree, ramification, fullness and derived invariants")
    info.add_argument("curve")
    info.set_defaults(func=cmd_curve_info)

    gauss = sub.add_parser("gauss", help="Gauss transform of a full curve")
    gsub = gauss.add_subparsers(dest="action", required=True)
    tr = gsub.add_parser("transform", help="emit phi and g representatives")
    tr.add_argument("curve")
    tr.set_defaults(func=cmd_gauss_transform)
    ver = gsub.add_parser("verify", help="exact identity checks of the triple (f, phi, g)")
    ver.add_argument("curve")
    ver.set_defaults(func=cmd_gauss_verify)

    for name, func, helptext in (
        ("energy", cmd_energy, "Fubini-Study energy against 4 pi E"),
        ("degree", cmd_degree, "degree (E' - E'')/4 pi against its exact value"),
        ("tension", cmd_tension, "tension residual at N and 2N"),
        ("nullity", cmd_nullity, "rank of the coefficient Jacobi fields"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_numeric(p)
        p.set_defaults(func=func)

    integ = sub.add_parser("integrate", help="integrate a rational holomorphic field to a family")
    integ.add_argument("curve")
    integ.add_argument("field", help='JSON {"numerators": [R1, R2], "denominators": [Q1, Q2]}')
    integ.set_defaults(func=cmd_integrate)

    rt = sub.add_parser("roundtrip", help="push, pull, integrate and push again")
    rt.add_argument("curve")
    rt.add_argument("--direction", default="0", help="coefficient direction index or name")
    rt.add_argument("--grid", type=int, default=64, metavar="N")
    rt.add_argument("--tol", type=float, default=None, metavar="T")
    rt.set_defaults(func=cmd_roundtrip)

    st = sub.add_parser("selftest", help="acceptance checks on the built-in examples")
    st.add_argument("--grid", type=int, default=32, metavar="N")
    st.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Sequence[str]) -> tuple[int, RunReport]:
    """Execute one command; returns (exit code, report)."""
    argv = list(argv)
    report = RunReport(command=argv)
    args = build_parser().parse_args(argv)
    try:
        args.func(args, report)
    except (ParseError, UsageError, GridError) as exc:
        report.error = str(exc)
        return 2, report
    except (CurveError, IntegrationError, PipelineError, SamplingError, AlgebraError) as exc:
        report.error = str(exc)
        return 1, report
    return (0 if report.passed else 1), report


def main(argv: Optional[Sequence[str]] = None) -> int:
    start = time.perf_counter()
    code, report = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(report.dumps())
    sys.stdout.flush()
    failed = report.failures()
    status = {0: "PASS", 1: "FAIL", 2: "INPUT ERROR"}[code]
    summary = f"harmcp2: {status}: {len(report.records) - len(failed)}/{len(report.records)} checks passed"
    if report.error:
        summary += f"; {report.error}"
    for rec in failed[:5]:
        summary += f"\n  failed: {rec.name} = {rec.value!r} (target {rec.target!r})"
    print(f"{summary}\n  wall time {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
