"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numeric-domain error.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time

from . import __version__
from .domain import HalfPlanePoint, mu_measure, parse_region
from .eisenstein import (
    TruncationPolicy,
    eisenstein_fourier_detail,
    eisenstein_lattice,
    phi,
    scattering_state,
)
from .errors import EisenQEError, NumericDomainError, ZeroTableError
from .measures import (
    LUO_SARNAK_CONSTANT,
    SigmaSchedule,
    limit_target,
    nu_measure,
    phi_log_derivative,
    quantum_measure,
    sweep,
)
from .numerics.quadrature import QuadratureSpec
from .zeros import bundled_zeros, load_zeros, scattering_poles

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument types


def complex_pair(text: str) -> complex:
    """Parse ``re,im`` (or a bare real) into a complex."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers in {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def point(text: str) -> HalfPlanePoint:
    z = complex_pair(text)
    if not z.imag > 0:
        raise argparse.ArgumentTypeError(f"z must lie in the upper half-plane (y > 0), got y = {z.imag:g}")
    return HalfPlanePoint(z.real, z.imag)


def real_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def region_arg(text: str):
    try:
        return parse_region(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def schedule_arg(text: str) -> SigmaSchedule:
    try:
        return SigmaSchedule.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{exc} (use const:SIGMA0, critical or approach:C,P)") from None


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text!r}")
    return v


# --------------------------------------------------------------------------
# output


def _cnum(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    return v


def _emit(args, records: list[dict], text_lines: list[str], as_list: bool = False):
    if args.format == "json":
        records = [_json_safe(r) for r in records]
        payload = json.dumps(records if as_list or len(records) != 1 else records[0], indent=2) + "\n"
    elif args.format == "csv":
        keys = list(records[0].keys()) if records else []
        rows = [",".join(keys)]
        for r in records:
            rows.append(",".join(_csv_cell(r[k]) for k in keys))
        payload = "\n".join(rows) + "\n"
    else:
        payload = "\n".join(text_lines) + "\n"
    _write(args, payload)


def _csv_cell(v) -> str:
    if isinstance(v, dict):
        return f"{v['re']!r}{'+' if v['im'] >= 0 else '-'}{abs(v['im'])!r}j"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write(args, payload: str):
    out = getattr(args, "out", None)
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _spec(args) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(digits=args.digits, n_cap=args.n_cap)


# --------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    z, s = args.z, args.s
    policy = _policy(args)
    records, lines = [], []
    fourier = lattice = None
    if args.method in ("fourier", "both"):
        ev = eisenstein_fourier_detail(z, s, policy)
        fourier = ev.value
        records.append({"method": "fourier", "value": _cnum(ev.value), "err_est": ev.err_est, "n_terms": ev.n_terms})
        lines.append(f"fourier  E = {ev.value!r}  err_est = {ev.err_est:.3e}  N = {ev.n_terms}")
    if args.method in ("lattice", "both"):
        lattice = eisenstein_lattice(z, s, c_max=args.c_max)
        records.append({"method": "lattice", "value": _cnum(lattice), "err_est": float("nan"), "n_terms": 0})
        lines.append(f"lattice  E = {lattice!r}")
    if fourier is not None and lattice is not None:
        rel = abs(fourier - lattice) / abs(lattice)
        lines.append(f"relative discrepancy = {rel:.3e}")
        for r in records:
            r["discrepancy"] = rel
    _emit(args, records, lines)
    return EXIT_OK


def cmd_phi(args) -> int:
    records, lines = [], []
    if args.s is not None:
        v = phi(args.s)
        records.append({"s": _cnum(args.s), "phi": _cnum(v.to_complex()), "log_mag": v.log_mag, "phase": v.phase})
        lines.append(f"phi({args.s!r}) = {v.to_complex()!r}  |phi| = {v.modulus!r}")
    if args.t is not None:
        d = phi_log_derivative(args.t, args.sigma, args.step)
        ratio = (d / (-4.0 * math.log(args.t))).real
        records.append({"t": args.t, "sigma": args.sigma, "log_derivative": _cnum(d), "ratio": ratio})
        lines.append(f"phi'/phi(sigma +- it) = {d.real!r}  ratio to -4 log t = {ratio!r}")
    if not records:
        raise UsageError("phi needs --s and/or --t")
    _emit(args, records, lines)
    return EXIT_OK


def cmd_measure(args) -> int:
    spec, policy = _spec(args), _policy(args)
    region, s = args.region, args.s
    if s is None:
        if args.kind != "target" or args.sigma_inf is None:
            raise UsageError(f"measure --kind {args.kind} needs --s")
        s = complex(2.0 * args.sigma_inf)
    area = mu_measure(region)
    if args.kind == "mu":
        value, err = quantum_measure(region, s, spec, policy)
        target = limit_target(region, s.real, spec, policy) if s.real > 0.5 else float("nan")
    elif args.kind == "nu":
        sig = args.sigma_inf if args.sigma_inf is not None else s.real
        value, err = nu_measure(region, s, sig, spec, policy)
        target = area
    elif args.kind == "target":
        sig = args.sigma_inf if args.sigma_inf is not None else s.real
        value, err = limit_target(region, sig, spec, policy), 0.0
        target = value
    else:  # luo_sarnak
        value, err = quantum_measure(region, s, spec, policy)
        target = area * LUO_SARNAK_CONSTANT * math.log(abs(s.imag))
    ratio = value / target if target else float("nan")
    rec = {"kind": args.kind, "s": _cnum(s), "region": region.label(), "value": value, "err_est": err,
           "mu_area": area, "target": target, "ratio": ratio}
    _emit(args, [rec], [f"{args.kind}: value = {value!r}  err_est = {err:.3e}  target = {target!r}  ratio = {ratio!r}"])
    return EXIT_OK


def _load_table(args):
    table = load_zeros(args.zeros) if args.zeros else bundled_zeros()
    count = args.count
    if count > len(table):
        raise UsageError(f"--count {count} exceeds the {len(table)} zeros in the table")
    return table


def _summary(result) -> str:
    lines = [f"{'mode':<11}{'region':<24}{'t':>12}{'sigma':>8}{'value':>14}{'target':>14}{'ratio':>10}"]
    for r in result.rows:
        lines.append(
            f"{r.mode:<11}{r.region[:23]:<24}{r.t:>12.5g}{r.sigma:>8.4g}{r.value:>14.7g}{r.target:>14.7g}{r.ratio:>10.5f}"
            + (f"  [{r.error}]" if r.error else "")
        )
    return "\n".join(lines)


def cmd_sweep(args) -> int:
    spec, policy = _spec(args), _policy(args)
    regions = args.region or [parse_region("0,0.5,1,2")]
    poles = None
    if args.mode == "scattering":
        table = _load_table(args).refine()
        poles = scattering_poles(table, args.count)
        schedule = None
    else:
        if not args.t:
            raise UsageError(f"mode {args.mode} needs --t")
        schedule = args.schedule or (SigmaSchedule("critical") if args.mode == "luo_sarnak"
                                     else SigmaSchedule("const", (0.75,)))
    try:
        result = sweep(schedule, args.t or [], regions, args.mode, spec, policy, poles, args.threads, args.timing)
    except ValueError as exc:
        if isinstance(exc, NumericDomainError):
            raise
        raise UsageError(str(exc)) from None
    payload = result.to_json() if args.format == "json" else result.to_csv()
    if args.format == "text":
        payload = _summary(result) + "\n"
    _write(args, payload)
    if args.out and args.out != "-":
        sys.stderr.write(_summary(result) + "\n")
    failed = [r for r in result.rows if r.error]
    return EXIT_DOMAIN if result.rows and len(failed) == len(result.rows) else EXIT_OK


def cmd_scatter(args) -> int:
    table = _load_table(args).refine()
    poles = scattering_poles(table, args.count)
    records, lines = [], []
    for n, rho in enumerate(poles, start=1):
        fast = scattering_state(args.z, rho, "fast")
        rec = {"n": n, "rho": _cnum(rho), "u_fast": _cnum(fast)}
        line = f"rho_{n} = {rho!r}  u(z) = {fast!r}"
        if args.contour:
            slow = scattering_state(args.z, rho, "contour")
            rel = abs(slow - fast) / abs(fast)
            rec.update({"u_contour": _cnum(slow), "discrepancy": rel})
            line += f"  contour = {slow!r}  rel diff = {rel:.2e}"
        records.append(rec)
        lines.append(line)
    _emit(args, records, lines, as_list=True)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    start = time.perf_counter()
    results = run_suite(args.suite, args.seed)
    elapsed = time.perf_counter() - start
    ok = all(r.passed for r in results)
    if args.format == "json":
        payload = json.dumps({"suite": args.suite, "seed": args.seed, "passed": ok,
                              "checks": [r.as_dict() for r in results]}, indent=2) + "\n"
    else:
        rows = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<28} residual={r.residual:.3e}  tol={r.tolerance:.1e}"
                for r in results]
        rows.append(f"{'all checks passed' if ok else 'verification FAILED'}")
        payload = "\n".join(rows) + "\n"
    _write(args, payload)
    if args.timing:
        sys.stderr.write(f"elapsed {elapsed:.1f} s\n")
    return EXIT_OK if ok else EXIT_VERIFY


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="eisenqe",
        description="Eisenstein series for PSL(2,Z), scattering states and quantum measures. "
        "Numeric flags accept 're,im' pairs, e.g. --z -0.3,1.2 --s 0.5,14.13.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="text"):
        sp.add_argument("--format", choices=("csv", "json", "text"), default=fmt_default,
                        help=f"output format (default {fmt_default})")
        sp.add_argument("--out", default="-", help="output file (default stdout)")
        sp.add_argument("--digits", type=positive_float, default=10.0,
                        help="Fourier truncation target, -log10 error (default 10)")
        sp.add_argument("--n-cap", type=positive_int, default=20000, help="hard cap on Fourier modes (default 20000)")
        sp.add_argument("--rel-tol", type=positive_float, default=1e-8, help="quadrature relative tolerance (default 1e-8)")
        sp.add_argument("--abs-tol", type=positive_float, default=1e-12, help="quadrature absolute tolerance (default 1e-12)")
        sp.add_argument("--timing", action="store_true", help="record wall-clock times (breaks byte reproducibility)")

    sp = sub.add_parser("eval", help="evaluate E(z, s)")
    sp.add_argument("--z", type=point, required=True, help="point x,y with y > 0")
    sp.add_argument("--s", type=complex_pair, required=True, help="spectral parameter re,im")
    sp.add_argument("--method", choices=("fourier", "lattice", "both"), default="fourier", help="(default fourier)")
    sp.add_argument("--c-max", type=positive_int, default=200, help="lattice coset bound (default 200)")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("phi", help="scattering matrix phi(s) and the phi'/phi diagnostic")
    sp.add_argument("--s", type=complex_pair, help="evaluate phi at re,im")
    sp.add_argument("--t", type=positive_float, help="height for phi'/phi(sigma +- it)")
    sp.add_argument("--sigma", type=float, default=0.5, help="sigma for the derivative (default 0.5)")
    sp.add_argument("--step", type=positive_float, default=1e-5, help="finite-difference step (default 1e-5)")
    common(sp)
    sp.set_defaults(func=cmd_phi)

    sp = sub.add_parser("measure", help="quantum measure of a region")
    sp.add_argument("--region", type=region_arg, required=True, help="x0,x1,y0,y1[;x0,x1,y0,y1...]")
    sp.add_argument("--s", type=complex_pair, help="spectral parameter re,im (not needed for target with --sigma-inf)")
    sp.add_argument("--kind", choices=("mu", "nu", "target", "luo_sarnak"), default="mu", help="(default mu)")
    sp.add_argument("--sigma-inf", type=float, help="sigma_inf for nu/target (default Re s)")
    common(sp)
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("sweep", help="convergence experiment over t and regions")
    sp.add_argument("--mode", choices=("mu", "nu", "luo_sarnak", "scattering"), required=True)
    sp.add_argument("--schedule", type=schedule_arg,
                    help="const:SIGMA0 | critical | approach:C,P (default const:0.75, critical for luo_sarnak)")
    sp.add_argument("--t", type=real_list, help="comma-separated increasing heights")
    sp.add_argument("--region", type=region_arg, action="append", help="region (repeatable; default 0,0.5,1,2)")
    sp.add_argument("--zeros", help="zero table file for scattering mode (default: bundled table)")
    sp.add_argument("--count", type=positive_int, default=3, help="number of zeros in scattering mode (default 3)")
    sp.add_argument("--threads", type=positive_int, default=1, help="worker threads (default 1)")
    common(sp, "csv")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("scatter", help="scattering states u_rho(z) at zeta zeros")
    sp.add_argument("--z", type=point, default=HalfPlanePoint(0.0, 1.0), help="point x,y (default 0,1)")
    sp.add_argument("--zeros", help="zero table file (default: bundled table)")
    sp.add_argument("--count", type=positive_int, default=3, help="number of zeros (default 3)")
    sp.add_argument("--contour", action="store_true", help="also compute the residue-contour path")
    common(sp)
    sp.set_defaults(func=cmd_scatter)

    sp = sub.add_parser("verify", help="run the identity verification suite")
    sp.add_argument("--suite", choices=("fast", "full"), default="fast", help="(default fast)")
    sp.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


_NUMERIC = re.compile(r"^-[0-9.]")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--flag -0.3,1`` as ``--flag=-0.3,1`` so argparse accepts it."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NUMERIC.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ZeroTableError, OSError) as exc:
        sys.stderr.write(f"eisenqe {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (EisenQEError, ArithmeticError) as exc:
        sys.stderr.write(f"eisenqe {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
