"""Command-line front end: proof replay and numerical stationarity checks.

Exit codes: 0 success, 1 a check failed (or a --tol bound was exceeded),
2 usage, input or runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__
from .geomnum import (
    CURVES,
    ProfileCurve,
    cylinder,
    energy,
    euler_curve_residual,
    euler_residual_literal,
    first_variation,
    plane,
    power_cosine_curve,
    random_smooth_field,
    residual_grid,
    rotational,
    shoot_rotational,
    sphere,
    variation_integral,
)
from .geomnum.io import PROFILE_HEADER, RESIDUAL_HEADER, csv_text, write_text_atomic
from .geomnum.surfaces import FD_STEP
from .proofscript import THEOREMS, ScriptError, render_report, run_theorem
from .symkernel import SymkernelError

JSON_SCHEMA = 1


class UsageError(ValueError):
    """Bad flag value or surface description."""


# -- surface mini-grammar -------------------------------------------------------------


def _vector(text: str, n: int = 3) -> tuple:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"bad number in {text!r}") from exc


def _number(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise UsageError(f"bad number {text!r}") from exc


def read_profile(path) -> ProfileCurve:
    """Read a profile CSV with header s,f,z,theta."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != PROFILE_HEADER:
            raise UsageError(f"{path}: expected header {','.join(PROFILE_HEADER)}")
        rows = [[float(x) for x in row] for row in reader if row]
    if len(rows) < 4:
        raise UsageError(f"{path}: a profile needs at least 4 samples")
    a = np.array(rows)
    return ProfileCurve(a[:, 0], a[:, 1], a[:, 2], a[:, 3])


def parse_surface(text: str):
    """Parse "plane n=a,b,c d=off", "sphere r=R center=x,y,z",
    "cylinder r=R axis=x,y,z dir=a,b,c" or "rotational file=path".

    Omitted keys default to the unit surface through or about the origin.
    """
    words = text.split()
    if not words:
        raise UsageError("empty surface description")
    kind, kv = words[0], {}
    for w in words[1:]:
        key, sep, val = w.partition("=")
        if not sep or not val:
            raise UsageError(f"expected key=value, got {w!r}")
        kv[key] = val
    allowed = {"plane": {"n", "d"}, "sphere": {"r", "center"}, "cylinder": {"r", "axis", "dir"},
               "rotational": {"file"}}
    if kind not in allowed:
        raise UsageError(f"unknown surface kind {kind!r}; choose from {', '.join(allowed)}")
    extra = set(kv) - allowed[kind]
    if extra:
        raise UsageError(f"unknown key(s) for {kind}: {', '.join(sorted(extra))}")
    if kind == "plane":
        return plane(_vector(kv.get("n", "0,0,1")), _number(kv.get("d", "0")))
    if kind == "sphere":
        return sphere(_number(kv.get("r", "1")), _vector(kv.get("center", "0,0,0")))
    if kind == "cylinder":
        d = np.array(_vector(kv.get("dir", "0,0,1")))
        norm = np.linalg.norm(d)
        if norm == 0:
            raise UsageError("axis direction must be nonzero")
        return cylinder(_number(kv.get("r", "1")), _vector(kv.get("axis", "0,0,0")), d / norm)
    if "file" not in kv:
        raise UsageError("rotational surfaces need file=path")
    prof = read_profile(kv["file"])
    # stay clear of the spline end intervals
    trim = 2 * float(prof.s[1] - prof.s[0])
    return rotational(prof, patch=((float(prof.s[0]) + trim, float(prof.s[-1]) - trim), (0.0, 2 * math.pi)))


# -- output -------------------------------------------------------------------------


def _emit(args, payload: dict, text: str, csv_body: str | None = None) -> None:
    """Write the chosen format to --out (atomically) or standard output."""
    if args.format == "json":
        body = json.dumps({"schema": JSON_SCHEMA, "command": args.command, **payload},
                          indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        if csv_body is None:
            raise UsageError(f"{args.command} has no CSV output")
        body = csv_body
    else:
        body = text if text.endswith("\n") else text + "\n"
    if args.out:
        write_text_atomic(args.out, body)
        if args.format != "text":
            print(text)
    else:
        sys.stdout.write(body)


def _fd_step(args) -> float:
    return FD_STEP if args.fd_step is None else args.fd_step


def _over(value: float, tol) -> bool:
    return tol is not None and not value <= tol


# -- subcommands ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.theorem not in THEOREMS:
        raise UsageError(f"unknown theorem {args.theorem!r}; choose from {', '.join(THEOREMS)}")
    reports = run_theorem(args.theorem, args.expected)
    fmt = "json" if args.format == "json" else "text"
    body = render_report(reports, format=fmt)
    counts = {}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    summary = f"{args.theorem}: " + ", ".join(f"{n} {s}" for s, n in sorted(counts.items()))
    if args.report:
        write_text_atomic(args.report, render_report(reports, format="json"))
    if args.out:
        write_text_atomic(args.out, body)
        print(summary)
    else:
        sys.stdout.write(body if body.endswith("\n") else body + "\n")
        if fmt == "text":
            print(summary)
    return 0 if all(r.status == "pass" for r in reports) else 1


def cmd_residual(args) -> int:
    s = parse_surface(args.surface)
    g = residual_grid(s, args.alpha, args.grid, _fd_step(args))
    mx, mn = g.max_abs(), g.min_abs()
    text = (f"{s.kind} alpha={args.alpha:g} grid={args.grid}: max |residual| = {mx:.3e}, "
            f"min |residual| = {mn:.3e}, skipped = {g.skipped}")
    payload = {"surface": args.surface, "alpha": args.alpha, "grid": args.grid,
               "max_abs_residual": mx, "min_abs_residual": mn, "skipped": g.skipped,
               "evaluated": len(g.rows)}
    body = csv_text(RESIDUAL_HEADER, g.rows)
    if args.format == "text" and args.out:
        # text mode with --out still writes the grid
        write_text_atomic(args.out, body)
        print(text)
    else:
        _emit(args, payload, text, body)
    return 1 if _over(mx, args.tol) else 0


def cmd_energy(args) -> int:
    s = parse_surface(args.surface)
    e = energy(s, args.alpha, n=args.quadrature_n, h=_fd_step(args))
    text = f"energy({s.kind}, alpha={args.alpha:g}, n={args.quadrature_n}) = {e:.17g}"
    _emit(args, {"surface": args.surface, "alpha": args.alpha, "quadrature_n": args.quadrature_n,
                 "energy": e}, text)
    return 0


def _bump(s):
    """A factor vanishing to second order on the non-periodic sides of the patch."""
    (a, b), (c, d) = s.patch
    periodic_u = s.kind == "cylinder"
    periodic_v = s.kind in ("sphere", "rotational")
    closed_u = s.kind == "sphere"

    def f(U, V):
        out = np.ones(np.broadcast(np.asarray(U), np.asarray(V)).shape)
        if not (periodic_u or closed_u):
            out = out * np.sin(np.pi * (np.asarray(U) - a) / (b - a)) ** 2
        if not periodic_v:
            out = out * np.sin(np.pi * (np.asarray(V) - c) / (d - c)) ** 2
        return out

    return f


def cmd_variation(args) -> int:
    s = parse_surface(args.surface)
    if args.field == "dilation":
        def phi(U, V):
            return np.ones(np.broadcast(np.asarray(U), np.asarray(V)).shape)
        fields = [phi]
    else:
        rng = np.random.default_rng(args.seed)
        bump = _bump(s)
        fields = []
        for _ in range(args.count):
            base = random_smooth_field(s, rng)
            fields.append(lambda U, V, base=base: base(U, V) * bump(U, V))
    values, by_residual = [], []
    for phi in fields:
        values.append(first_variation(s, args.alpha, phi, eps=args.eps, n=args.quadrature_n))
        if args.cross_check:
            by_residual.append(variation_integral(s, args.alpha, phi, n=args.quadrature_n))
    worst = max(abs(v) for v in values)
    lines = [f"first variation {s.kind} alpha={args.alpha:g} field={args.field}"]
    for i, v in enumerate(values):
        extra = f"  residual integral {by_residual[i]:.12g}" if by_residual else ""
        lines.append(f"  [{i}] {v:.12g}{extra}")
    lines.append(f"max |first variation| = {worst:.3e}")
    payload = {"surface": args.surface, "alpha": args.alpha, "field": args.field, "seed": args.seed,
               "eps": args.eps, "quadrature_n": args.quadrature_n, "values": values,
               "residual_integrals": by_residual, "max_abs": worst}
    _emit(args, payload, "\n".join(lines))
    return 1 if _over(worst, args.tol) else 0


def cmd_shoot(args) -> int:
    init = _vector(args.init)
    prof = shoot_rotational(args.alpha, init, args.arclen, args.ode_step)
    text = (f"shot alpha={args.alpha:g} from (f, z, theta) = {init} over s in [0, {args.arclen:g}] "
            f"with step {args.ode_step:g}: {len(prof.s)} samples, end (f, z) = "
            f"({prof.f[-1]:.12g}, {prof.z[-1]:.12g})")
    body = csv_text(PROFILE_HEADER, prof.rows())
    payload = {"alpha": args.alpha, "init": list(init), "arclen": args.arclen, "step": args.ode_step,
               "samples": len(prof.s), "end": [float(prof.f[-1]), float(prof.z[-1]), float(prof.theta[-1])]}
    if args.format == "text" and args.out:
        write_text_atomic(args.out, body)
        print(text)
    else:
        _emit(args, payload, text, body)
    return 0


def cmd_euler(args) -> int:
    curve = power_cosine_curve(args.curve_alpha) if args.curve == "power-cosine" else CURVES[args.curve]()
    lo, hi = curve.lo + args.margin, curve.hi - args.margin
    if not lo < hi:
        raise UsageError("margin leaves an empty interval")
    th = np.linspace(lo, hi, args.samples)
    res = euler_curve_residual(args.alpha, curve, th)
    mx = float(np.max(np.abs(res)))
    lines = [f"euler {curve.name} alpha={args.alpha:g} theta in [{lo:.6g}, {hi:.6g}]: "
             f"max |residual| (arc-length reading) = {mx:.3e}"]
    payload = {"curve": curve.name, "alpha": args.alpha, "theta_range": [lo, hi], "samples": args.samples,
               "max_abs_residual": mx}
    if args.both_readings:
        # the literal integrand's expression is singular where r' changes sign
        keep = np.abs(curve.dr(th)) > 1e-6
        lit = float(np.max(np.abs(euler_residual_literal(args.alpha, curve, th[keep]))))
        lines.append(f"max |residual| (literal reading) = {lit:.3e}")
        payload["max_abs_residual_literal"] = lit
    rows = [(t, r) for t, r in zip(th.tolist(), res.tolist())]
    _emit(args, payload, "\n".join(lines), csv_text(("theta", "residual"), rows))
    return 1 if _over(mx, args.tol) else 0


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text", help="output format")
    common.add_argument("--out", default=None, help="output path, written atomically")
    common.add_argument("--seed", type=int, default=0, help="seed for random perturbation fields")
    common.add_argument("--quadrature-n", type=int, default=32, help="Gauss-Legendre nodes per axis")
    common.add_argument("--fd-step", type=float, default=None,
                        help=f"relative finite-difference step (default {FD_STEP:g})")
    common.add_argument("--ode-step", type=float, default=1e-4, help="fixed RK4 step for shooting")

    p = argparse.ArgumentParser(prog="momentsurf", formatter_class=fmt,
                                description="Proof replay and numerical checks for stationary surfaces "
                                            "of the energy integral of |Phi|^alpha.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], formatter_class=fmt, help="replay a shipped proof script")
    v.add_argument("--theorem", required=True, help=f"one of {', '.join(THEOREMS)}")
    v.add_argument("--expected", default=None, help="alternative expected-values script (JSON)")
    v.add_argument("--report", default=None, help="also write the JSON report here")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("residual", parents=[common], formatter_class=fmt, help="residual grid over a surface")
    r.add_argument("--surface", required=True, help='e.g. "sphere r=1 center=0,0,0"')
    r.add_argument("--alpha", type=float, required=True)
    r.add_argument("--grid", type=int, default=64, help="cells per chart axis")
    r.add_argument("--tol", type=float, default=None, help="exit 1 if max |residual| exceeds this")
    r.set_defaults(func=cmd_residual)

    e = sub.add_parser("energy", parents=[common], formatter_class=fmt, help="energy by quadrature")
    e.add_argument("--surface", required=True)
    e.add_argument("--alpha", type=float, required=True)
    e.set_defaults(func=cmd_energy)

    va = sub.add_parser("variation", parents=[common], formatter_class=fmt, help="first variation")
    va.add_argument("--surface", required=True)
    va.add_argument("--alpha", type=float, required=True)
    va.add_argument("--field", choices=("random", "dilation"), default="random")
    va.add_argument("--count", type=int, default=10, help="number of random fields")
    va.add_argument("--eps", type=float, default=1e-4)
    va.add_argument("--cross-check", action="store_true", help="also integrate the residual against each field")
    va.add_argument("--tol", type=float, default=None, help="exit 1 if any |first variation| exceeds this")
    va.set_defaults(func=cmd_variation)

    s = sub.add_parser("shoot", parents=[common], formatter_class=fmt, help="shoot a rotational profile")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--init", required=True, help="f0,z0,theta0")
    s.add_argument("--arclen", type=float, required=True)
    s.set_defaults(func=cmd_shoot)

    eu = sub.add_parser("euler", parents=[common], formatter_class=fmt, help="planar Euler-extremal residual")
    eu.add_argument("--alpha", type=float, required=True)
    eu.add_argument("--curve", choices=tuple(CURVES) + ("power-cosine",), required=True)
    eu.add_argument("--curve-alpha", type=float, default=1.0, help="exponent selecting the power-cosine curve")
    eu.add_argument("--margin", type=float, default=0.05, help="distance kept from the interval ends")
    eu.add_argument("--samples", type=int, default=2001)
    eu.add_argument("--both-readings", action="store_true", help="also report the literal-integrand residual")
    eu.add_argument("--tol", type=float, default=None, help="exit 1 if max |residual| exceeds this")
    eu.set_defaults(func=cmd_euler)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ScriptError, SymkernelError, OSError, ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"momentsurf {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
