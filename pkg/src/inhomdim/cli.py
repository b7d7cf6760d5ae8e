"""Command-line front end.

Exit codes: 0 success, 1 a verification suite failed, 2 invalid input.
"""

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import bounds, cre, verify
from .condensation import (MethodSchedule, OscillationParams, profile_from_schedule,
                           realize_cubeset, schedule_oscillating, schedule_sparse,
                           window_trigger_holds)
from .cubes import DEFAULT_WINDOW, CoveringProfile, DyadicCubeSet, dim_estimates, profile_of
from .ifs import IFS, similarity_dimension
from .orbital import build_orbital, to_pgm, to_svg
from .svg import line_chart
from .validation import check_window

EDGE_SNAP = 1e-9


def parse_t_grid(spec: str) -> np.ndarray:
    """'lo:hi:step' with both ends included, then snapped inward by 1e-9."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"t-grid must look like lo:hi:step, got {spec!r}")
    lo, hi, step = (float(p) for p in parts)
    if not (step > 0 and lo < hi):
        raise ValueError(f"t-grid needs lo < hi and step > 0, got {spec!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = lo + step * np.arange(n)
    return np.clip(grid, lo + EDGE_SNAP, hi - EDGE_SNAP)


def parse_range(spec: str) -> tuple:
    parts = spec.split(":")
    if len(parts) != 2:
        raise ValueError(f"range must look like lo:hi, got {spec!r}")
    lo, hi = float(parts[0]), float(parts[1])
    if not lo < hi:
        raise ValueError(f"range needs lo < hi, got {spec!r}")
    return lo, hi


def parse_window(spec: str) -> tuple:
    return check_window(parse_range(spec))


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _load_profile(path, d):
    """Profile CSV (needs d), cube-set file, or schedule file with sidecar."""
    if os.path.exists(str(path) + ".json"):
        return profile_from_schedule(MethodSchedule.load(path))
    with open(path) as fh:
        text = fh.read()
    if text.startswith("k,"):
        if d is None:
            raise ValueError("reading a profile CSV needs --d")
        return CoveringProfile.loads(text, d)
    return profile_of(DyadicCubeSet.loads(text))


# commands ---------------------------------------------------------------

def cmd_simdim(args):
    s = similarity_dimension(IFS.load(args.ifs), tol=args.tol)
    print(f"s = {s:.12f}")
    return 0


def cmd_schedule(args):
    params = OscillationParams(args.d, Fraction(args.b), Fraction(args.B), args.depth)
    if args.kind == "oscillating":
        sched = schedule_oscillating(params)
    else:
        windows = [int(w) for w in args.windows.split(",")] if args.windows else None
        sched = schedule_sparse(params, windows)
    sched.save(args.out)
    prof = profile_from_schedule(sched)
    if args.profile:
        prof.save(args.profile)
    lo, hi = dim_estimates(prof)
    print(f"depth = {sched.depth}  switches = {len(sched.switches)}  "
          f"dim_estimates = ({lo:.6f}, {hi:.6f})")
    if args.kind == "sparse":
        for k0 in sched.windows:
            ok = window_trigger_holds(sched, params.b, k0)
            print(f"window k0 = {k0}: trigger {'holds' if ok else 'FAILS'}")
    return 0


def cmd_realize(args):
    sched = MethodSchedule.load(args.schedule)
    cubes = realize_cubeset(sched, args.rule, args.seed)
    cubes.save(args.out)
    print(f"{len(cubes.level(cubes.depth))} cubes at level {cubes.depth}")
    return 0


def cmd_profile(args):
    prof = _load_profile(args.input, args.d)
    if args.out:
        prof.save(args.out)
    lo, hi = dim_estimates(prof, parse_window(args.window))
    print(f"dim_estimates = ({lo:.6f}, {hi:.6f})")
    return 0


def cmd_cre(args):
    prof = _load_profile(args.profile, args.d)
    curves = cre.cre_curve(prof, parse_t_grid(args.t_grid), parse_window(args.window))
    text = cre.curves_to_csv(curves)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _bounds_source(args):
    if args.analytic:
        d, b, B = args.analytic
        return bounds.AnalyticSource(int(d), b, B)
    if args.profile:
        return bounds.ProfileSource(_load_profile(args.profile, args.d), parse_window(args.window))
    lo, hi = args.zero
    return _ZeroSource(lo, hi)


class _ZeroSource:
    """p_t = 0 everywhere: the degenerate source."""

    def __init__(self, lo, hi):
        self.dims = (lo, hi)

    def p(self, t):
        return 0.0


def bounds_svg(report) -> str:
    t = report.t_grid
    series = [
        {"x": t, "y": report.L, "label": "L(t)"},
        {"x": t, "y": report.U, "label": "U(t)"},
        {"x": t, "y": [report.trivial[0]] * len(t), "label": "trivial lower", "dashed": True},
        {"x": t, "y": [report.trivial[1]] * len(t), "label": "trivial upper", "dashed": True},
    ]
    return line_chart(series, title=f"bounds for s = {report.s:g}", xlabel="t",
                      ylabel="dimension bound")


def cmd_bounds(args):
    source = _bounds_source(args)
    cosc = {"yes": True, "no": False, "unknown": None}[args.cosc]
    t_range = parse_range(args.t_range) if args.t_range else None
    report = bounds.best_bounds(args.s, source, t_range, args.grid, sosc=not args.no_sosc,
                                cosc=cosc)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.out:
        _write(args.out, text)
    if args.svg:
        _write(args.svg, bounds_svg(report))
    inf = "absent" if report.infU is None else f"{report.infU:.6f}"
    print(f"supL = {report.supL:.6f}  infU = {inf}  "
          f"trivial = [{report.trivial[0]:.6f}, {report.trivial[1]:.6f}]")
    return 0


def cmd_orbital(args):
    system = IFS.load(args.ifs)
    cond = DyadicCubeSet.load(args.condensation)
    orb = build_orbital(system, cond, args.K)
    if args.out:
        orb.cubes.save(args.out)
    if args.pgm:
        with open(args.pgm, "wb") as fh:
            fh.write(to_pgm(orb.cubes))
    lo, hi = dim_estimates(profile_of(orb.cubes), parse_window(args.window))
    print(f"words = {orb.words_used}  cubes = {len(orb.cubes.level(args.K))}  "
          f"dim_estimates = ({lo:.6f}, {hi:.6f})")
    if args.svg:
        _write(args.svg, to_svg(orb.cubes))
    return 0


def cmd_verify(args):
    checks = verify.run_suite(args.suite)
    for c in checks:
        print(c.line())
    ok = all(c.passed for c in checks)
    print(f"{args.suite}: {'PASS' if ok else 'FAIL'} ({sum(c.passed for c in checks)}/{len(checks)})")
    return 0 if ok else 1


def cmd_plot(args):
    if args.kind == "profile":
        prof = _load_profile(args.input, args.d)
        k = np.arange(1, prof.depth + 1)
        step = max(1, len(k) // 2000)
        k = k[::step]
        y = (np.asarray(prof.logM, dtype=float)[k] / k).tolist()
        svg = line_chart([{"x": k.tolist(), "y": y, "label": "log2 M / k"}],
                         title="covering profile", xlabel="k", ylabel="log2 M / k")
    else:
        with open(args.input) as fh:
            rows = [ln.split(",") for ln in fh.read().splitlines()[1:] if ln.strip()]
        if not rows:
            raise ValueError("CRE CSV has no rows")
        t = [float(r[0]) for r in rows]
        p = [float(r[1]) for r in rows]
        svg = line_chart([{"x": t, "y": p, "label": "p_t"}], title="covering regularity exponent",
                         xlabel="t", ylabel="p_t")
    _write(args.out, svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="inhomdim", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    window = dict(default=f"{DEFAULT_WINDOW[0]}:{DEFAULT_WINDOW[1]}",
                  help="window fractions a:b of the depth (default %(default)s)")

    p = sub.add_parser("simdim", help="similarity dimension of an IFS JSON file")
    p.add_argument("ifs")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_simdim)

    p = sub.add_parser("schedule", help="build a Method-1/Method-2 schedule")
    p.add_argument("--kind", choices=["oscillating", "sparse"], required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--b", required=True, help="lower target, e.g. 1, 0.5 or 1/2")
    p.add_argument("--B", required=True, help="upper target")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--windows", help="comma-separated window start levels (sparse only)")
    p.add_argument("--out", required=True, help="schedule file; sidecar goes to OUT.json")
    p.add_argument("--profile", help="also write the covering profile CSV")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("realize", help="materialize the cube set of a schedule")
    p.add_argument("schedule")
    p.add_argument("--rule", choices=["lexicographic", "seeded"], default="lexicographic")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("profile", help="covering profile of a cube set or schedule")
    p.add_argument("input")
    p.add_argument("--d", type=int)
    p.add_argument("--out")
    p.add_argument("--window", **window)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("cre", help="discrete CRE curves on a t-grid")
    p.add_argument("profile")
    p.add_argument("--d", type=int)
    p.add_argument("--t-grid", required=True, help="lo:hi:step")
    p.add_argument("--window", **window)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cre)

    p = sub.add_parser("bounds", help="best lower/upper dimension bounds")
    p.add_argument("--s", type=float, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--analytic", type=float, nargs=3, metavar=("D", "b", "B"))
    src.add_argument("--profile")
    src.add_argument("--zero", type=float, nargs=2, metavar=("LOWER_C", "UPPER_C"),
                     help="p_t = 0 source with the given box dimensions of C")
    p.add_argument("--d", type=int)
    p.add_argument("--window", **window)
    p.add_argument("--t-range", help="lo:hi (default: lower:upper box dimension of C)")
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--no-sosc", action="store_true")
    p.add_argument("--cosc", choices=["yes", "no", "unknown"], default="unknown")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("orbital", help="truncated orbital set of an IFS and condensation")
    p.add_argument("ifs")
    p.add_argument("condensation", help="cube-set file")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--window", default="0.25:1.0")
    p.add_argument("--out")
    p.add_argument("--pgm")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_orbital)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=sorted(verify.SUITES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="SVG of a profile or a CRE CSV")
    p.add_argument("kind", choices=["profile", "cre"])
    p.add_argument("input")
    p.add_argument("--d", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
