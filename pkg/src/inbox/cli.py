"""Command-line front end.

Every subcommand prints one RunResult JSON object on stdout::

    {"command": ..., "input_digest": ..., "report": ..., "result": ..., "timings": ...}

Keys are sorted and floats carry 12 significant digits, so identical inputs
and flags give identical output apart from ``timings``.  Options that only
affect how the work is executed (``--threads``, ``--svg``, ``--verbose``) are
not echoed in ``command``.

Exit codes: 0 success, 1 verdict violation, 2 input error, 3 solver failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
import time
import warnings

import numpy as np

from . import svg
from .barrier import SolverConfig, Termination
from .convexset import QuadraticIneq, area as polygon_area, load_set
from .errors import CapabilityError, ConditioningError, InboxError, InfeasibleError, InputError, UnboundedError
from .geomcheck import check_axial_symmetry, check_central_symmetry, central_offset, check_polygon_optimality
from .mair2d import Rectangle2D, aspect_ratio_bound, f_profile, maair_direction, mair_sweep
from .mvair import solve_mvair
from .oracle import GridSpec, brute_maair, brute_mair, monte_carlo_area

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3
DIGITS = 12

log = logging.getLogger("inbox")


class SolverFailure(InboxError):
    """A solve finished without converging."""


# ---------------------------------------------------------------------------
# output helpers


def _clean(obj):
    """Round floats to 12 significant digits; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        v = float(f"{v:.{DIGITS}g}")
        return 0.0 if v == 0 else v
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def render(run: dict) -> str:
    return json.dumps(_clean(run), sort_keys=True, allow_nan=False)


def input_digest(s) -> str:
    canon = json.dumps(_clean(s.to_json()), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode()).hexdigest()


def set_volume(s):
    """Exact volume when it has a closed form (polygons, one ellipsoid), else None."""
    if s.polygon is not None:
        return polygon_area(s.polygon)
    if s.n == 1 and isinstance(s.ineqs[0], QuadraticIneq):
        q = s.ineqs[0]
        w = np.linalg.eigvalsh(q.A)
        if w[0] <= 0:
            return None
        r2 = float(q.b @ np.linalg.solve(q.A, q.b) - q.c)
        if r2 <= 0:
            return None
        d = s.dim
        unit = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
        return unit * r2 ** (d / 2) / math.sqrt(float(np.prod(w)))
    return None


def _report_dict(rep):
    return rep.to_dict() if rep is not None else None


def _require_converged(rep):
    if rep is not None and rep.termination is not Termination.CONVERGED:
        raise SolverFailure(f"barrier solve stopped: {rep.termination.value}")


class _Clock:
    def __init__(self):
        self.ms = {}

    def __call__(self, name):
        clock = self

        class _Phase:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                clock.ms[name] = clock.ms.get(name, 0.0) + 1e3 * (time.perf_counter() - self.t0)

        return _Phase()


def _config(args) -> SolverConfig:
    mu = args.mu
    if mu != "auto":
        try:
            mu = float(mu)
        except ValueError:
            raise InputError(f"--mu: expected a number or 'auto', got {args.mu!r}") from None
    kw = {"tau0": args.tau0, "mu": mu}
    if getattr(args, "gap", None) is not None:
        kw["eps"] = args.gap
    return SolverConfig(**kw)


def _echo(args, **extra):
    out = {"name": args.cmd, "input": args.input, "tau0": args.tau0, "mu": args.mu}
    if getattr(args, "gap", None) is not None:
        out["gap"] = args.gap
    out.update(extra)
    return out


def _check_2d(s, what):
    if s.dim != 2:
        raise InputError(f"{what} needs a 2-D set, got dimension {s.dim}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_mvair(args, clock):
    with clock("parse"):
        s = load_set(args.input)
    cfg = SolverConfig(tau0=args.tau0, mu=_config(args).mu, eps=args.eps)
    with clock("solve"):
        box, rep = solve_mvair(s, cfg)
    result = box.to_json()
    vol = set_volume(s)
    if vol is not None:
        result["set_volume"] = vol
        result["ratio"] = box.volume / vol
    if args.svg:
        _check_2d(s, "--svg")
        with clock("svg"):
            c = box.corners()
            svg.write(args.svg, svg.set_figure(s, c[[0, 1, 3, 2]], "axis-aligned box"))
    _require_converged(rep)
    run = {"command": _echo(args, eps=args.eps), "input_digest": input_digest(s), "result": result, "report": _report_dict(rep)}
    return run, EXIT_OK


def _profile(s, k, cfg, threads, clock, svg_path=None):
    with clock("profile"):
        prof = f_profile(s, k, cfg, threads)
    if svg_path:
        svg.write(svg_path, svg.profile_figure(prof, "f(t)"))
    return [{"t": t, "area": a} for t, a in prof]


def cmd_mair(args, clock):
    with clock("parse"):
        s = load_set(args.input)
    _check_2d(s, "mair")
    cfg = _config(args)
    extra = {"eps": args.eps}
    vol = set_volume(s)
    if args.direction is not None:
        extra["direction"] = args.direction
        with clock("solve"):
            smp = maair_direction(s, args.direction, cfg)
        rect, report = smp.rect, _report_dict(smp.report)
        _require_converged(smp.report)
    else:
        extra["refine"] = not args.no_refine
        with clock("bound"):
            rho = aspect_ratio_bound(s)
        with clock("solve"):
            rect, samples = mair_sweep(s, args.eps, cfg, threads=args.threads, rho=rho, refine=not args.no_refine)
        for smp in samples:
            _require_converged(smp.report)
        best = max(samples, key=lambda smp: smp.area)
        report = {
            "directions": len(samples),
            "rho_bound": rho,
            "newton_steps": int(sum(smp.report.newton_steps for smp in samples)),
            "terminations": sorted({smp.report.termination.value for smp in samples}),
            "best_sample_area": best.area,
            "max_gap": max(smp.report.gap for smp in samples),
        }
    result = {"rect": rect.to_json(), "area": rect.area, "aspect_ratio": rect.aspect_ratio}
    if vol is not None:
        result["set_area"] = vol
        result["ratio"] = rect.area / vol
    if args.profile:
        extra["profile"] = args.profile
        path = None
        if args.svg:
            path = args.svg[:-4] + "-profile.svg" if args.svg.endswith(".svg") else args.svg + "-profile.svg"
        result["profile"] = _profile(s, args.profile, cfg, args.threads, clock, path)
    if args.svg:
        with clock("svg"):
            svg.write(args.svg, svg.set_figure(s, rect.corners(), "inscribed rectangle"))
    run = {"command": _echo(args, **extra), "input_digest": input_digest(s), "result": result, "report": report}
    return run, EXIT_OK


def cmd_maair(args, clock):
    with clock("parse"):
        s = load_set(args.input)
    _check_2d(s, "maair")
    with clock("solve"):
        smp = maair_direction(s, args.direction, _config(args))
    _require_converged(smp.report)
    result = {"rect": smp.rect.to_json(), "area": smp.area, "t": smp.t, "theta": smp.theta}
    if args.svg:
        with clock("svg"):
            svg.write(args.svg, svg.set_figure(s, smp.rect.corners(), f"rectangle with slope {args.direction}"))
    run = {
        "command": _echo(args, direction=args.direction),
        "input_digest": input_digest(s),
        "result": result,
        "report": _report_dict(smp.report),
    }
    return run, EXIT_OK


def cmd_profile(args, clock):
    with clock("parse"):
        s = load_set(args.input)
    _check_2d(s, "profile")
    k = args.profile
    table = _profile(s, k, _config(args), args.threads, clock, args.svg)
    areas = [row["area"] for row in table]
    result = {
        "profile": table,
        "endpoint_gap": abs(areas[0] - areas[-1]),
        "max_area": max(areas),
    }
    run = {"command": _echo(args, profile=k), "input_digest": input_digest(s), "result": result, "report": None}
    return run, EXIT_OK


def _load_rect(path):
    with open(path) as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    # accept the output of `inbox mair` / `inbox maair` directly
    if isinstance(obj, dict) and isinstance(obj.get("result"), dict):
        obj = obj["result"]
    return Rectangle2D.from_json(obj)


def cmd_check(args, clock):
    with clock("parse"):
        s = load_set(args.input)
        rect = _load_rect(args.rect)
    _check_2d(s, "check")
    tol = args.tol * s.scale
    result = {}
    ok = True
    with clock("check"):
        if s.polygon is not None:
            v = check_polygon_optimality(s.polygon, rect, tol)
            result["polygon"] = v.to_json()
            ok &= v.ok
        if args.center is not None:
            passed = check_central_symmetry(args.center, rect, tol)
            result["central"] = {"passed": passed, "offset": central_offset(args.center, rect)}
            ok &= passed
        if args.axis is not None:
            p, d = args.axis[:2], args.axis[2:]
            verdicts = check_axial_symmetry((p, d), s, rect, tol)
            result["axial"] = [c.to_json() for c in verdicts]
            ok &= all(c.passed for c in verdicts)
    if not result:
        raise InputError("nothing to check: the set is not a polygon and neither --axis nor --center was given")
    result["ok"] = bool(ok)
    extra = {"rect": args.rect, "tol": args.tol, "axis": args.axis, "center": args.center}
    run = {"command": _echo(args, **extra), "input_digest": input_digest(s), "result": result, "report": None}
    return run, EXIT_OK if ok else EXIT_VIOLATION


def cmd_oracle(args, clock):
    with clock("parse"):
        s = load_set(args.input)
    grid = GridSpec(args.grid, args.grid, args.angles)
    result = {}
    extra = {"grid": args.grid, "angles": args.angles, "samples": args.samples, "seed": args.seed}
    if s.dim == 2:
        with clock("rectangle"):
            if args.direction is not None:
                extra["direction"] = args.direction
                a, rect = brute_maair(s, args.direction, grid)
            else:
                a, rect = brute_mair(s, grid)
        result["area"] = a
        result["rect"] = rect.to_json() if rect is not None else None
        if args.svg and rect is not None:
            svg.write(args.svg, svg.set_figure(s, rect.corners(), "grid oracle"))
    if args.samples:
        with clock("monte_carlo"):
            est, se = monte_carlo_area(s, args.samples, args.seed)
        result["monte_carlo"] = {"estimate": est, "stderr": se}
    run = {"command": _echo(args, **extra), "input_digest": input_digest(s), "result": result, "report": None}
    return run, EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="set description (JSON)")
    common.add_argument("--tau0", type=float, default=1.0, help="initial barrier parameter")
    common.add_argument("--mu", default="10", help="barrier increase factor, or 'auto' for 1 + 1/sqrt(n)")
    common.add_argument("--svg", metavar="PATH", help="write an SVG figure (2-D sets only)")
    common.add_argument("--threads", type=_positive_int, default=1, help="worker threads for direction sweeps")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--verbose", "-v", action="store_true", help="log solver progress to stderr")

    p = argparse.ArgumentParser(prog="inbox", description="Largest inscribed boxes and rectangles in convex sets.")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("mvair", parents=[common], help="largest axis-aligned box")
    sp.add_argument("--eps", type=float, default=1e-8, help="duality-gap target")
    sp.set_defaults(func=cmd_mvair, gap=None)

    sp = sub.add_parser("mair", parents=[common], help="largest rectangle of any orientation")
    sp.add_argument("--eps", type=float, default=0.01, help="relative accuracy of the direction sweep")
    sp.add_argument("--gap", type=float, default=None, help="duality-gap target of each barrier solve")
    sp.add_argument("--direction", type=float, default=None, metavar="T", help="solve only slope T in [-1, 1]")
    sp.add_argument("--profile", type=_positive_int, default=None, metavar="K", help="also tabulate f(t) at K slopes")
    sp.add_argument("--no-refine", action="store_true", help="skip the local angle search after the sweep")
    sp.set_defaults(func=cmd_mair)

    sp = sub.add_parser("maair", parents=[common], help="largest rectangle with a fixed slope")
    sp.add_argument("--direction", type=float, required=True, metavar="T", help="slope in [-1, 1]")
    sp.add_argument("--eps", dest="gap", type=float, default=None, help="duality-gap target")
    sp.set_defaults(func=cmd_maair)

    sp = sub.add_parser("profile", parents=[common], help="f(t) = best area at slope t")
    sp.add_argument("--profile", type=_positive_int, default=101, metavar="K", help="number of slopes")
    sp.add_argument("--eps", dest="gap", type=float, default=None, help="duality-gap target")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("check", parents=[common], help="necessary optimality conditions for a rectangle")
    sp.add_argument("rect", help="rectangle JSON ({x, u, v} or a mair/maair result)")
    sp.add_argument("--axis", type=float, nargs=4, metavar=("PX", "PY", "DX", "DY"), help="symmetry axis")
    sp.add_argument("--center", type=float, nargs=2, metavar=("CX", "CY"), help="centre of symmetry")
    sp.add_argument("--tol", type=float, default=1e-6, help="tolerance relative to the set scale")
    sp.set_defaults(func=cmd_check, gap=None)

    sp = sub.add_parser("oracle", parents=[common], help="brute-force baselines")
    sp.add_argument("--direction", type=float, default=None, metavar="T", help="fix the slope")
    sp.add_argument("--grid", type=_positive_int, default=64, help="anchor and size steps")
    sp.add_argument("--angles", type=_positive_int, default=64, help="angle steps")
    sp.add_argument("--samples", type=int, default=0, help="Monte-Carlo samples for the area (0: skip)")
    sp.set_defaults(func=cmd_oracle, gap=None)
    return p


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns ``(exit code, RunResult dict or None)``."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_INPUT if exc.code else EXIT_OK), None
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=stderr, format="%(name)s: %(message)s")
    clock = _Clock()
    t0 = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            out, code = args.func(args, clock)
    except (InputError, OSError) as exc:
        print(f"inbox: input error: {exc}", file=stderr)
        return EXIT_INPUT, None
    except (SolverFailure, ConditioningError, UnboundedError, InfeasibleError, CapabilityError) as exc:
        print(f"inbox: solver failure ({type(exc).__name__}): {exc}", file=stderr)
        return EXIT_SOLVER, None
    clock.ms["total"] = 1e3 * (time.perf_counter() - t0)
    out["timings"] = clock.ms
    print(render(out), file=stdout)
    return code, out


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
