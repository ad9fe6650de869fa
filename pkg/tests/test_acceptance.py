"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the lines as
they are produced); the summary is also printed at the end of the session.
Expensive sweeps are computed once per module and shared between criteria.
"""
import io
import json
import math
import time

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from inbox import cli
from inbox.barrier import SolverConfig, Termination, gamma_bound
from inbox.convexset import (
    ConvexSet,
    LinearIneq,
    QuadraticIneq,
    affine_image,
    area,
    ball,
    diameter,
    ellipse,
    from_polygon,
    hypercube,
    random_convex_polygon,
    regular_polygon,
    rotation,
    translate,
)
from inbox.geomcheck import check_axial_symmetry, check_central_symmetry, check_polygon_optimality, stretched_rhombus
from inbox.mair2d import Rectangle2D, aspect_ratio_bound, f_profile, mair_sweep
from inbox.mvair import build_mvair, solve_mvair
from inbox.oracle import GridSpec, brute_mair

from _data import DISK_JSON, seeded_polygons
from _oracles import slsqp_mvair

TWO_OVER_PI = 2 / math.pi


def _cli(argv):
    out = io.StringIO()
    code, _ = cli.run([str(a) for a in argv], out, io.StringIO())
    return code, out.getvalue()


def _without_timings(text):
    obj = json.loads(text)
    obj.pop("timings", None)
    return json.dumps(obj, sort_keys=True)


def _sweep_reports(samples):
    return [smp.report for smp in samples]


# ---------------------------------------------------------------------------
# shared work


@pytest.fixture(scope="module")
def disk_run(tmp_path_factory):
    path = tmp_path_factory.mktemp("acc") / "disk.json"
    path.write_text(json.dumps(DISK_JSON))
    t0 = time.perf_counter()
    code, text = _cli(["mair", path, "--eps", "0.01", "--threads", "1"])
    return {"path": path, "code": code, "text": text, "seconds": time.perf_counter() - t0}


@pytest.fixture(scope="module")
def ellipse_runs():
    out = {}
    for a, b in ((2.0, 1.0), (3.0, 0.5)):
        t0 = time.perf_counter()
        rect, samples = mair_sweep(ellipse(a, b), 0.01)
        out[(a, b)] = (rect, samples, time.perf_counter() - t0)
    return out


@pytest.fixture(scope="module")
def polygons():
    return seeded_polygons(50)


@pytest.fixture(scope="module")
def polygon_sweeps(polygons):
    return [mair_sweep(s, 0.05) for s in polygons]


def paraboloid(d):
    A = np.diag([1.0] * (d - 1) + [0.0])
    b = np.zeros(d)
    b[-1] = -0.5
    return ConvexSet(d, (LinearIneq(np.ones(d), 1.0), QuadraticIneq(A, b, 0.0)))


@pytest.fixture(scope="module")
def closed_form_solves():
    cases = [(f"hypercube d={d}", hypercube(d), 1.0, 1e-6) for d in range(2, 7)]
    cases.append(("unit disk", ball(2), 2.0, 1e-4))
    cases.append(("triangle", from_polygon([[0, 0], [1, 0], [0, 1]]), 0.25, 1e-3))
    out = []
    for label, s, expected, tol in cases:
        t0 = time.perf_counter()
        bx, rep = solve_mvair(s)
        out.append((label, bx, rep, expected, tol, time.perf_counter() - t0))
    return out


@pytest.fixture(scope="module")
def scaling_runs():
    out = []
    for n in (8, 32, 128, 512):
        _, rep = solve_mvair(regular_polygon(n), SolverConfig(mu="auto"))
        out.append((n, rep))
    return out


def _symmetric_polygon(rng):
    k = int(rng.integers(3, 7))
    pts = rng.normal(size=(k, 2)) * [2.0, 1.0]
    allp = np.vstack([pts, -pts])
    hull = ConvexHull(allp)
    return from_polygon(allp[hull.vertices])


# ---------------------------------------------------------------------------
# criteria


def test_criterion_01_circle_ratio(disk_run, verdict):
    obj = json.loads(disk_run["text"])
    ratio = obj["result"]["ratio"]
    ok = disk_run["code"] == 0 and abs(ratio - 0.63662) <= 0.01 and disk_run["seconds"] < 30
    verdict("1 circle ratio", ok, f"ratio={ratio:.6f}, {disk_run['seconds']:.1f}s")
    assert ok


def test_criterion_02_ellipse_ratio(ellipse_runs, verdict):
    details, ok = [], True
    for (a, b), (rect, _, sec) in ellipse_runs.items():
        ratio = rect.area / (math.pi * a * b)
        ok &= abs(ratio - TWO_OVER_PI) <= 0.01 and sec < 60
        details.append(f"({a:g},{b:g}) ratio={ratio:.6f} {sec:.1f}s")
    verdict("2 ellipse ratio", ok, "; ".join(details))
    assert ok


def test_criterion_03_half_area_guarantee(polygons, polygon_sweeps, verdict):
    eps = 0.05
    fails = [i for i, (s, (rect, _)) in enumerate(zip(polygons, polygon_sweeps)) if rect.area < (1 - eps) * area(s.polygon) / 2]
    worst = min(rect.area / area(s.polygon) for s, (rect, _) in zip(polygons, polygon_sweeps))
    ok = not fails
    verdict("3 half-area guarantee", ok, f"{len(fails)} failures of 50, min area ratio {worst:.4f}")
    assert ok


def test_criterion_04_oracle_bracket(polygons, polygon_sweeps, verdict):
    eps = 0.05
    fails = []
    lo, hi = math.inf, 0.0
    for i in range(25):
        rect = polygon_sweeps[i][0]
        oracle, _ = brute_mair(polygons[i], GridSpec(48, 48, 16))
        lo = min(lo, rect.area / oracle)
        hi = max(hi, oracle / rect.area)
        if rect.area < (1 - eps) * oracle or oracle > rect.area * (1 + eps):
            fails.append(i)
    ok = not fails
    verdict("4 oracle bracket", ok, f"{len(fails)} failures of 25, sweep/oracle >= {lo:.4f}, oracle/sweep <= {hi:.4f}")
    assert ok


def test_criterion_05_closed_form_volumes(closed_form_solves, verdict):
    bad = [label for label, bx, _, expected, tol, sec in closed_form_solves if abs(bx.volume - expected) > tol or sec >= 5]
    slowest = max(sec for *_, sec in closed_form_solves)
    ok = not bad
    verdict("5 box volumes on closed forms", ok, f"failing: {bad or 'none'}, slowest {slowest:.2f}s")
    assert ok


def test_criterion_06_paraboloid(verdict):
    s = paraboloid(3)
    groups = build_mvair(s).groups
    bx, rep = solve_mvair(s)
    worst = float(s.residuals(bx.corners()).max())
    ok = len(groups) == 2 and worst <= 1e-6 and rep.termination is Termination.CONVERGED
    verdict("6 paraboloid", ok, f"{len(groups)} constraint groups, worst corner residual {worst:.2e}")
    assert ok


def test_criterion_07_barrier_contract(disk_run, ellipse_runs, polygon_sweeps, closed_form_solves, scaling_runs, verdict):
    eps = SolverConfig().eps
    reports = [rep for *_, rep, _, _, _ in closed_form_solves]
    reports += [rep for _, rep in scaling_runs]
    for rect, samples, _ in ellipse_runs.values():
        reports += _sweep_reports(samples)
    for _, samples in polygon_sweeps:
        reports += _sweep_reports(samples)
    contract = all(r.gap <= eps for r in reports if r.termination is Termination.CONVERGED)
    disk_report = json.loads(disk_run["text"])["report"]
    contract &= disk_report["terminations"] == ["Converged"] and disk_report["max_gap"] <= eps

    worst = 0.0
    for s in seeded_polygons(10, base=7000):
        bx, rep = solve_mvair(s)
        bb = s.bbox
        ref, _, _ = slsqp_mvair(s, [(bx.xl, bx.xu), (bb.center - 0.05 * bb.widths, bb.center + 0.05 * bb.widths)])
        worst = max(worst, ref - rep.f0_star)
    ok = contract and worst <= 2 * eps
    verdict("7 barrier contract", ok, f"{len(reports) + 1} reports checked, worst f0 gap vs reference {worst:.2e}")
    assert ok


def test_criterion_08_iteration_scaling(scaling_runs, verdict):
    n = np.array([k for k, _ in scaling_runs], dtype=float)
    steps = np.array([rep.newton_steps for _, rep in scaling_runs], dtype=float)
    x = np.sqrt(n) * np.log(n)
    X = np.c_[np.ones_like(x), x]
    coef, *_ = np.linalg.lstsq(X, steps, rcond=None)
    resid = steps - X @ coef
    r2 = 1 - float(resid @ resid) / float(((steps - steps.mean()) ** 2).sum())
    # no faster than sqrt(n) log n: the step ratio stays below the model ratio
    growth_ok = steps[-1] / steps[0] <= x[-1] / x[0]
    ok = r2 >= 0.8 and coef[1] > 0 and growth_ok
    table = ", ".join(f"n={int(k)}: {int(v)}" for k, v in zip(n, steps))
    verdict("8 iteration scaling", ok, f"{table}; R^2={r2:.3f}")
    assert ok


def test_criterion_09_gamma(verdict):
    g = gamma_bound(0.2, 0.9)
    ok = 1 / (2 * g) < 142
    verdict("9 gamma constant", ok, f"1/(2 gamma) = {1 / (2 * g):.4f}")
    assert ok


def test_criterion_10_structure(disk_run, ellipse_runs, polygons, polygon_sweeps, verdict):
    poly_fail = [
        i
        for i, (s, (rect, _)) in enumerate(zip(polygons, polygon_sweeps))
        if not check_polygon_optimality(s.polygon, rect, 1e-3 * s.scale).ok
    ]

    # ten centrally symmetric sets: (set, centre, winner)
    disk_rect = Rectangle2D.from_json(json.loads(disk_run["text"])["result"]["rect"])
    sym = [(ball(2), np.zeros(2), disk_rect)]
    sym += [(ellipse(a, b), np.zeros(2), rect) for (a, b), (rect, _, _) in ellipse_runs.items()]
    extra = [affine_image(ellipse(2, 1), rotation(0.4)), regular_polygon(6, phase=0.2)]
    rng = np.random.default_rng(2024)
    centres = [np.zeros(2), np.zeros(2)]
    for _ in range(5):
        c = rng.uniform(-2, 2, 2)
        extra.append(translate(_symmetric_polygon(rng), c))
        centres.append(c)
    for s, c in zip(extra, centres):
        sym.append((s, c, mair_sweep(s, 0.05)[0]))
    sym_fail = [i for i, (s, c, rect) in enumerate(sym) if not check_central_symmetry(c, rect, 1e-3 * s.scale)]

    rhombus, square = stretched_rhombus(0.05)
    cond4 = check_axial_symmetry(([0, 0], [1, 0]), rhombus, square, 1e-9)[3]
    ok = not poly_fail and not sym_fail and len(sym) == 10 and cond4.passed and cond4.applicable
    verdict(
        "10 structure properties",
        ok,
        f"polygon violations {len(poly_fail)}/50, off-centre winners {len(sym_fail)}/10, rhombus condition 4 {cond4.passed}",
    )
    assert ok


def test_criterion_11_aspect_ratio_bound(polygons, polygon_sweeps, verdict):
    fails = []
    for i, (s, (rect, _)) in enumerate(zip(polygons, polygon_sweeps)):
        d, _ = diameter(s.polygon)
        if rect.aspect_ratio > 4 * d * d / area(s.polygon):
            fails.append(i)
    # the unit disk through a 512-gon, where the polygon bound applies
    disk_bound = aspect_ratio_bound(regular_polygon(512))
    ok = not fails and abs(disk_bound - 16 / math.pi) <= 1e-3
    verdict("11 aspect-ratio bound", ok, f"{len(fails)} failures of 50, disk bound {disk_bound:.6f} vs 16/pi {16 / math.pi:.6f}")
    assert ok


def test_criterion_12_profile_symmetry(verdict):
    worst = 0.0
    for k in range(10):
        s = random_convex_polygon(5 + 2 * k, 3000 + k)
        prof = f_profile(s, 5)
        f_lo, f_hi = prof[0][1], prof[-1][1]
        worst = max(worst, abs(f_lo - f_hi) / f_hi)
    ok = worst <= 1e-5
    verdict("12 profile symmetry", ok, f"worst |f(-1)-f(1)|/f(1) = {worst:.2e}")
    assert ok


def test_criterion_13_determinism(disk_run, verdict):
    code, text = _cli(["mair", disk_run["path"], "--eps", "0.01", "--threads", "4"])
    ok = code == 0 and _without_timings(text) == _without_timings(disk_run["text"])
    verdict("13 determinism across threads", ok, "byte-identical" if ok else "outputs differ")
    assert ok
