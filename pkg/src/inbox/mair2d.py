"""Largest inscribed rectangles in planar convex sets.

For a fixed slope ``t = tan(theta)`` the rectangle has corners x, x+u, x+v,
x+u+v with ``u = u1 (1, t)`` and ``v = v2 (-t, 1)``.  After substituting those
equalities the free variables are ``w = (u1, v2, x1, x2)``, every inequality
of the set is written at each of the four corners (linear rows stay linear,
quadratic rows stay quadratic) and the objective is ``log u1 + log v2``.  The
rectangle area is ``(1 + t^2) u1 v2``.

The best rectangle over all orientations is approximated by solving the
fixed-direction problem at the midpoints of equal angular pieces of
[-pi/4, pi/4]; the piece width is chosen from an upper bound on the optimal
aspect ratio so that the best sample is within a factor (1 - eps).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .barrier import (
    BarrierProblem,
    LinearConstraints,
    LogSumObjective,
    QuadraticConstraints,
    SolverConfig,
    SolverReport,
    path_follow,
)
from .convexset import (
    LinearIneq,
    Polygon2D,
    area as polygon_area,
    as_set,
    diameter,
    support_point,
)
from .errors import CapabilityError, InfeasibleError, InputError
from .mvair import initial_feasible

RHO_MAX = 1e6


@dataclass(frozen=True, eq=False)
class Rectangle2D:
    """Rectangle with anchor ``x`` and orthogonal edges ``u``, ``v``."""

    x: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for name in ("x", "u", "v"):
            a = np.array(getattr(self, name), dtype=float).reshape(-1)
            if a.shape != (2,):
                raise InputError(f"rectangle field {name} must be a 2-vector")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        nu, nv = np.linalg.norm(self.u), np.linalg.norm(self.v)
        if nu == 0 or nv == 0:
            raise InputError("rectangle edges must be nonzero")
        if abs(float(self.u @ self.v)) > 1e-9 * nu * nv:
            raise InputError("rectangle edges are not orthogonal")

    @property
    def area(self):
        return abs(float(self.u[0] * self.v[1] - self.u[1] * self.v[0]))

    @property
    def center(self):
        return self.x + 0.5 * (self.u + self.v)

    @property
    def sides(self):
        return float(np.linalg.norm(self.u)), float(np.linalg.norm(self.v))

    @property
    def aspect_ratio(self):
        a, b = self.sides
        return max(a, b) / min(a, b)

    @property
    def angle(self):
        return math.atan2(self.u[1], self.u[0])

    def corners(self):
        """Corners in boundary order x, x+u, x+u+v, x+v."""
        return np.array([self.x, self.x + self.u, self.x + self.u + self.v, self.x + self.v])

    def to_json(self):
        return {
            "x": self.x.tolist(),
            "u": self.u.tolist(),
            "v": self.v.tolist(),
            "area": self.area,
            "theta": self.angle,
        }

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise InputError("rectangle: expected a JSON object")
        if "rect" in obj and isinstance(obj["rect"], dict):
            obj = obj["rect"]
        for key in ("x", "u", "v"):
            if key not in obj:
                raise InputError(f"rectangle: missing key '{key}'")
        return cls(obj["x"], obj["u"], obj["v"])


@dataclass(frozen=True, eq=False)
class DirectionSample:
    t: float
    theta: float
    area: float
    rect: Rectangle2D
    psi: float = math.nan
    report: SolverReport | None = field(default=None, repr=False)

    def to_json(self):
        return {"t": self.t, "theta": self.theta, "area": self.area}


# ---------------------------------------------------------------------------
# fixed direction


def corner_maps(t):
    """Maps w = (u1, v2, x1, x2) to the corners x, x+u, x+v, x+u+v."""
    return np.array(
        [
            [[0, 0, 1, 0], [0, 0, 0, 1]],
            [[1, 0, 1, 0], [t, 0, 0, 1]],
            [[0, -t, 1, 0], [0, 1, 0, 1]],
            [[1, -t, 1, 0], [t, 1, 0, 1]],
        ],
        dtype=float,
    )


def build_qt(set_, t) -> BarrierProblem:
    """Fixed-direction model in w = (u1, v2, x1, x2) with 4n barrier rows."""
    s = as_set(set_)
    if s.dim != 2:
        raise InputError("fixed-direction rectangles need a 2-D set")
    t = float(t)
    if not abs(t) <= 1.0:
        raise InputError(f"slope t={t} lies outside [-1, 1]")
    maps = corner_maps(t)
    lin_A, lin_b = [], []
    Qs, qs, rs = [], [], []
    for ineq in s.ineqs:
        for M in maps:
            if isinstance(ineq, LinearIneq):
                lin_A.append(ineq.p @ M)
                lin_b.append(ineq.b)
            else:
                Qs.append(M.T @ ineq.A @ M)
                qs.append(2.0 * M.T @ ineq.b)
                rs.append(ineq.c)
    blocks = []
    if lin_A:
        blocks.append(LinearConstraints(np.array(lin_A), np.array(lin_b)))
    if Qs:
        blocks.append(QuadraticConstraints(np.array(Qs), np.array(qs), np.array(rs)))
    obj = LogSumObjective(np.array([[1.0, 0, 0, 0], [0, 1.0, 0, 0]]))
    return BarrierProblem(4, obj, tuple(blocks), meta={"t": t})


def rect_from_w(w, t):
    u1, v2, x1, x2 = w
    return Rectangle2D([x1, x2], [u1, t * u1], [-t * v2, v2])


@dataclass(frozen=True)
class _Seed:
    """Inscribed disk used to start every fixed-direction solve."""

    center: np.ndarray
    radius: float


def _seed(s):
    x0, _ = initial_feasible(s)
    xu, xl = x0[:2], x0[2:4]
    return _Seed(0.5 * (xu + xl), 0.5 * float(np.min(xu - xl)))


def start_point(seed: _Seed, t):
    """Square of circumradius r/2 centred in the seed disk, turned to slope t."""
    side = seed.radius / math.sqrt(2.0)
    u1 = v2 = side / math.sqrt(1.0 + t * t)
    x = seed.center - 0.5 * np.array([u1 - t * v2, t * u1 + v2])
    return np.array([u1, v2, x[0], x[1]])


def _solve_direction(s, t, cfg, seed):
    prob = build_qt(s, t)
    w0 = start_point(seed, t)
    if not prob.is_strictly_feasible(w0):
        # cannot happen for a seed disk inside the set; guards bad seeds
        raise InfeasibleError(f"start rectangle for t={t} is not strictly inside the set")
    rep = path_follow(prob, w0, cfg)
    rect = rect_from_w(rep.x_star, t)
    area = rect.area
    psi = rep.f0_star
    assert abs((1 + t * t) * math.exp(psi) - area) <= 1e-9 * area
    return DirectionSample(t, math.atan(t), area, rect, psi, rep)


def maair_direction(set_, t, cfg: SolverConfig | None = None) -> DirectionSample:
    """Largest inscribed rectangle whose edges have slopes t and -1/t."""
    s = as_set(set_)
    if s.dim != 2:
        raise InputError("fixed-direction rectangles need a 2-D set")
    if not abs(float(t)) <= 1.0:
        raise InputError(f"slope t={t} lies outside [-1, 1]")
    return _solve_direction(s, float(t), cfg or SolverConfig(), _seed(s))


# ---------------------------------------------------------------------------
# aspect-ratio bound and sweep


def aspect_ratio_bound(set_) -> float:
    """Upper bound on the aspect ratio of a largest inscribed rectangle.

    Polygons: 4 diam^2 / area.  Other sets: 16 sqrt(2) AR(R'), where R' is
    the smallest enclosing rectangle with a side parallel to the segment
    joining the support points on the shorter sides of the bounding box.
    The bound is clamped below at 1; bounds above 1e6 are refused.
    """
    poly = set_ if isinstance(set_, Polygon2D) else as_set(set_).polygon
    if poly is not None:
        dia, _ = diameter(poly)
        rho = 4.0 * dia * dia / polygon_area(poly)
    else:
        s = as_set(set_)
        if s.dim != 2:
            raise InputError("aspect-ratio bound needs a 2-D set")
        w = s.bbox.widths
        # shorter sides are perpendicular to the longer extent
        axis = np.array([1.0, 0.0]) if w[0] >= w[1] else np.array([0.0, 1.0])
        p = support_point(s, -axis)
        q = support_point(s, axis)
        e = (q - p) / np.linalg.norm(q - p)
        n = np.array([-e[1], e[0]])
        along = float(e @ support_point(s, e) - e @ support_point(s, -e))
        across = float(n @ support_point(s, n) - n @ support_point(s, -n))
        rho = 16.0 * math.sqrt(2.0) * max(along, across) / min(along, across)
    if not math.isfinite(rho) or rho > RHO_MAX:
        raise CapabilityError(f"aspect-ratio bound {rho:.3g} exceeds {RHO_MAX:.0e}; the set is too thin to sweep")
    return max(1.0, rho)


def sweep_angles(rho, eps):
    """Midpoints of ceil(rho*pi/eps) equal pieces of [-pi/4, pi/4]."""
    K = math.ceil(rho * math.pi / eps)
    width = (math.pi / 2) / K
    return -math.pi / 4 + width * (np.arange(K) + 0.5)


def select_best(samples):
    """Largest area; ties within 1e-12 go to the smaller angle, then index."""
    best = None
    for k, smp in enumerate(samples):
        if best is None:
            best = k
            continue
        b = samples[best]
        if smp.area > b.area + 1e-12 * max(1.0, b.area):
            best = k
        elif abs(smp.area - b.area) <= 1e-12 * max(1.0, b.area) and smp.theta < b.theta:
            best = k
    return best


def _run_directions(s, ts, cfg, threads, seed=None):
    seed = seed or _seed(s)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda t: _solve_direction(s, t, cfg, seed), ts))
    return [_solve_direction(s, t, cfg, seed) for t in ts]


def _wrap(theta):
    """Equivalent angle in [-pi/4, pi/4] (rectangles repeat every pi/2)."""
    return (theta + math.pi / 4) % (math.pi / 2) - math.pi / 4


def refine_angle(set_, sample: DirectionSample, width, cfg=None, seed=None):
    """Bounded Brent search for a better angle within +-width of ``sample``.

    Returns the best of the starting sample and every evaluated direction,
    so the result is never worse than the input.
    """
    s = as_set(set_)
    cfg = cfg or SolverConfig()
    seed = seed or _seed(s)
    best = [sample]

    def neg_area(theta):
        smp = _solve_direction(s, math.tan(_wrap(theta)), cfg, seed)
        if smp.area > best[0].area + 1e-12 * max(1.0, best[0].area):
            best[0] = smp
        return -smp.area

    minimize_scalar(
        neg_area,
        bounds=(sample.theta - width, sample.theta + width),
        method="bounded",
        options={"xatol": 1e-10, "maxiter": 200},
    )
    return best[0]


def mair_sweep(set_, eps, cfg: SolverConfig | None = None, threads=1, rho=None, refine=True):
    """(1 - eps)-approximate largest inscribed rectangle of any orientation.

    Samples the fixed-direction optimum at the midpoints of ceil(rho*pi/eps)
    pieces of [-pi/4, pi/4].  With ``refine`` the winning piece is then
    searched locally for a better angle, which can only increase the area.

    Returns ``(best Rectangle2D, list of DirectionSample)``; samples are in
    increasing angle order whatever ``threads`` is, and exclude the
    refinement evaluations.
    """
    s = as_set(set_)
    if s.dim != 2:
        raise InputError("the rectangle sweep needs a 2-D set")
    if not 0 < eps < 1:
        raise InputError("eps must lie in (0, 1)")
    cfg = cfg or SolverConfig()
    rho = aspect_ratio_bound(s) if rho is None else rho
    thetas = sweep_angles(rho, eps)
    seed = _seed(s)
    samples = _run_directions(s, np.tan(thetas), cfg, threads, seed)
    best = samples[select_best(samples)]
    if refine:
        width = (math.pi / 2) / len(thetas)
        best = refine_angle(s, best, width, cfg, seed)
    return best.rect, samples


def f_profile(set_, samples, cfg: SolverConfig | None = None, threads=1):
    """[(t, f(t))] at ``samples`` evenly spaced slopes in [-1, 1]."""
    s = as_set(set_)
    samples = int(samples)
    if samples < 2:
        raise InputError("a profile needs at least 2 samples")
    ts = np.linspace(-1.0, 1.0, samples)
    out = _run_directions(s, ts, cfg or SolverConfig(), threads)
    return [(float(smp.t), smp.area) for smp in out]
