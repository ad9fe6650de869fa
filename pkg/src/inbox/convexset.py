"""Convex sets given by linear and convex-quadratic inequalities, plus polygons.

A :class:`ConvexSet` is an ordered list of inequalities

    p . x <= b                       (LinearIneq)
    x' A x + 2 b . x + c <= 0        (QuadraticIneq, A symmetric PSD)

optionally backed by an explicit counter-clockwise :class:`Polygon2D`, in
which case exact vertex-based geometry is used where possible.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InfeasibleError, InputError, UnboundedError, ValidationError


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# inequalities


@dataclass(frozen=True, eq=False)
class LinearIneq:
    """p . x <= b"""

    p: np.ndarray
    b: float

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).reshape(-1)
        if p.size == 0 or not np.all(np.isfinite(p)) or not math.isfinite(float(self.b)):
            raise InputError("linear inequality needs a finite, non-empty p and finite b")
        if not np.any(p != 0):
            raise ValidationError("linear inequality has a zero normal vector")
        object.__setattr__(self, "p", _frozen(p))
        object.__setattr__(self, "b", float(self.b))

    @property
    def dim(self):
        return self.p.shape[0]

    def residual(self, X):
        return X @ self.p - self.b

    def to_json(self):
        return {"type": "linear", "p": self.p.tolist(), "b": self.b}


@dataclass(frozen=True, eq=False)
class QuadraticIneq:
    """x' A x + 2 b . x + c <= 0 with A symmetric positive semidefinite."""

    A: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        d = A.shape[0]
        if A.shape != (d, d):
            raise InputError(f"quadratic inequality: A must be square, got {A.shape}")
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if b.shape != (d,):
            raise InputError(f"quadratic inequality: b must have length {d}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and math.isfinite(float(self.c))):
            raise InputError("quadratic inequality has non-finite entries")
        A = 0.5 * (A + A.T)
        norm = float(np.linalg.norm(A, 2))
        if norm == 0.0:
            raise ValidationError("quadratic inequality has A = 0; use a linear inequality")
        if float(np.linalg.eigvalsh(A)[0]) < -1e-10 * norm:
            raise ValidationError("quadratic inequality: A is not positive semidefinite")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "c", float(self.c))

    @property
    def dim(self):
        return self.A.shape[0]

    def residual(self, X):
        return np.einsum("...i,ij,...j->...", X, self.A, X) + 2.0 * X @ self.b + self.c

    def to_json(self):
        return {"type": "quadratic", "A": self.A.tolist(), "b": self.b.tolist(), "c": self.c}


# ---------------------------------------------------------------------------
# polygon


@dataclass(frozen=True, eq=False)
class Polygon2D:
    """Strictly convex polygon with vertices in counter-clockwise order."""

    vertices: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2:
            raise InputError("polygon vertices must be a list of 2-vectors")
        if V.shape[0] < 3:
            raise ValidationError("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(V)):
            raise InputError("polygon vertices must be finite")
        E = np.roll(V, -1, axis=0) - V
        cross = E[:, 0] * np.roll(E, -1, axis=0)[:, 1] - E[:, 1] * np.roll(E, -1, axis=0)[:, 0]
        scale = max(float(np.ptp(V, axis=0).max()), np.finfo(float).tiny)
        thresh = 1e-12 * scale * scale
        if np.all(cross < -thresh):
            raise ValidationError("polygon vertices are clockwise; counter-clockwise order is required")
        bad = np.flatnonzero(cross <= thresh)
        if bad.size:
            i = (int(bad[0]) + 1) % V.shape[0]
            raise ValidationError(f"polygon is not strictly convex at vertex {i}")
        # a convex turn everywhere plus a single winding rules out self-intersections
        turn = np.arctan2(cross, np.einsum("ij,ij->i", E, np.roll(E, -1, axis=0))).sum()
        if abs(turn - 2 * math.pi) > 1e-6:
            raise ValidationError("polygon boundary winds more than once")
        object.__setattr__(self, "vertices", _frozen(V))

    @property
    def n(self):
        return self.vertices.shape[0]

    def edges(self):
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @property
    def scale(self):
        return max(1.0, float(np.ptp(self.vertices, axis=0).max()))


def polygon_to_halfspaces(poly: Polygon2D) -> "ConvexSet":
    """One normalized linear inequality per edge, oriented so the polygon is inside."""
    V = poly.vertices
    E = poly.edges()
    # outward normal of a CCW edge (e1, e2) is (e2, -e1)
    N = np.column_stack([E[:, 1], -E[:, 0]])
    N /= np.linalg.norm(N, axis=1)[:, None]
    b = np.einsum("ij,ij->i", N, V)
    ineqs = tuple(LinearIneq(N[i], b[i]) for i in range(poly.n))
    return ConvexSet(2, ineqs, polygon=poly)


def convex_hull(points) -> Polygon2D:
    """Counter-clockwise hull of a 2-D point cloud (monotone chain)."""
    P = np.unique(np.asarray(points, dtype=float), axis=0)
    if P.shape[0] < 3:
        raise ValidationError("need at least 3 distinct points for a hull")

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in P:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in P[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return Polygon2D(np.array(lower[:-1] + upper[:-1]))


# ---------------------------------------------------------------------------
# boxes


@dataclass(frozen=True, eq=False)
class BoxRegion:
    """Axis-aligned box {x : xl <= x <= xu}."""

    xl: np.ndarray
    xu: np.ndarray

    def __post_init__(self):
        xl = np.asarray(self.xl, dtype=float).reshape(-1)
        xu = np.asarray(self.xu, dtype=float).reshape(-1)
        if xl.shape != xu.shape:
            raise InputError("box bounds have different lengths")
        object.__setattr__(self, "xl", _frozen(xl))
        object.__setattr__(self, "xu", _frozen(xu))

    @property
    def dim(self):
        return self.xl.shape[0]

    @property
    def widths(self):
        return self.xu - self.xl

    @property
    def center(self):
        return 0.5 * (self.xl + self.xu)

    @property
    def volume(self):
        return float(np.prod(self.widths))

    def corners(self):
        """All 2^d vertices, row k using xu where bit j of k is set."""
        d = self.dim
        bits = (np.arange(2**d)[:, None] >> np.arange(d)) & 1
        return np.where(bits == 1, self.xu, self.xl)

    def sample(self, n, rng=None):
        rng = np.random.default_rng(rng)
        return self.xl + rng.random((n, self.dim)) * self.widths

    def to_json(self):
        return {"xl": self.xl.tolist(), "xu": self.xu.tolist(), "volume": self.volume}


# ---------------------------------------------------------------------------
# the set


@dataclass(frozen=True, eq=False)
class ConvexSet:
    dim: int
    ineqs: tuple
    polygon: Polygon2D | None = None

    def __post_init__(self):
        ineqs = tuple(self.ineqs)
        if int(self.dim) < 1:
            raise InputError("dimension must be a positive integer")
        if not ineqs:
            raise InputError("a convex set needs at least one inequality")
        for k, q in enumerate(ineqs):
            if not isinstance(q, (LinearIneq, QuadraticIneq)):
                raise InputError(f"constraint {k} is not a LinearIneq or QuadraticIneq")
            if q.dim != self.dim:
                raise InputError(f"constraint {k} has dimension {q.dim}, expected {self.dim}")
        if self.polygon is not None and self.dim != 2:
            raise InputError("only 2-D sets can carry a polygon")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "ineqs", ineqs)

    @property
    def n(self):
        return len(self.ineqs)

    @property
    def linear(self):
        return [q for q in self.ineqs if isinstance(q, LinearIneq)]

    @property
    def quadratic(self):
        return [q for q in self.ineqs if isinstance(q, QuadraticIneq)]

    @property
    def is_polytope(self):
        return all(isinstance(q, LinearIneq) for q in self.ineqs)

    def linear_system(self):
        """(P, b) stacked from the linear inequalities, in order."""
        lin = self.linear
        if not lin:
            return np.zeros((0, self.dim)), np.zeros(0)
        return np.array([q.p for q in lin]), np.array([q.b for q in lin])

    def residuals(self, X):
        """Constraint residuals, shape (..., n); positive means violated."""
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dim:
            raise InputError(f"point dimension {X.shape[-1]} does not match set dimension {self.dim}")
        return np.stack([q.residual(X) for q in self.ineqs], axis=-1)

    @cached_property
    def bbox(self):
        return bounding_box(self)

    @cached_property
    def scale(self):
        """max(1, largest bounding-box width), the unit for relative tolerances."""
        return max(1.0, float(np.max(self.bbox.widths)))

    @cached_property
    def interior(self):
        return interior_point(self)

    def to_json(self):
        if self.polygon is not None:
            return {"polygon": {"vertices": self.polygon.vertices.tolist()}}
        return {"dim": self.dim, "constraints": [q.to_json() for q in self.ineqs]}


def as_set(obj) -> ConvexSet:
    if isinstance(obj, ConvexSet):
        return obj
    if isinstance(obj, Polygon2D):
        return polygon_to_halfspaces(obj)
    raise InputError(f"expected a ConvexSet or Polygon2D, got {type(obj).__name__}")


def contains(set_, x, tol=0.0) -> bool:
    """True iff every residual of ``x`` is at most ``tol``."""
    if tol < 0:
        raise InputError("tol must be nonnegative")
    s = as_set(set_)
    x = np.asarray(x, dtype=float)
    if x.shape != (s.dim,):
        raise InputError(f"point has shape {x.shape}, expected ({s.dim},)")
    return bool(np.all(s.residuals(x) <= tol))


def contains_all(set_, X, tol=0.0):
    """Vectorized :func:`contains` over the rows of ``X``."""
    s = as_set(set_)
    return np.all(s.residuals(np.atleast_2d(X)) <= tol, axis=-1)


# ---------------------------------------------------------------------------
# polygon geometry


def area(poly: Polygon2D) -> float:
    """Shoelace area (positive for the enforced counter-clockwise order)."""
    V = poly.vertices - poly.vertices.mean(axis=0)
    W = np.roll(V, -1, axis=0)
    return 0.5 * float(np.sum(V[:, 0] * W[:, 1] - V[:, 1] * W[:, 0]))


def diameter(poly: Polygon2D):
    """Largest vertex distance and an attaining pair, by rotating calipers.

    Walks every antipodal vertex pair once: for each edge the opposite pointer
    advances while the triangle area against the edge keeps growing.
    """
    V = poly.vertices
    n = V.shape[0]

    def tri(i, j, k):
        a, b, c = V[i], V[j], V[k]
        return abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    best = -1.0
    pair = (0, 1)
    j = 1
    for i in range(n):
        i2 = (i + 1) % n
        while tri(i, i2, (j + 1) % n) > tri(i, i2, j):
            j = (j + 1) % n
        for a in (i, i2):
            for b in (j, (j + 1) % n) if tri(i, i2, (j + 1) % n) == tri(i, i2, j) else (j,):
                dd = float(np.sum((V[a] - V[b]) ** 2))
                if dd > best:
                    best, pair = dd, (a, b)
    return math.sqrt(best), (V[pair[0]].copy(), V[pair[1]].copy())


def _polygon_support(poly: Polygon2D, d):
    vals = poly.vertices @ d
    top = vals.max()
    tol = 1e-12 * poly.scale * float(np.abs(d).sum())
    cand = poly.vertices[vals >= top - tol]
    order = np.lexsort((cand[:, 1], cand[:, 0]))
    return cand[order[-1]].copy()


# ---------------------------------------------------------------------------
# barrier-backed queries on inequality sets


def _check_bounded(s: ConvexSet):
    rows = [q.p for q in s.linear] + [q.A for q in s.quadratic]
    M = np.vstack([np.atleast_2d(r) for r in rows])
    if np.linalg.matrix_rank(M) < s.dim:
        raise UnboundedError("the constraint normals do not span the space; the set is unbounded")


def _barrier_blocks(s: ConvexSet, shift=None):
    """Constraint blocks over x (and optionally a trailing slack column)."""
    from .barrier import LinearConstraints, QuadraticConstraints

    d = s.dim
    extra = 0 if shift is None else 1
    blocks = []
    lin = s.linear
    if lin:
        P = np.array([q.p for q in lin])
        norms = np.linalg.norm(P, axis=1)
        A = P / norms[:, None]
        b = np.array([q.b for q in lin]) / norms
        if extra:
            A = np.hstack([A, -np.ones((len(lin), 1))])
        blocks.append(LinearConstraints(A, b))
    quad = s.quadratic
    if quad:
        Q = np.zeros((len(quad), d + extra, d + extra))
        q = np.zeros((len(quad), d + extra))
        r = np.zeros(len(quad))
        for k, ineq in enumerate(quad):
            w = float(np.linalg.norm(ineq.A, 2))
            Q[k, :d, :d] = ineq.A / w
            q[k, :d] = 2.0 * ineq.b / w
            r[k] = ineq.c / w
            if extra:
                q[k, d] = -1.0
        blocks.append(QuadraticConstraints(Q, q, r))
    return blocks


def interior_point(set_) -> np.ndarray:
    """A strictly interior point, found by a phase-I barrier solve.

    Maximizes -s subject to g_i(x) - s < 0 and s > -1 (constraints rescaled to
    unit normals), starting from x = 0 with a large enough s.
    """
    from .barrier import BarrierProblem, LinearConstraints, LinearObjective, SolverConfig, path_follow

    s = as_set(set_)
    if s.polygon is not None:
        return s.polygon.vertices.mean(axis=0)
    _check_bounded(s)
    d = s.dim
    blocks = _barrier_blocks(s, shift=True)
    floor = np.zeros((1, d + 1))
    floor[0, d] = -1.0
    blocks.append(LinearConstraints(floor, [1.0]))
    x0 = np.zeros(d)
    g0 = max(float(np.max(blk.values(np.append(x0, 0.0)))) for blk in blocks[:-1])
    z0 = np.append(x0, max(g0, -0.5) + 1.0)
    c = np.zeros(d + 1)
    c[d] = -1.0
    prob = BarrierProblem(d + 1, LinearObjective(c), tuple(blocks))
    rep = path_follow(prob, z0, SolverConfig(eps=1e-6, mu=10.0))
    x = rep.x_star[:d]
    if not np.all(s.residuals(x) < 0):
        raise InfeasibleError("the set has an empty interior (no strictly feasible point)")
    return x


def support_point(set_, direction) -> np.ndarray:
    """A maximizer of ``direction . x`` over the set.

    Polygons are handled exactly over their vertices, breaking ties towards the
    lexicographically largest vertex.  Inequality sets are solved with the
    barrier method to a duality gap of 1e-8.
    """
    from .barrier import BarrierProblem, LinearObjective, SolverConfig, path_follow

    d = np.asarray(direction, dtype=float).reshape(-1)
    if isinstance(set_, Polygon2D):
        poly, dim = set_, 2
    else:
        s = as_set(set_)
        poly, dim = s.polygon, s.dim
    if d.shape != (dim,):
        raise InputError(f"direction has shape {d.shape}, expected ({dim},)")
    if not np.any(d != 0) or not np.all(np.isfinite(d)):
        raise InputError("direction must be a finite nonzero vector")
    if poly is not None:
        return _polygon_support(poly, d)
    _check_bounded(s)
    x0 = s.interior
    prob = BarrierProblem(dim, LinearObjective(d / np.linalg.norm(d)), tuple(_barrier_blocks(s)))
    rep = path_follow(prob, x0, SolverConfig(eps=1e-8, mu=10.0))
    return rep.x_star


def bounding_box(set_) -> BoxRegion:
    """Tightest axis-aligned box around the set, from 2d support queries."""
    if isinstance(set_, Polygon2D):
        V = set_.vertices
        return BoxRegion(V.min(axis=0), V.max(axis=0))
    s = as_set(set_)
    if s.polygon is not None:
        return bounding_box(s.polygon)
    I = np.eye(s.dim)
    lo = np.array([support_point(s, -I[j])[j] for j in range(s.dim)])
    hi = np.array([support_point(s, I[j])[j] for j in range(s.dim)])
    return BoxRegion(lo, hi)


def chord(set_, points, direction):
    """Parameter interval of the line ``points + s * direction`` inside the set.

    Returns ``(lo, hi)`` arrays (one entry per point); ``lo > hi`` marks a
    line that misses the set.  Exact per constraint: linear rows give one
    bound each and quadratic rows a root pair.
    """
    s = as_set(set_)
    X = np.atleast_2d(np.asarray(points, dtype=float))
    D = np.broadcast_to(np.asarray(direction, dtype=float), X.shape)
    lo = np.full(X.shape[0], -np.inf)
    hi = np.full(X.shape[0], np.inf)
    for q in s.ineqs:
        if isinstance(q, LinearIneq):
            rate = D @ q.p
            room = q.b - X @ q.p
            with np.errstate(divide="ignore", invalid="ignore"):
                bound = room / rate
            hi = np.where(rate > 0, np.minimum(hi, bound), hi)
            lo = np.where(rate < 0, np.maximum(lo, bound), lo)
            miss = (rate == 0) & (room < 0)
            lo = np.where(miss, np.inf, lo)
        else:
            a = np.einsum("ij,jk,ik->i", D, q.A, D)
            bb = 2.0 * (np.einsum("ij,jk,ik->i", X, q.A, D) + D @ q.b)
            cc = q.residual(X)
            disc = bb * bb - 4.0 * a * cc
            ok = (disc >= 0) & (a > 0)
            sq = np.sqrt(np.where(ok, disc, 0.0))
            # numerically stable root pair
            qq = -0.5 * (bb + np.copysign(sq, bb))
            with np.errstate(divide="ignore", invalid="ignore"):
                r1 = np.where(ok, qq / np.where(a > 0, a, 1.0), np.nan)
                r2 = np.where(ok & (qq != 0), cc / np.where(qq != 0, qq, 1.0), np.nan)
            r2 = np.where(ok & (qq == 0), r1, r2)
            rlo = np.fmin(r1, r2)
            rhi = np.fmax(r1, r2)
            lo = np.where(ok, np.maximum(lo, rlo), lo)
            hi = np.where(ok, np.minimum(hi, rhi), hi)
            # a == 0: the quadratic is linear along this direction
            lin = a <= 0
            if np.any(lin):
                with np.errstate(divide="ignore", invalid="ignore"):
                    bound = -cc / bb
                hi = np.where(lin & (bb > 0), np.minimum(hi, bound), hi)
                lo = np.where(lin & (bb < 0), np.maximum(lo, bound), lo)
                lo = np.where(lin & (bb == 0) & (cc > 0), np.inf, lo)
            lo = np.where((a > 0) & (disc < 0), np.inf, lo)
    return lo, hi


# ---------------------------------------------------------------------------
# transforms and constructors


def affine_image(set_, M, t=None) -> ConvexSet:
    """Image of the set under ``x -> M x + t`` for invertible ``M``."""
    s = as_set(set_)
    M = np.asarray(M, dtype=float)
    t = np.zeros(s.dim) if t is None else np.asarray(t, dtype=float)
    if M.shape != (s.dim, s.dim):
        raise InputError("transform matrix has the wrong shape")
    Minv = np.linalg.inv(M)
    ineqs = []
    for q in s.ineqs:
        if isinstance(q, LinearIneq):
            p = Minv.T @ q.p
            ineqs.append(LinearIneq(p, q.b + p @ t))
        else:
            # x = Minv (y - t)
            A = Minv.T @ q.A @ Minv
            bt = Minv.T @ q.b
            b = bt - A @ t
            c = float(t @ A @ t - 2.0 * bt @ t + q.c)
            ineqs.append(QuadraticIneq(A, b, c))
    poly = None
    if s.polygon is not None:
        V = s.polygon.vertices @ M.T + t
        if np.linalg.det(M) < 0:
            V = V[::-1]
        poly = Polygon2D(V)
    return ConvexSet(s.dim, tuple(ineqs), polygon=poly)


def translate(set_, t) -> ConvexSet:
    s = as_set(set_)
    return affine_image(s, np.eye(s.dim), t)


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def box(lo, hi) -> ConvexSet:
    lo = np.asarray(lo, dtype=float).reshape(-1)
    hi = np.asarray(hi, dtype=float).reshape(-1)
    if lo.shape != hi.shape or not np.all(hi > lo):
        raise InputError("box needs hi > lo componentwise")
    d = lo.shape[0]
    if d == 2:
        return from_polygon([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])
    I = np.eye(d)
    ineqs = [LinearIneq(I[j], hi[j]) for j in range(d)] + [LinearIneq(-I[j], -lo[j]) for j in range(d)]
    return ConvexSet(d, tuple(ineqs))


def hypercube(d) -> ConvexSet:
    return box(np.zeros(d), np.ones(d))


def ellipsoid(semi_axes, center=None) -> ConvexSet:
    """Axis-aligned ellipsoid sum((x_i - c_i)^2 / a_i^2) <= 1."""
    a = np.asarray(semi_axes, dtype=float).reshape(-1)
    if not np.all(a > 0):
        raise InputError("semi-axes must be positive")
    c = np.zeros_like(a) if center is None else np.asarray(center, dtype=float)
    A = np.diag(1.0 / a**2)
    return ConvexSet(a.size, (QuadraticIneq(A, -A @ c, float(c @ A @ c) - 1.0),))


def ball(d=2, radius=1.0, center=None) -> ConvexSet:
    return ellipsoid(np.full(d, float(radius)), center)


def ellipse(a, b, center=None) -> ConvexSet:
    return ellipsoid([a, b], center)


def from_polygon(vertices) -> ConvexSet:
    return polygon_to_halfspaces(Polygon2D(vertices))


def regular_polygon(n, radius=1.0, phase=0.0) -> ConvexSet:
    k = np.arange(n)
    ang = phase + 2 * np.pi * k / n
    return from_polygon(radius * np.column_stack([np.cos(ang), np.sin(ang)]))


def random_convex_polygon(n, rng=None) -> ConvexSet:
    """n points at sorted random angles on the unit circle, then a random
    anisotropic stretch and rotation.  Always exactly n vertices."""
    rng = np.random.default_rng(rng)
    # the smallest of n uniform gaps is about 2 pi / n^2, so the floor shrinks with n
    floor = min(1e-3, 1.0 / n**2)
    while True:
        ang = np.sort(rng.uniform(0, 2 * np.pi, n))
        gaps = np.diff(np.append(ang, ang[0] + 2 * np.pi))
        if not (gaps.min() > floor and gaps.max() < np.pi - 1e-3):
            continue
        V = np.column_stack([np.cos(ang), np.sin(ang)])
        S = np.diag([1.0, rng.uniform(0.3, 1.0)])
        V = V @ (rotation(rng.uniform(0, np.pi)) @ S).T
        try:
            return from_polygon(V)
        except ValidationError:
            # nearly collinear neighbours after the stretch; draw again
            continue


# ---------------------------------------------------------------------------
# JSON


def _ctx_num(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _ctx_vec(v, where):
    if not isinstance(v, list):
        raise InputError(f"{where}: expected a list of numbers")
    return [_ctx_num(x, f"{where}[{i}]") for i, x in enumerate(v)]


def set_from_json(obj) -> ConvexSet:
    """Parse the JSON set schema (inequality list or polygon)."""
    if not isinstance(obj, dict):
        raise InputError("top level: expected a JSON object")
    if "polygon" in obj:
        poly = obj["polygon"]
        if not isinstance(poly, dict) or "vertices" not in poly:
            raise InputError("polygon: missing key 'vertices'")
        verts = poly["vertices"]
        if not isinstance(verts, list):
            raise InputError("polygon.vertices: expected a list")
        V = [_ctx_vec(v, f"polygon.vertices[{i}]") for i, v in enumerate(verts)]
        if any(len(v) != 2 for v in V):
            raise InputError("polygon.vertices: every vertex must have 2 coordinates")
        return from_polygon(V)
    if "dim" not in obj:
        raise InputError("top level: missing key 'dim' (or 'polygon')")
    if "constraints" not in obj:
        raise InputError("top level: missing key 'constraints'")
    dim = obj["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError("dim: expected a positive integer")
    cons = obj["constraints"]
    if not isinstance(cons, list) or not cons:
        raise InputError("constraints: expected a non-empty list")
    ineqs = []
    for k, c in enumerate(cons):
        where = f"constraints[{k}]"
        if not isinstance(c, dict):
            raise InputError(f"{where}: expected an object")
        kind = c.get("type")
        try:
            if kind == "linear":
                for key in ("p", "b"):
                    if key not in c:
                        raise InputError(f"{where}: missing key '{key}'")
                ineqs.append(LinearIneq(_ctx_vec(c["p"], f"{where}.p"), _ctx_num(c["b"], f"{where}.b")))
            elif kind == "quadratic":
                for key in ("A", "b", "c"):
                    if key not in c:
                        raise InputError(f"{where}: missing key '{key}'")
                if not isinstance(c["A"], list):
                    raise InputError(f"{where}.A: expected a matrix")
                A = [_ctx_vec(r, f"{where}.A[{i}]") for i, r in enumerate(c["A"])]
                ineqs.append(QuadraticIneq(A, _ctx_vec(c["b"], f"{where}.b"), _ctx_num(c["c"], f"{where}.c")))
            else:
                raise InputError(f"{where}.type: expected 'linear' or 'quadratic', got {kind!r}")
        except InputError as exc:
            if str(exc).startswith(where):
                raise
            raise type(exc)(f"{where}: {exc}") from None
    try:
        return ConvexSet(dim, tuple(ineqs))
    except InputError as exc:
        raise InputError(f"constraints: {exc}") from None


def load_set(path) -> ConvexSet:
    with open(path) as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return set_from_json(obj)


def dump_set(set_, path=None):
    obj = as_set(set_).to_json()
    if path is None:
        return json.dumps(obj)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
