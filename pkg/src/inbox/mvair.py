"""Maximum-volume axis-aligned inscribed box (MVAIR) of a convex set.

The decision variable is the pair of opposite box corners stacked as
``z = (xu, xl)``; the volume enters as ``sum_j log(xu_j - xl_j)``.

For a polytope ``P x <= b`` the box is inside iff, row by row,

    sum_j (p+_ij xu_j - p-_ij xl_j) <= b_i,

with ``p+ = max(p, 0)`` and ``p- = max(-p, 0)``: the worst corner of the box
for a linear row picks ``xu`` where the coefficient is positive and ``xl``
where it is negative.  So the model has exactly one barrier term per facet.

Quadratic rows are convex, so their worst value over the box also sits at a
corner.  Diagonal quadratics separate by coordinate and get one epigraph
variable per coordinate; all other quadratics are written at every one of
the ``2^d`` corners.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .barrier import (
    BarrierProblem,
    LinearConstraints,
    LogSumObjective,
    QuadraticConstraints,
    SolverConfig,
    path_follow,
)
from .convexset import BoxRegion, LinearIneq, as_set, support_point
from .errors import CapabilityError, InfeasibleError, InputError

MAX_VERTEX_DIM = 12


@dataclass(frozen=True)
class SplitMatrix:
    p_plus: np.ndarray
    p_minus: np.ndarray


def split_pos_neg(P) -> SplitMatrix:
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if not np.all(np.isfinite(P)):
        raise InputError("matrix has non-finite entries")
    return SplitMatrix(np.maximum(P, 0.0), np.maximum(-P, 0.0))


def _volume_objective(d, extra=0):
    rows = np.hstack([np.eye(d), -np.eye(d), np.zeros((d, extra))])
    return LogSumObjective(rows)


def _linear_block(P, b, extra=0):
    sp = split_pos_neg(P)
    A = np.hstack([sp.p_plus, -sp.p_minus, np.zeros((P.shape[0], extra))])
    return LinearConstraints(A, b)


def build_mvair_polytope(set_) -> BarrierProblem:
    """MVAIR model of a polytope: 2d variables, one barrier term per facet."""
    s = as_set(set_)
    if not s.is_polytope:
        raise InputError("set has quadratic constraints; use build_mvair_general")
    P, b = s.linear_system()
    d = s.dim
    groups = tuple(("linear", i, 1) for i in range(s.n))
    return BarrierProblem(
        2 * d,
        _volume_objective(d),
        (_linear_block(P, b),),
        groups=groups,
        meta={"dim": d, "aux": 0, "kind": "polytope"},
    )


def _is_diagonal(A):
    off = A - np.diag(np.diag(A))
    return float(np.max(np.abs(off))) <= 1e-12 * float(np.linalg.norm(A, 2))


def corner_selectors(d):
    """0/1 matrix whose row k marks the coordinates taken from xu at corner k."""
    if d > MAX_VERTEX_DIM:
        raise CapabilityError(
            f"vertex enumeration needs 2^{d} corner constraints per quadratic; "
            f"the limit is d <= {MAX_VERTEX_DIM}"
        )
    return ((np.arange(2**d)[:, None] >> np.arange(d)) & 1).astype(float)


def build_mvair_general(set_, separable=True) -> BarrierProblem:
    """MVAIR model of a set with linear and convex-quadratic inequalities.

    Variables are ``(xu, xl, s)`` where ``s`` holds one epigraph variable per
    (diagonal quadratic, coordinate with positive curvature).  For such a
    quadratic with per-coordinate pieces ``phi_i(y) = A_ii y^2 + 2 b_i y`` the
    rows are

        phi_i(xu_i) - s_i < 0,   phi_i(xl_i) - s_i < 0,
        sum_i s_i + sum_{A_ii = 0} 2 (b+_i xu_i - b-_i xl_i) + c < 0,

    an exact encoding of ``max over the box <= 0``.  Non-diagonal quadratics
    (or every quadratic when ``separable=False``) emit one row per box corner.
    """
    s = as_set(set_)
    d = s.dim
    quads = s.quadratic
    diag = [separable and _is_diagonal(q.A) for q in quads]
    # aux slots: (quadratic index, coordinate)
    aux = [(k, i) for k, q in enumerate(quads) if diag[k] for i in range(d) if q.A[i, i] > 0]
    m = len(aux)
    nv = 2 * d + m
    if not all(diag):
        sel = corner_selectors(d)

    lin_rows, lin_b = [], []
    qQ, qq, qr = [], [], []
    groups = []
    P, b = s.linear_system()
    if P.shape[0]:
        sp = split_pos_neg(P)
        lin_rows.append(np.hstack([sp.p_plus, -sp.p_minus, np.zeros((P.shape[0], m))]))
        lin_b.append(b)

    for idx, ineq in enumerate(s.ineqs):
        if isinstance(ineq, LinearIneq):
            groups.append(("linear", idx, 1))
            continue
        k = [j for j, q in enumerate(quads) if q is ineq][0]
        A, bq, c = ineq.A, ineq.b, ineq.c
        if diag[k]:
            rows = 0
            group_row = np.zeros(nv)
            for slot, (kk, i) in enumerate(aux):
                if kk != k:
                    continue
                col = 2 * d + slot
                for var in (i, d + i):  # xu_i, xl_i
                    Q = np.zeros((nv, nv))
                    Q[var, var] = A[i, i]
                    q = np.zeros(nv)
                    q[var] = 2.0 * bq[i]
                    q[col] = -1.0
                    qQ.append(Q)
                    qq.append(q)
                    qr.append(0.0)
                    rows += 1
                group_row[col] = 1.0
            for i in range(d):
                if A[i, i] == 0:
                    group_row[i] += 2.0 * max(bq[i], 0.0)
                    group_row[d + i] -= 2.0 * max(-bq[i], 0.0)
            lin_rows.append(group_row[None])
            lin_b.append(np.array([-c]))
            groups.append(("separable", idx, rows + 1))
        else:
            for row in sel:
                M = np.hstack([np.diag(row), np.diag(1.0 - row), np.zeros((d, m))])
                qQ.append(M.T @ A @ M)
                qq.append(2.0 * M.T @ bq)
                qr.append(c)
            groups.append(("vertex", idx, sel.shape[0]))

    blocks = []
    if lin_rows:
        blocks.append(LinearConstraints(np.vstack(lin_rows), np.concatenate(lin_b)))
    if qQ:
        blocks.append(QuadraticConstraints(np.array(qQ), np.array(qq), np.array(qr)))
    return BarrierProblem(
        nv,
        _volume_objective(d, m),
        tuple(blocks),
        groups=tuple(groups),
        meta={"dim": d, "aux": m, "aux_slots": tuple(aux), "kind": "general"},
    )


def build_mvair(set_, separable=True) -> BarrierProblem:
    s = as_set(set_)
    return build_mvair_polytope(s) if s.is_polytope else build_mvair_general(s, separable)


# ---------------------------------------------------------------------------
# containment of a box


def box_residuals(set_, xl, xu):
    """Worst-case residual of every inequality over the box [xl, xu].

    Exact: linear rows via the sign split, quadratic rows via the corner
    maximum of a convex function (separably for diagonal A).
    """
    s = as_set(set_)
    xl = np.asarray(xl, dtype=float)
    xu = np.asarray(xu, dtype=float)
    out = np.empty(s.n)
    for k, q in enumerate(s.ineqs):
        if isinstance(q, LinearIneq):
            out[k] = np.maximum(q.p, 0) @ xu - np.maximum(-q.p, 0) @ xl - q.b
        elif _is_diagonal(q.A):
            a = np.diag(q.A)
            phi = np.maximum(a * xu * xu + 2 * q.b * xu, a * xl * xl + 2 * q.b * xl)
            out[k] = phi.sum() + q.c
        else:
            sel = corner_selectors(s.dim)
            C = np.where(sel == 1, xu, xl)
            out[k] = float(q.residual(C).max())
    return out


def box_inside(set_, box: BoxRegion, tol=0.0):
    return bool(np.all(box_residuals(set_, box.xl, box.xu) <= tol))


def lift(problem: BarrierProblem, set_, xl, xu):
    """Full variable vector (xu, xl, s) for a box strictly inside the set.

    Epigraph variables sit halfway between their corner maximum and the
    value that would make the group row tight.
    """
    s = as_set(set_)
    z = np.concatenate([xu, xl])
    aux = problem.meta.get("aux_slots", ())
    if not aux:
        return z
    quads = s.quadratic
    sv = np.zeros(len(aux))
    for k, q in enumerate(quads):
        slots = [j for j, (kk, _) in enumerate(aux) if kk == k]
        if not slots:
            continue
        a = np.diag(q.A)
        phi = np.maximum(a * xu * xu + 2 * q.b * xu, a * xl * xl + 2 * q.b * xl)
        worst = phi.sum() + q.c
        margin = -worst / (2 * len(slots))
        for j in slots:
            i = aux[j][1]
            sv[j] = phi[i] + margin
    return np.concatenate([z, sv])


# ---------------------------------------------------------------------------
# strictly feasible start


class InitMethod(str, enum.Enum):
    BBOX = "bbox"
    SIMPLEX = "simplex"


def _open_box(s, center, half, scale):
    """Grow the box center +- delta * half along delta from 0.

    Halve delta from 1 until the box is strictly inside, then locate the
    largest feasible delta by bisection and return the box at half of it.
    """
    margin = 1e-10 * scale

    def ok(delta):
        return np.all(box_residuals(s, center - delta * half, center + delta * half) < -margin)

    delta = 1.0
    for _ in range(60):
        if ok(delta):
            break
        delta *= 0.5
    else:
        raise InfeasibleError("no strictly feasible box found after 60 halvings; the interior may be empty")
    lo, hi = delta, 2.0 * delta
    while ok(hi) and hi < 1e6:
        lo, hi = hi, 2.0 * hi
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    delta = 0.5 * lo
    if not ok(delta):
        delta = lo
    return center - delta * half, center + delta * half


def _strict_center(s, m, scale):
    """Move ``m`` towards a known interior point until it is strictly inside."""
    margin = 1e-10 * scale
    if np.all(s.residuals(m) < -margin):
        return m
    xi = s.interior
    lam = 0.5
    for _ in range(60):
        c = m + lam * (xi - m)
        if np.all(s.residuals(c) < -margin):
            return c
        lam = 0.5 * (1.0 + lam)
    return xi


def _affine_basis_points(s):
    """d+1 affinely independent boundary points (support points)."""
    d = s.dim
    if s.polygon is not None:
        V = s.polygon.vertices
        return np.array([V[0], V[1], V[2]])
    pts = [support_point(s, -np.ones(d))]
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1.0
        for cand in (support_point(s, e), support_point(s, -e)):
            trial = np.array(pts + [cand])
            if np.linalg.matrix_rank(trial[1:] - trial[0], tol=1e-9 * s.scale) == len(pts):
                pts.append(cand)
                break
        if len(pts) == d + 1:
            break
    if len(pts) < d + 1:
        raise InfeasibleError("could not find d+1 affinely independent boundary points")
    return np.array(pts)


def initial_feasible(set_, method="bbox", problem=None):
    """Strictly feasible (xu, xl[, s]) for the MVAIR model and the method used.

    ``bbox``: centre of the set's bounding box (moved towards an interior
    point if it is not strictly inside), opened along (w, -w)/2 in
    (xu, xl) coordinates, which is orthogonal to the bounding-box diagonal of
    the pair space.  ``simplex``: midpoint of the centroids of two facets of a
    simplex spanned by boundary points, opened the same way with the spread
    of the two centroids as widths.
    """
    s = as_set(set_)
    method = InitMethod(method)
    problem = problem if problem is not None else build_mvair(s)
    bb = s.bbox
    scale = s.scale
    if method is InitMethod.BBOX:
        center = _strict_center(s, bb.center, scale)
        half = 0.5 * bb.widths
    else:
        p = _affine_basis_points(s)
        d = s.dim
        y1 = p[:d].mean(axis=0)
        y2 = np.vstack([p[:1], p[2:]]).mean(axis=0)
        center = _strict_center(s, 0.5 * (y1 + y2), scale)
        half = 0.5 * np.maximum(np.abs(y2 - y1), 1e-3 * bb.widths)
    xl, xu = _open_box(s, center, half, scale)
    x0 = lift(problem, s, xl, xu)
    if not problem.is_strictly_feasible(x0):
        raise InfeasibleError("constructed start is not strictly feasible")
    return x0, method


def solve_mvair(set_, cfg: SolverConfig | None = None, separable=True, init="bbox"):
    """Maximum-volume axis-aligned box inside the set.

    Returns ``(BoxRegion, SolverReport)``.
    """
    s = as_set(set_)
    cfg = cfg or SolverConfig()
    prob = build_mvair(s, separable)
    x0, _ = initial_feasible(s, init, prob)
    rep = path_follow(prob, x0, cfg)
    d = s.dim
    return BoxRegion(rep.x_star[d : 2 * d], rep.x_star[:d]), rep


def volume_ratio(box: BoxRegion, set_area):
    return box.volume / set_area if set_area and math.isfinite(set_area) else math.nan
