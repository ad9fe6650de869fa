"""Necessary optimality conditions for largest inscribed rectangles.

These checks classify the corners of a candidate rectangle against the set
and test the structural properties any optimal rectangle must have:

* polygons: every corner is a vertex-, edge- or interior-corner, and an
  optimal rectangle has no interior corner, or one interior corner next to a
  vertex-corner, or is a square with two diagonal interior corners and two
  diagonal vertex-corners;
* centrally symmetric sets: the optimal rectangle is centred at the centre;
* axially symmetric sets: four conditions relating the rectangle to the
  symmetry axis.

They certify nothing; a failed check flags a non-optimal rectangle (or a
solver/sweep bug).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .convexset import LinearIneq, Polygon2D, as_set, chord, polygon_to_halfspaces
from .errors import InputError
from .mair2d import Rectangle2D


class CornerKind(str, enum.Enum):
    VERTEX = "VertexCorner"
    EDGE = "EdgeCorner"
    INTERIOR = "InteriorCorner"


class Case(str, enum.Enum):
    CASE1 = "Case1_NoInterior"
    CASE2 = "Case2_OneInteriorAdjacentVertex"
    CASE3 = "Case3_TwoDiagonalInteriorSquare"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class CornerClass:
    kind: CornerKind
    witness: int | None
    residual: float

    def to_json(self):
        return {"kind": self.kind.value, "witness": self.witness, "residual": self.residual}


@dataclass(frozen=True)
class OptimalityVerdict:
    case: Case
    details: tuple
    notes: tuple = ()

    @property
    def ok(self):
        return self.case is not Case.VIOLATION

    def to_json(self):
        return {
            "case": self.case.value,
            "corners": [c.to_json() for c in self.details],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class ConditionVerdict:
    condition: int
    passed: bool
    applicable: bool
    residual: float
    note: str = ""

    def to_json(self):
        return {
            "condition": self.condition,
            "passed": self.passed,
            "applicable": self.applicable,
            "residual": self.residual,
            "note": self.note,
        }


# ---------------------------------------------------------------------------
# corners


def _segment_distance(p, a, b):
    ab = b - a
    s = float(np.clip((p - a) @ ab / (ab @ ab), 0.0, 1.0))
    return float(np.linalg.norm(p - (a + s * ab)))


def boundary_distance(set_, point):
    """Approximate distance of ``point`` to the boundary of a general set.

    Each residual is divided by its gradient norm; exact for linear rows with
    the point on the boundary, first-order accurate near quadratic rows.
    """
    s = as_set(set_)
    x = np.asarray(point, dtype=float)
    best = math.inf
    for q in s.ineqs:
        if isinstance(q, LinearIneq):
            g, grad = float(q.p @ x - q.b), q.p
        else:
            g, grad = float(q.residual(x)), 2.0 * (q.A @ x + q.b)
        nrm = float(np.linalg.norm(grad))
        best = min(best, abs(g) / nrm if nrm > 0 else (0.0 if g == 0 else math.inf))
    return best


def classify_corner(poly, point, tol) -> CornerClass:
    """Vertex-, edge- or interior-corner of ``point`` in a polygon.

    A plain inequality set (no polygon) has no vertices; there a corner is an
    edge-corner when it lies within ``tol`` of the boundary.
    """
    if tol < 0:
        raise InputError("tol must be nonnegative")
    x = np.asarray(point, dtype=float)
    if isinstance(poly, Polygon2D):
        s = polygon_to_halfspaces(poly)
    else:
        s = as_set(poly)
        poly = s.polygon
    if np.any(s.residuals(x) > tol):
        raise InputError(f"point {x.tolist()} lies outside the set by more than tol")
    if poly is None:
        d = boundary_distance(s, x)
        if d <= tol:
            return CornerClass(CornerKind.EDGE, None, d)
        return CornerClass(CornerKind.INTERIOR, None, d)
    V = poly.vertices
    dv = np.linalg.norm(V - x, axis=1)
    k = int(np.argmin(dv))
    if dv[k] <= tol:
        return CornerClass(CornerKind.VERTEX, k, float(dv[k]))
    W = np.roll(V, -1, axis=0)
    de = np.array([_segment_distance(x, V[i], W[i]) for i in range(poly.n)])
    k = int(np.argmin(de))
    if de[k] <= tol:
        return CornerClass(CornerKind.EDGE, k, float(de[k]))
    return CornerClass(CornerKind.INTERIOR, None, float(de[k]))


def _is_square(rect, tol):
    a, b = rect.sides
    return abs(a - b) <= tol * max(a, b)


def check_polygon_optimality(poly, rect: Rectangle2D, tol) -> OptimalityVerdict:
    """Match the corner pattern of ``rect`` against the three optimal cases.

    Corners are taken in boundary order x, x+u, x+u+v, x+v so that corner k
    is adjacent to k+-1 and diagonal to k+2.
    """
    corners = rect.corners()
    notes = []
    try:
        cls = tuple(classify_corner(poly, c, tol) for c in corners)
    except InputError as exc:
        return OptimalityVerdict(Case.VIOLATION, (), (f"rectangle is not inscribed: {exc}",))
    interior = [k for k in range(4) if cls[k].kind is CornerKind.INTERIOR]
    vertex = [cls[k].kind is CornerKind.VERTEX for k in range(4)]
    on_boundary = [not (cls[k].kind is CornerKind.INTERIOR) for k in range(4)]

    if not interior:
        case = Case.CASE1
    elif len(interior) == 1:
        k = interior[0]
        case = Case.CASE2 if (vertex[(k - 1) % 4] or vertex[(k + 1) % 4]) else Case.VIOLATION
        if case is Case.VIOLATION:
            notes.append(f"interior corner {k} has no adjacent vertex-corner")
    elif len(interior) == 2 and interior[1] - interior[0] == 2:
        others = [k for k in range(4) if k not in interior]
        if all(vertex[k] for k in others) and _is_square(rect, tol):
            case = Case.CASE3
        else:
            case = Case.VIOLATION
            notes.append("two diagonal interior corners need two vertex-corners and a square")
    else:
        case = Case.VIOLATION
        notes.append(f"{len(interior)} interior corners in a non-admissible pattern")

    # two diagonal corners on the boundary; unless both are vertex-corners a
    # third boundary corner is needed
    diag_pairs = [(k, k + 2) for k in (0, 1) if on_boundary[k] and on_boundary[k + 2]]
    if not diag_pairs:
        notes.append("no pair of diagonal corners on the boundary")
        case = Case.VIOLATION
    elif not any(vertex[a] and vertex[b] for a, b in diag_pairs) and sum(on_boundary) < 3:
        notes.append("diagonal boundary corners are not both vertex-corners and no third corner touches")
        case = Case.VIOLATION
    # each interior corner needs both neighbours on the boundary
    for k in interior:
        if not (on_boundary[(k - 1) % 4] and on_boundary[(k + 1) % 4]):
            notes.append(f"interior corner {k} lacks two boundary neighbours")
            case = Case.VIOLATION
    return OptimalityVerdict(case, cls, tuple(notes))


def check_central_symmetry(center, rect: Rectangle2D, tol) -> bool:
    """Is the rectangle centred at ``center`` (within ``tol``)?"""
    return bool(np.linalg.norm(rect.center - np.asarray(center, dtype=float)) <= tol)


def central_offset(center, rect: Rectangle2D) -> float:
    return float(np.linalg.norm(rect.center - np.asarray(center, dtype=float)))


# ---------------------------------------------------------------------------
# axial symmetry


def sym_axis(set_, point, direction):
    """End points of the chord of the set on the line ``point + s*direction``."""
    s = as_set(set_)
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    lo, hi = chord(s, p[None], d)
    if not lo[0] <= hi[0]:
        return None
    return p + lo[0] * d, p + hi[0] * d


def _clip_length(rect, p, d):
    """Length of the part of the line p + s d inside the rectangle."""
    e1 = rect.u / np.linalg.norm(rect.u)
    e2 = rect.v / np.linalg.norm(rect.v)
    lo, hi = -math.inf, math.inf
    for e, ln in ((e1, np.linalg.norm(rect.u)), (e2, np.linalg.norm(rect.v))):
        a = float((p - rect.x) @ e)
        r = float(d @ e)
        if abs(r) < 1e-15:
            if a < 0 or a > ln:
                return 0.0
            continue
        s1, s2 = (0 - a) / r, (ln - a) / r
        lo, hi = max(lo, min(s1, s2)), min(hi, max(s1, s2))
    return max(0.0, hi - lo)


def check_axial_symmetry(axis, set_, rect: Rectangle2D, tol):
    """The four axial-symmetry conditions for ``rect`` and axis ``(point, direction)``.

    Returns a list of :class:`ConditionVerdict`.  Conditions whose hypothesis
    does not hold are reported as passed and not applicable.
    """
    point, direction = axis
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    if not np.any(d != 0):
        raise InputError("axis direction must be nonzero")
    d = d / np.linalg.norm(d)
    s = as_set(set_)
    corners = rect.corners()
    side = np.array([d[0] * (c[1] - p[1]) - d[1] * (c[0] - p[0]) for c in corners])
    out = []

    # 1: the axis crosses the interior of the rectangle
    clip = _clip_length(rect, p, d)
    crosses = bool(side.max() > tol and side.min() < -tol and clip > tol)
    out.append(ConditionVerdict(1, crosses, True, clip, "axis crosses the rectangle interior" if crosses else "axis misses the interior"))

    # 2: a boundary corner on each side unless a corner sits at an axis end
    ends = sym_axis(s, p, d)
    at_end = ends is not None and any(
        min(np.linalg.norm(c - ends[0]), np.linalg.norm(c - ends[1])) <= tol for c in corners
    )
    bdist = np.array([boundary_distance(s, c) for c in corners])
    left = bdist[side >= -tol]
    right = bdist[side <= tol]
    worst = max(left.min() if left.size else math.inf, right.min() if right.size else math.inf)
    if at_end:
        out.append(ConditionVerdict(2, True, False, worst, "a corner lies on an end of the symmetry chord"))
    else:
        out.append(ConditionVerdict(2, bool(worst <= tol), True, worst, "boundary corner on each side"))

    # 3: a square has no three corners strictly on one side
    if _is_square(rect, tol):
        n_pos = int(np.sum(side > tol))
        n_neg = int(np.sum(side < -tol))
        out.append(ConditionVerdict(3, max(n_pos, n_neg) < 3, True, float(max(n_pos, n_neg)), "corners strictly per side"))
    else:
        out.append(ConditionVerdict(3, True, False, 0.0, "not a square"))

    # 4: a diagonal on the axis forces a square or an angle in [pi/6, pi/4)
    on_axis = [k for k in range(4) if abs(side[k]) <= tol]
    if len(on_axis) >= 2:
        ang = abs(math.atan2(rect.u[0] * d[1] - rect.u[1] * d[0], rect.u @ d)) % (math.pi / 2)
        alpha = min(ang, math.pi / 2 - ang)
        ok = _is_square(rect, tol) or (math.pi / 6 - tol <= alpha < math.pi / 4 + tol)
        out.append(ConditionVerdict(4, bool(ok), True, alpha, "angle with the axis"))
    else:
        out.append(ConditionVerdict(4, True, False, 0.0, "no diagonal on the axis"))
    return out


def stretched_rhombus(delta=0.05):
    """Rhombus from the unit-diagonal square by stretching one diagonal by delta,
    and that square (diagonal on the x-axis)."""
    from .convexset import from_polygon

    a = 1.0 + delta
    rhombus = from_polygon([[-a, 0.0], [0.0, -1.0], [a, 0.0], [0.0, 1.0]])
    square = Rectangle2D([-1.0, 0.0], [1.0, -1.0], [1.0, 1.0])
    return rhombus, square


def observation_square_diagonal(L=1.0, steps=1001):
    """Area h*w over rectangles of diagonal L; returns (best angle, best area)."""
    th = np.linspace(0.0, math.pi / 2, steps)
    areas = (L * np.cos(th)) * (L * np.sin(th))
    k = int(np.argmax(areas))
    return float(th[k]), float(areas[k])
