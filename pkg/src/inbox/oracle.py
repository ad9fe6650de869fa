"""Brute-force baselines: grid search for inscribed rectangles, Monte-Carlo area.

Nothing here uses the barrier solver; containment is decided from exact line
chords of the set.  Every rectangle returned is a certified lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convexset import as_set, chord, contains_all
from .errors import InputError
from .mair2d import Rectangle2D


@dataclass(frozen=True)
class GridSpec:
    anchor_steps: int = 64
    size_steps: int = 64
    angle_steps: int = 64

    def __post_init__(self):
        for name in ("anchor_steps", "size_steps", "angle_steps"):
            if int(getattr(self, name)) < 2:
                raise InputError(f"{name} must be at least 2")


def _extent(s, e):
    """(min, max) of e . x over the set, exactly for polygons."""
    if s.polygon is not None:
        proj = s.polygon.vertices @ e
        return float(proj.min()), float(proj.max())
    from .convexset import support_point

    return float(e @ support_point(s, -e)), float(e @ support_point(s, e))


def _best_in_frame(s, theta, grid, tol=0.0):
    """Best grid rectangle with edge directions (cos, sin) theta and its normal.

    Lower-left anchors run over ``anchor_steps`` x ``anchor_steps`` points of
    the rotated bounding box and widths over ``k * W / size_steps``; for each
    (anchor, width) the height is the largest one keeping all four corners
    inside, read off the chords through the two lower corners.
    """
    e1 = np.array([math.cos(theta), math.sin(theta)])
    e2 = np.array([-e1[1], e1[0]])
    lo1, hi1 = _extent(s, e1)
    lo2, hi2 = _extent(s, e2)
    W1, W2 = hi1 - lo1, hi2 - lo2
    A, S = int(grid.anchor_steps), int(grid.size_steps)
    a1 = lo1 + W1 * np.arange(A) / A
    a2 = lo2 + W2 * np.arange(A) / A
    G1, G2 = np.meshgrid(a1, a2, indexing="ij")
    anchors = G1.reshape(-1, 1) * e1 + G2.reshape(-1, 1) * e2
    clo, chi = chord(s, anchors, e2)
    inside = (clo <= 0) & (chi >= 0)
    anchors, h_a = anchors[inside], chi[inside]
    if anchors.shape[0] == 0:
        return 0.0, None
    widths = W1 * np.arange(1, S + 1) / S
    B = anchors[:, None, :] + widths[None, :, None] * e1
    blo, bhi = chord(s, B.reshape(-1, 2), e2)
    blo = blo.reshape(B.shape[:2])
    bhi = bhi.reshape(B.shape[:2])
    ok = (blo <= 0) & (bhi >= 0)
    h = np.minimum(h_a[:, None], bhi)
    # shave a relative 1e-12 so the corners pass an exact containment test
    h = np.where(ok & (h > 0), h * (1.0 - 1e-12), 0.0)
    area = h * widths[None, :]
    order = np.argsort(-area, axis=None, kind="stable")
    for flat in order[:64]:
        i, k = np.unravel_index(flat, area.shape)
        if area[i, k] <= 0:
            break
        rect = Rectangle2D(anchors[i], widths[k] * e1, h[i, k] * e2)
        if np.all(contains_all(s, rect.corners(), tol)):
            return float(area[i, k]), rect
    return 0.0, None


def brute_maair(set_, t, grid: GridSpec | None = None):
    """Grid-search lower bound on the largest rectangle with slope ``t``.

    Returns ``(area, Rectangle2D or None)``.
    """
    s = as_set(set_)
    if s.dim != 2:
        raise InputError("the rectangle oracle needs a 2-D set")
    if not abs(float(t)) <= 1.0:
        raise InputError(f"slope t={t} lies outside [-1, 1]")
    return _best_in_frame(s, math.atan(float(t)), grid or GridSpec())


def brute_mair(set_, grid: GridSpec | None = None):
    """Grid-search lower bound on the largest rectangle of any orientation.

    Angles are ``angle_steps`` evenly spaced values in [-pi/4, pi/4]; ties go
    to the smaller angle.
    """
    s = as_set(set_)
    grid = grid or GridSpec()
    best_area, best_rect = 0.0, None
    for theta in np.linspace(-math.pi / 4, math.pi / 4, int(grid.angle_steps)):
        a, r = _best_in_frame(s, float(theta), grid)
        if a > best_area + 1e-12 * max(1.0, best_area):
            best_area, best_rect = a, r
    return best_area, best_rect


def monte_carlo_area(set_, samples=100_000, seed=0, chunk=200_000):
    """Rejection-sampling area estimate inside the bounding box.

    Returns ``(estimate, standard error)``; deterministic for a given seed.
    """
    s = as_set(set_)
    samples = int(samples)
    if samples < 100:
        raise InputError("monte_carlo_area needs at least 100 samples")
    bb = s.bbox
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        m = min(left, chunk)
        X = bb.xl + rng.random((m, s.dim)) * bb.widths
        hits += int(np.count_nonzero(contains_all(s, X)))
        left -= m
    p = hits / samples
    vol = bb.volume
    return p * vol, vol * math.sqrt(p * (1.0 - p) / samples)
