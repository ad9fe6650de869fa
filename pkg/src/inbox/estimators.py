"""scikit-learn style wrappers.

``fit`` accepts either a point cloud (the set is its convex hull) or a
:class:`~inbox.convexset.ConvexSet`; the fitted box or rectangle then acts as
an inlier region: ``predict`` returns +1 inside and -1 outside, and
``decision_function`` the signed distance to its boundary (positive inside).
"""
from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull
from sklearn.base import BaseEstimator, OutlierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .barrier import SolverConfig
from .convexset import ConvexSet, LinearIneq, from_polygon
from .errors import InputError
from .mair2d import mair_sweep
from .mvair import solve_mvair


def _as_convex_set(X):
    if isinstance(X, ConvexSet):
        return X
    X = check_array(X, ensure_min_samples=3)
    d = X.shape[1]
    if d == 1:
        raise InputError("need at least two features")
    hull = ConvexHull(X)
    if d == 2:
        # scipy lists 2-D hull vertices counter-clockwise
        return from_polygon(X[hull.vertices])
    # facet equations are n . x + c <= 0 with unit normals
    eq = np.unique(np.round(hull.equations, 12), axis=0)
    return ConvexSet(d, tuple(LinearIneq(row[:-1], -row[-1]) for row in eq))


def _box_margin(xl, xu, X):
    """Signed distance to the box boundary, positive inside."""
    inside = np.minimum(X - xl, xu - X)
    out = np.maximum(np.maximum(xl - X, X - xu), 0.0)
    return np.where(np.all(inside >= 0, axis=1), inside.min(axis=1), -np.linalg.norm(out, axis=1))


class InscribedBox(OutlierMixin, BaseEstimator):
    """Largest axis-aligned box inside the convex hull of the training data.

    Parameters
    ----------
    eps : float
        Duality-gap target of the barrier solve.
    mu : float or "auto"
        Barrier increase factor.
    tau0 : float
        Initial barrier parameter.
    """

    def __init__(self, eps=1e-8, mu=10.0, tau0=1.0):
        self.eps = eps
        self.mu = mu
        self.tau0 = tau0

    def fit(self, X, y=None):
        s = _as_convex_set(X)
        box, rep = solve_mvair(s, SolverConfig(tau0=self.tau0, mu=self.mu, eps=self.eps))
        self.set_ = s
        self.box_ = box
        self.volume_ = box.volume
        self.report_ = rep
        self.n_features_in_ = s.dim
        return self

    def decision_function(self, X):
        check_is_fitted(self, "box_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise InputError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return _box_margin(self.box_.xl, self.box_.xu, X)

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1)


class InscribedRectangle(OutlierMixin, BaseEstimator):
    """Largest rectangle of any orientation inside a planar convex hull.

    Parameters
    ----------
    eps : float
        Relative accuracy of the direction sweep.
    threads : int
        Worker threads for the sweep; the result does not depend on it.
    refine : bool
        Search locally around the best sampled angle.
    """

    def __init__(self, eps=0.01, threads=1, refine=True):
        self.eps = eps
        self.threads = threads
        self.refine = refine

    def fit(self, X, y=None):
        s = _as_convex_set(X)
        if s.dim != 2:
            raise InputError("InscribedRectangle needs 2-D data")
        rect, samples = mair_sweep(s, self.eps, threads=self.threads, refine=self.refine)
        self.set_ = s
        self.rectangle_ = rect
        self.area_ = rect.area
        self.samples_ = samples
        self.n_features_in_ = 2
        return self

    def decision_function(self, X):
        check_is_fitted(self, "rectangle_")
        X = check_array(X)
        if X.shape[1] != 2:
            raise InputError(f"X has {X.shape[1]} features, expected 2")
        r = self.rectangle_
        a, b = r.sides
        E = np.array([r.u / a, r.v / b])
        local = (X - r.x) @ E.T
        return _box_margin(np.zeros(2), np.array([a, b]), local)

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1)
