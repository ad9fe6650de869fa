"""Logarithmic-barrier path-following interior-point solver.

A :class:`BarrierProblem` maximizes a concave objective ``f0`` over the open
region where every constraint ``g_i(x) < 0``.  The solver traces the central
path by minimizing

    F(x) = -tau * f0(x) - sum_i log(-g_i(x))

with damped Newton steps for an increasing sequence of ``tau``.  Problems are
tiny (a handful of variables), so every Newton system is solved densely.

Constraint blocks know how to evaluate value/Jacobian/Hessian, how far a step
may go before leaving the domain, and how to evaluate the *change* in their
values along a direction.  The line search works on those increments rather
than on differences of large F values, which keeps the Armijo test meaningful
when ``tau`` reaches 1e9 and beyond.
"""
from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from . import _kernel
from .errors import ConditioningError, InputError, UnboundedError

logger = logging.getLogger(__name__)

_MIN_STEP = 1e-16
PIVOT_TOL = 1e-12
# A backtracking failure with lambda^2/2 below this counts as centred to
# working precision.  It happens when the optimum has a flat face (a rectangle
# that can slide): the Hessian is then singular to rounding along the face and
# the computed decrement is inflated.  Off-centre by lambda <= 0.045 adds at most
# a relative 0.05/sqrt(m) to the m/tau gap bound.
STALL_KAPPA = 1e-3
_DIVERGENCE_NORM = 1e9


class Termination(str, enum.Enum):
    CONVERGED = "Converged"
    STEP_BUDGET = "StepBudget"
    LINE_SEARCH_STALL = "LineSearchStall"


class StepBudgetExceeded(RuntimeError):
    def __init__(self, x, steps):
        super().__init__(f"Newton step budget exhausted after {steps} steps")
        self.x = x
        self.steps = steps


class LineSearchStall(RuntimeError):
    def __init__(self, x, steps):
        super().__init__("backtracking step fell below 1e-16")
        self.x = x
        self.steps = steps


# ---------------------------------------------------------------------------
# objectives


class LinearObjective:
    """f0(x) = c . x"""

    def __init__(self, c):
        self.c = np.asarray(c, dtype=float)

    def value(self, x):
        return float(self.c @ x)

    def derivatives(self, x):
        return self.c, None

    def max_step(self, x, d):
        return math.inf

    def increment(self, x, d, s):
        return s * float(self.c @ d)

    def in_domain(self, x):
        return True


class LogSumObjective:
    """f0(x) = sum_j log(a_j . x), defined where every a_j . x > 0.

    Used for box volumes (a_j = e_upper - e_lower) and for the rectangle
    edge lengths of the fixed-direction model (a_j = e_k).
    """

    def __init__(self, rows):
        self.rows = np.atleast_2d(np.asarray(rows, dtype=float))

    def value(self, x):
        w = self.rows @ x
        if np.any(w <= 0):
            return -math.inf
        return float(np.sum(np.log(w)))

    def derivatives(self, x):
        w = self.rows @ x
        r = self.rows / w[:, None]
        return r.sum(axis=0), -(r.T @ r)

    def max_step(self, x, d):
        w = self.rows @ x
        dw = self.rows @ d
        neg = dw < 0
        if not np.any(neg):
            return math.inf
        return float(np.min(w[neg] / -dw[neg]))

    def increment(self, x, d, s):
        return float(np.sum(np.log1p(s * (self.rows @ d) / (self.rows @ x))))

    def in_domain(self, x):
        return bool(np.all(self.rows @ x > 0))


# ---------------------------------------------------------------------------
# constraint blocks


class LinearConstraints:
    """Rows g_i(x) = A_i . x - b_i."""

    def __init__(self, A, b, labels=None):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.b = np.asarray(b, dtype=float).reshape(-1)
        if self.A.shape[0] != self.b.shape[0]:
            raise InputError("linear block: A and b row counts differ")
        self.labels = labels

    def __len__(self):
        return self.A.shape[0]

    def values(self, x):
        return self.A @ x - self.b

    def evaluate(self, x):
        return self.A @ x - self.b, self.A

    def weighted_hessian(self, w):
        return None

    def rounding_scale(self, x):
        return np.abs(self.b) + np.abs(self.A) @ np.abs(x)

    def directional(self, x, d, J):
        return J @ d, None

    def max_step(self, g, slope, curv):
        pos = slope > 0
        if not np.any(pos):
            return math.inf
        return float(np.min(-g[pos] / slope[pos]))

    @staticmethod
    def increment(slope, curv, s):
        return s * slope


class QuadraticConstraints:
    """Rows g_k(x) = x' Q_k x + q_k . x + r_k with every Q_k PSD."""

    def __init__(self, Q, q, r, labels=None):
        self.Q = np.asarray(Q, dtype=float)
        if self.Q.ndim == 2:
            self.Q = self.Q[None]
        self.q = np.atleast_2d(np.asarray(q, dtype=float))
        self.r = np.asarray(r, dtype=float).reshape(-1)
        if not (self.Q.shape[0] == self.q.shape[0] == self.r.shape[0]):
            raise InputError("quadratic block: Q, q, r row counts differ")
        self._hess = 2.0 * self.Q
        self.S = np.array([_psd_sqrt(Qk) for Qk in self.Q]) if len(self.Q) else np.zeros((0,) + self.Q.shape[1:])
        self.labels = labels

    def __len__(self):
        return self.Q.shape[0]

    def values(self, x):
        Qx = self.Q @ x
        return Qx @ x + self.q @ x + self.r

    def evaluate(self, x):
        Qx = self.Q @ x
        return Qx @ x + self.q @ x + self.r, 2.0 * Qx + self.q

    def weighted_hessian(self, w):
        return np.tensordot(w, self._hess, axes=1)

    def rounding_scale(self, x):
        ax = np.abs(x)
        return (np.abs(self.Q) @ ax) @ ax + np.abs(self.q) @ ax + np.abs(self.r)

    def directional(self, x, d, J):
        return J @ d, (self.Q @ d) @ d

    def max_step(self, g, slope, curv):
        # smallest positive root of curv*s^2 + slope*s + g with g < 0
        disc = np.sqrt(np.maximum(slope * slope - 4.0 * curv * g, 0.0))
        den = slope + disc
        with np.errstate(divide="ignore"):
            roots = np.where(den > 0, -2.0 * g / np.where(den > 0, den, 1.0), math.inf)
        return float(np.min(roots)) if roots.size else math.inf

    @staticmethod
    def increment(slope, curv, s):
        return s * slope + s * s * curv


def _psd_sqrt(Q):
    """Square factor S (rows padded with zeros) with S' S = Q for PSD Q."""
    w, V = np.linalg.eigh(0.5 * (Q + Q.T))
    w = np.where(w > 1e-15 * max(float(w.max()), 0.0), w, 0.0)
    return (V * np.sqrt(w)).T


class FunctionConstraint:
    """A single smooth convex constraint given by value/gradient/Hessian callables."""

    def __init__(self, fun, grad, hess, label=None):
        self.fun = fun
        self.grad = grad
        self.hess = hess
        self.labels = None if label is None else [label]

    def __len__(self):
        return 1

    def values(self, x):
        return np.array([float(self.fun(x))])

    def evaluate(self, x):
        return self.values(x), np.atleast_2d(np.asarray(self.grad(x), dtype=float))

    def weighted_hessian(self, w, x=None):
        return w[0] * np.asarray(self.hess(x), dtype=float)

    def directional(self, x, d, J):
        return J @ d, None

    def max_step(self, g, slope, curv):
        return math.inf


# ---------------------------------------------------------------------------
# problem / config / report


@dataclass(frozen=True, eq=False)
class BarrierProblem:
    """Maximize ``objective`` over ``{x : g(x) < 0 for every constraint row}``.

    ``groups`` optionally names the source inequality behind each block, for
    bookkeeping by the problem builders.
    """

    dim: int
    objective: object
    constraints: tuple
    groups: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @property
    def n_barrier(self):
        return sum(len(c) for c in self.constraints)

    def constraint_values(self, x):
        x = np.asarray(x, dtype=float)
        if not self.constraints:
            return np.empty(0)
        return np.concatenate([c.values(x) for c in self.constraints])

    def is_strictly_feasible(self, x):
        x = np.asarray(x, dtype=float)
        return self.objective.in_domain(x) and bool(np.all(self.constraint_values(x) < 0))

    def barrier_value(self, x, tau):
        """F(x) = -tau f0(x) - sum log(-g(x)); +inf outside the domain."""
        g = self.constraint_values(x)
        f0 = self.objective.value(np.asarray(x, dtype=float))
        if np.any(g >= 0) or not math.isfinite(f0):
            return math.inf
        return -tau * f0 - float(np.sum(np.log(-g)))


@dataclass(frozen=True)
class SolverConfig:
    tau0: float = 1.0
    mu: float | str = 10.0
    eps: float = 1e-8
    alpha: float = 0.2
    beta: float = 0.9
    kappa: float = 1e-10
    max_newton: int = 5000

    def __post_init__(self):
        if not self.tau0 > 0:
            raise InputError("tau0 must be positive")
        if isinstance(self.mu, str):
            if self.mu != "auto":
                raise InputError("mu must be a number > 1 or 'auto'")
        elif not self.mu > 1:
            raise InputError("mu must exceed 1")
        if not self.eps > 0:
            raise InputError("eps must be positive")
        if not 0 < self.alpha < 0.5:
            raise InputError("alpha must lie in (0, 0.5)")
        if not 0 < self.beta < 1:
            raise InputError("beta must lie in (0, 1)")
        if not self.kappa > 0:
            raise InputError("kappa must be positive")
        if int(self.max_newton) < 1:
            raise InputError("max_newton must be at least 1")

    def resolve_mu(self, n_barrier):
        if self.mu == "auto":
            return 1.0 + 1.0 / math.sqrt(max(n_barrier, 1))
        return float(self.mu)


@dataclass(frozen=True)
class SolverReport:
    x_star: np.ndarray
    f0_star: float
    gap: float
    outer_iters: int
    newton_steps: int
    termination: Termination
    tau_final: float = math.nan

    def to_dict(self):
        return {
            "f0_star": self.f0_star,
            "gap": self.gap,
            "outer_iters": self.outer_iters,
            "newton_steps": self.newton_steps,
            "termination": self.termination.value,
        }


# ---------------------------------------------------------------------------
# numerics


def gamma_bound(alpha, beta):
    """Guaranteed per-step decrease of F in the damped Newton phase.

    Exposed for diagnostics; the solver never uses it.

    >>> round(1 / (2 * gamma_bound(0.2, 0.9)), 2)
    141.97
    """
    if not 0 < alpha < 0.5:
        raise InputError("alpha must lie in (0, 0.5)")
    if not 0 < beta < 1:
        raise InputError("beta must lie in (0, 1)")
    return alpha * beta * (1 - 2 * alpha) ** 2 / (20 - 8 * alpha)


def _check_pivots(piv, hdiag):
    # each pivot of the factor is compared with the root of its own diagonal
    # entry, so badly scaled but well-posed systems (iterates near a face) pass
    if not np.all(np.isfinite(piv)) or np.any(np.abs(piv) <= PIVOT_TOL * np.sqrt(hdiag)):
        raise ConditioningError("Newton system is numerically singular")


def newton_decrement(g, H):
    """Solve ``H step = -g`` by Cholesky and return ``(lambda, step)``.

    Raises :class:`ConditioningError` when ``H`` is not numerically positive
    definite: some diagonal entry of the Cholesky factor is at most 1e-12
    times the square root of the matching diagonal entry of ``H``.
    """
    g = np.asarray(g, dtype=float)
    H = np.asarray(H, dtype=float)
    try:
        c, low = cho_factor(H, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"Newton system is not positive definite: {exc}") from None
    _check_pivots(np.diag(c), np.diag(H))
    step = -cho_solve((c, low), g, check_finite=False)
    lam2 = -float(g @ step)
    return math.sqrt(max(lam2, 0.0)), step


class _State:
    """Constraint values and Jacobians at the current iterate."""

    __slots__ = ("x", "parts")

    def __init__(self, problem, x):
        self.x = x
        self.parts = [blk.evaluate(x) for blk in problem.constraints]

    def feasible(self, problem):
        return problem.objective.in_domain(self.x) and all(np.all(g < 0) for g, _ in self.parts)


def _gradient_hessian(problem, state, tau):
    df, d2f = problem.objective.derivatives(state.x)
    grad = -tau * df
    H = np.zeros((problem.dim, problem.dim)) if d2f is None else -tau * d2f
    for blk, (g, J) in zip(problem.constraints, state.parts):
        w = -1.0 / g
        grad = grad + J.T @ w
        Jw = J * w[:, None]
        H = H + Jw.T @ Jw
        if isinstance(blk, FunctionConstraint):
            H = H + blk.weighted_hessian(w, state.x)
        else:
            extra = blk.weighted_hessian(w)
            if extra is not None:
                H = H + extra
    return grad, H


def _newton_factored(problem, state, tau):
    """Newton step and decrement from a square-root factor of the Hessian.

    Stacks rows M with H = M'M and a vector r with M'r equal to the barrier
    part of the gradient, then takes the Cholesky factor of H as the R of a
    QR decomposition of M.  This never forms H, whose condition number is
    the square of M's, so centering stays accurate at large tau.
    Returns None when some block has no square-root form.
    """
    x = state.x
    obj = problem.objective
    rows, rhs = [], []
    extra = None
    if isinstance(obj, LogSumObjective):
        w = obj.rows @ x
        st = math.sqrt(tau)
        rows.append(st * obj.rows / w[:, None])
        rhs.append(np.full(w.shape, -st))
    elif isinstance(obj, LinearObjective):
        extra = -tau * obj.c
    else:
        return None
    for blk, (g, J) in zip(problem.constraints, state.parts):
        if isinstance(blk, FunctionConstraint):
            return None
        inv = -1.0 / g
        rows.append(J * inv[:, None])
        rhs.append(np.ones_like(g))
        if isinstance(blk, QuadraticConstraints):
            sc = np.sqrt(2.0 * inv)
            rows.append((blk.S * sc[:, None, None]).reshape(-1, problem.dim))
            rhs.append(np.zeros(len(blk) * blk.S.shape[1]))
    M = np.vstack(rows)
    r = np.concatenate(rhs)
    Qm, R = np.linalg.qr(M)
    try:
        _check_pivots(np.diag(R), np.einsum("ij,ij->j", M, M))
    except ConditioningError as exc:
        raise ConditioningError(str(exc), iterate=x.copy()) from None
    z = Qm.T @ r
    if extra is not None:
        z = z + solve_triangular(R, extra, trans="T", check_finite=False)
    step = -solve_triangular(R, z, check_finite=False)
    return float(z @ z), step


def _line_search(problem, state, step, lam2, tau, cfg):
    """Backtracking on F with infeasible trial points scored +inf.

    Returns the accepted step size and the new state.
    """
    x = state.x
    obj = problem.objective
    s_max = obj.max_step(x, step)
    dirs = []
    for blk, (g, J) in zip(problem.constraints, state.parts):
        slope, curv = blk.directional(x, step, J)
        dirs.append((slope, curv))
        s_max = min(s_max, blk.max_step(g, slope, curv))

    s = 1.0
    while s >= s_max and s >= _MIN_STEP:
        s *= cfg.beta
    while s >= _MIN_STEP:
        dF = -tau * obj.increment(x, step, s)
        ok = True
        for blk, (g, _), (slope, curv) in zip(problem.constraints, state.parts, dirs):
            if isinstance(blk, FunctionConstraint):
                g_new = blk.values(x + s * step)
                if np.any(g_new >= 0):
                    ok = False
                    break
                ratio = (g_new - g) / g
            else:
                ratio = blk.increment(slope, curv, s) / g
                if np.any(ratio <= -1.0):
                    ok = False
                    break
            dF -= float(np.sum(np.log1p(ratio)))
        if ok and dF <= -cfg.alpha * s * lam2:
            new = _State(problem, x + s * step)
            if new.feasible(problem):
                return s, new
        s *= cfg.beta
    return 0.0, state


def noise_floor(problem, state):
    """Squared Newton decrement that rounding in the constraint values alone can produce.

    A value g_i = A_i x - b_i carries an absolute error of about
    u * (|b_i| + |A_i| |x|), i.e. a relative error that blows up as the slack
    shrinks like 1/tau.  Centering cannot resolve a decrement below this.
    """
    u = np.finfo(float).eps
    total = 0.0
    for blk, (g, _) in zip(problem.constraints, state.parts):
        scale = getattr(blk, "rounding_scale", None)
        if scale is not None:
            total += float(np.sum((u * scale(state.x) / g) ** 2))
    return total


def _center(problem, state, tau, cfg, budget):
    steps = 0
    while True:
        fac = _newton_factored(problem, state, tau)
        if fac is None:
            grad, H = _gradient_hessian(problem, state, tau)
            try:
                lam, step = newton_decrement(grad, H)
            except ConditioningError as exc:
                raise ConditioningError(str(exc), iterate=state.x.copy()) from None
            lam2 = lam * lam
        else:
            lam2, step = fac
        logger.debug("newton tau=%.6g lambda2=%.3e", tau, lam2)
        if lam2 / 2.0 <= cfg.kappa or lam2 <= noise_floor(problem, state):
            return state, steps
        if steps >= budget:
            raise StepBudgetExceeded(state.x, steps)
        s, new = _line_search(problem, state, step, lam2, tau, cfg)
        steps += 1
        if s == 0.0:
            if lam2 / 2.0 <= STALL_KAPPA:
                return state, steps
            raise LineSearchStall(state.x, steps)
        state = new
        if not np.all(np.abs(state.x) < _DIVERGENCE_NORM):
            raise UnboundedError("barrier iterate diverged (norm above 1e9); the set looks unbounded")


def center(problem, x0, tau, cfg=None, budget=None):
    """Minimize F(.) for fixed ``tau`` by damped Newton from ``x0``.

    Returns ``(x_star, steps)``.  Raises :class:`StepBudgetExceeded` or
    :class:`LineSearchStall` (both carrying the last iterate) when the
    centering cannot finish.
    """
    cfg = cfg or SolverConfig()
    x0 = np.asarray(x0, dtype=float).copy()
    _check_start(problem, x0)
    state = _State(problem, x0)
    state, steps = _center(problem, state, tau, cfg, cfg.max_newton if budget is None else budget)
    return state.x, steps


def _check_start(problem, x):
    if x.shape != (problem.dim,):
        raise InputError(f"start point has shape {x.shape}, expected ({problem.dim},)")
    if not problem.objective.in_domain(x):
        raise InputError("start point lies outside the objective's domain")
    offset = 0
    for blk in problem.constraints:
        g = blk.values(x)
        bad = np.flatnonzero(g >= 0)
        if bad.size:
            raise InputError(
                f"start point is not strictly feasible: constraint {offset + int(bad[0])} "
                f"has value {g[bad[0]]:.3e}"
            )
        offset += len(blk)


def next_tau(tau, mu, m, eps):
    """tau * mu, but never beyond the smallest tau that meets the gap target.

    Overshooting the final tau by up to a factor mu buys nothing and pushes
    the centering closer to the limits of double precision.
    """
    return min(tau * mu, max(tau, (m / eps) * (1.0 + 1e-9)))


def _canonical_arrays(problem):
    """Flatten a problem of linear/quadratic blocks for the compiled kernel.

    Returns None when some block or the objective has no flat form.
    """
    n = problem.dim
    obj = problem.objective
    if isinstance(obj, LogSumObjective):
        kind, R, c = _kernel.OBJ_LOGSUM, obj.rows, np.zeros(n)
    elif isinstance(obj, LinearObjective):
        kind, R, c = _kernel.OBJ_LINEAR, np.zeros((0, n)), obj.c
    else:
        return None
    lin = [blk for blk in problem.constraints if isinstance(blk, LinearConstraints)]
    quad = [blk for blk in problem.constraints if isinstance(blk, QuadraticConstraints)]
    if len(lin) + len(quad) != len(problem.constraints):
        return None
    A = np.vstack([blk.A for blk in lin]) if lin else np.zeros((0, n))
    b = np.concatenate([blk.b for blk in lin]) if lin else np.zeros(0)
    Q = np.concatenate([blk.Q for blk in quad]) if quad else np.zeros((0, n, n))
    q = np.vstack([blk.q for blk in quad]) if quad else np.zeros((0, n))
    r = np.concatenate([blk.r for blk in quad]) if quad else np.zeros(0)
    S = np.concatenate([blk.S for blk in quad]) if quad else np.zeros((0, n, n))
    arrays = (R, c, A, b, Q, q, r, S)
    return (kind,) + tuple(np.ascontiguousarray(a, dtype=float) for a in arrays)


def _path_follow_compiled(problem, x, cfg, mu, flat):
    kind, R, c, A, b, Q, q, r, S = flat
    x_out, steps, outer, tau, gap, code = _kernel.path_follow_kernel(
        kind, R, c, A, b, Q, q, r, S, x, float(cfg.tau0), float(mu), float(cfg.eps),
        float(cfg.alpha), float(cfg.beta), float(cfg.kappa), int(cfg.max_newton), PIVOT_TOL, STALL_KAPPA,
    )
    if code == _kernel.CONDITIONING:
        raise ConditioningError("Newton system is numerically singular", iterate=x_out.copy())
    if code == _kernel.UNBOUNDED:
        raise UnboundedError("barrier iterate diverged (norm above 1e9); the set looks unbounded")
    termination = {
        _kernel.CONVERGED: Termination.CONVERGED,
        _kernel.STEP_BUDGET: Termination.STEP_BUDGET,
        _kernel.STALL: Termination.LINE_SEARCH_STALL,
    }[code]
    if termination is not Termination.CONVERGED:
        warnings.warn(f"barrier solve stopped: {termination.value}", RuntimeWarning, stacklevel=3)
    if outer == 0:
        gap = math.inf
    return SolverReport(
        x_star=x_out,
        f0_star=problem.objective.value(x_out),
        gap=float(gap),
        outer_iters=int(outer),
        newton_steps=int(steps),
        termination=termination,
        tau_final=float(tau),
    )


def path_follow(problem, x_init, cfg=None, callback: Callable | None = None, engine="auto"):
    """Run the barrier method from a strictly feasible ``x_init``.

    Alternates centering with ``tau *= mu`` and stops once the duality-gap
    bound ``n_barrier / tau`` drops below ``cfg.eps``.  ``callback(tau, x)``
    is invoked after every centering.

    ``engine`` selects the implementation: ``"python"`` is the reference
    loop, ``"compiled"`` the numba kernel (linear/quadratic rows only), and
    ``"auto"`` uses the kernel when it applies and no callback or debug
    logging is requested.
    """
    cfg = cfg or SolverConfig()
    x = np.asarray(x_init, dtype=float).copy()
    _check_start(problem, x)
    m = problem.n_barrier
    if m == 0:
        raise InputError("problem has no barrier constraints; the feasible region is unbounded")
    mu = cfg.resolve_mu(m)
    if engine not in ("auto", "python", "compiled"):
        raise InputError(f"unknown engine {engine!r}")
    if engine != "python":
        flat = _canonical_arrays(problem) if _kernel.path_follow_kernel is not None else None
        if engine == "compiled" and flat is None:
            raise InputError("the compiled engine needs numba and linear/quadratic constraint blocks")
        use = flat is not None and (
            engine == "compiled" or (callback is None and not logger.isEnabledFor(logging.DEBUG))
        )
        if use:
            return _path_follow_compiled(problem, x, cfg, mu, flat)
    tau = float(cfg.tau0)
    state = _State(problem, x)
    steps = 0
    outer = 0
    termination = Termination.CONVERGED
    gap = math.inf
    while True:
        try:
            state, k = _center(problem, state, tau, cfg, cfg.max_newton - steps)
        except StepBudgetExceeded as exc:
            steps += exc.steps
            termination = Termination.STEP_BUDGET
            state = _State(problem, exc.x)
            warnings.warn(f"barrier solve stopped: {exc}", RuntimeWarning, stacklevel=2)
            break
        except LineSearchStall as exc:
            steps += exc.steps
            termination = Termination.LINE_SEARCH_STALL
            state = _State(problem, exc.x)
            warnings.warn(f"barrier solve stopped: {exc}", RuntimeWarning, stacklevel=2)
            break
        steps += k
        outer += 1
        gap = m / tau
        if callback is not None:
            callback(tau, state.x)
        logger.debug("outer=%d tau=%.6g gap=%.3e steps=%d", outer, tau, gap, steps)
        if gap < cfg.eps:
            break
        tau = next_tau(tau, mu, m, cfg.eps)
    return SolverReport(
        x_star=state.x.copy(),
        f0_star=problem.objective.value(state.x),
        gap=gap,
        outer_iters=outer,
        newton_steps=steps,
        termination=termination,
        tau_final=tau,
    )


def stack_constraints(blocks: Sequence):
    """Drop empty blocks."""
    return tuple(b for b in blocks if len(b))
