import math

import numpy as np
import pytest

from inbox import barrier
from inbox.barrier import (
    BarrierProblem,
    FunctionConstraint,
    LinearConstraints,
    LinearObjective,
    LogSumObjective,
    QuadraticConstraints,
    SolverConfig,
    Termination,
    center,
    gamma_bound,
    newton_decrement,
    path_follow,
)
from inbox.convexset import hypercube, random_convex_polygon
from inbox.errors import ConditioningError, InputError, UnboundedError
from inbox.mvair import build_mvair, initial_feasible


def interval_problem():
    """Box [l, u] in [0, 1]: maximize log(u - l) with u < 1 and l > 0; x = (l, u)."""
    return BarrierProblem(
        2,
        LogSumObjective([[-1.0, 1.0]]),
        (LinearConstraints([[0.0, 1.0], [-1.0, 0.0]], [1.0, 0.0]),),
    )


def polygon_problem(seed=3, n=9):
    s = random_convex_polygon(n, seed)
    prob = build_mvair(s)
    x0, _ = initial_feasible(s, problem=prob)
    return prob, x0


def _decrement_at(prob, x, tau):
    state = barrier._State(prob, np.asarray(x, dtype=float))
    g, H = barrier._gradient_hessian(prob, state, tau)
    lam, _ = newton_decrement(g, H)
    return lam


# --- newton decrement


def test_newton_decrement_stationary():
    lam, step = newton_decrement(np.zeros(3), np.diag([1.0, 2.0, 3.0]))
    assert lam == 0.0 and np.all(step == 0)


def test_newton_decrement_identity():
    lam, step = newton_decrement([3.0, 4.0], np.eye(2))
    assert lam == pytest.approx(5.0)
    assert np.allclose(step, [-3, -4])


def test_newton_decrement_diagonal():
    lam, step = newton_decrement([4.0, 1.0], np.diag([4.0, 1.0]))
    assert np.allclose(step, [-1, -1])
    assert lam == pytest.approx(math.sqrt(5))


def test_newton_decrement_singular():
    with pytest.raises(ConditioningError):
        newton_decrement([1.0, 1.0], np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_newton_decrement_indefinite():
    with pytest.raises(ConditioningError):
        newton_decrement([1.0, 1.0], np.diag([1.0, -1.0]))


# --- centering


@pytest.mark.parametrize("tau", [1.0, 3.0, 40.0, 1e4])
def test_center_interval_closed_form(tau):
    prob = interval_problem()
    x, _ = center(prob, [0.2, 0.9], tau, SolverConfig(kappa=1e-20))
    assert x == pytest.approx([1 / (tau + 2), (tau + 1) / (tau + 2)], abs=1e-8)


def test_center_decrement_contract():
    prob = interval_problem()
    cfg = SolverConfig()
    x, _ = center(prob, [0.2, 0.9], 5.0, cfg)
    assert _decrement_at(prob, x, 5.0) <= math.sqrt(2 * cfg.kappa)


def test_center_start_near_boundary():
    prob = interval_problem()
    x, steps = center(prob, [1e-12, 0.5], 1.0, SolverConfig(kappa=1e-20))
    assert steps > 0
    assert np.all(prob.constraint_values(x) < 0)
    assert x == pytest.approx([1 / 3, 2 / 3], abs=1e-8)


def test_center_monotone_and_feasible(monkeypatch):
    prob, x0 = polygon_problem()
    seen = []
    orig = barrier._line_search

    def spy(problem, state, step, lam2, tau, cfg):
        s, new = orig(problem, state, step, lam2, tau, cfg)
        seen.append((problem.barrier_value(state.x, tau), problem.barrier_value(new.x, tau), new.x.copy()))
        return s, new

    monkeypatch.setattr(barrier, "_line_search", spy)
    center(prob, x0, 10.0)
    assert seen
    for before, after, x in seen:
        assert after < before
        assert prob.is_strictly_feasible(x)


def test_center_step_budget():
    prob, x0 = polygon_problem()
    with pytest.raises(barrier.StepBudgetExceeded) as err:
        center(prob, x0, 1e6, budget=2)
    assert prob.is_strictly_feasible(err.value.x)


# --- path following


def test_path_follow_interval_limit():
    prob = interval_problem()
    rep = path_follow(prob, [0.2, 0.9], SolverConfig(eps=1e-8))
    l, u = rep.x_star
    assert rep.termination is Termination.CONVERGED
    assert abs(rep.f0_star) <= 1e-7
    assert l == pytest.approx(0.0, abs=1e-7) and u == pytest.approx(1.0, abs=1e-7)


def test_path_follow_square_volume():
    s = hypercube(2)
    prob = build_mvair(s)
    x0, _ = initial_feasible(s, problem=prob)
    rep = path_follow(prob, x0)
    assert math.exp(rep.f0_star) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("engine", ["python", "compiled"])
def test_gap_contract(engine):
    prob, x0 = polygon_problem()
    cfg = SolverConfig(eps=1e-7)
    rep = path_follow(prob, x0, cfg, engine=engine)
    assert rep.termination is Termination.CONVERGED
    assert rep.gap <= cfg.eps
    assert rep.gap == pytest.approx(prob.n_barrier / rep.tau_final)


def test_infeasible_start_names_constraint():
    prob = interval_problem()
    with pytest.raises(InputError, match="constraint 1"):
        path_follow(prob, [-0.1, 0.5])


def test_start_outside_objective_domain():
    prob = interval_problem()
    with pytest.raises(InputError):
        path_follow(prob, [0.6, 0.5])


def test_unbounded_detected():
    prob = BarrierProblem(1, LinearObjective([1.0]), (LinearConstraints([[-1.0]], [0.0]),))
    for engine in ("python", "compiled"):
        with pytest.raises(UnboundedError):
            path_follow(prob, [1.0], engine=engine)


def test_step_budget_reported():
    prob, x0 = polygon_problem()
    with pytest.warns(RuntimeWarning):
        rep = path_follow(prob, x0, SolverConfig(max_newton=5), engine="python")
    assert rep.termination is Termination.STEP_BUDGET
    assert rep.newton_steps == 5
    assert prob.is_strictly_feasible(rep.x_star)


def test_callback_sees_every_tau():
    prob = interval_problem()
    taus = []
    rep = path_follow(prob, [0.2, 0.9], SolverConfig(eps=1e-4), callback=lambda t, x: taus.append(t))
    assert len(taus) == rep.outer_iters
    assert all(b > a for a, b in zip(taus, taus[1:]))


@pytest.mark.parametrize("seed", range(5))
def test_engines_agree(seed):
    prob, x0 = polygon_problem(seed, 6 + seed)
    a = path_follow(prob, x0, engine="python")
    b = path_follow(prob, x0, engine="compiled")
    assert a.newton_steps == b.newton_steps
    assert a.outer_iters == b.outer_iters
    assert np.allclose(a.x_star, b.x_star, rtol=0, atol=1e-9)


def test_engines_agree_quadratic():
    Q = np.array([np.eye(2), np.diag([1.0, 4.0])])
    prob = BarrierProblem(2, LinearObjective([1.0, 0.5]), (QuadraticConstraints(Q, [[0, 0], [0.2, 0]], [-1.0, -1.0]),))
    a = path_follow(prob, [0.0, 0.0], engine="python")
    b = path_follow(prob, [0.0, 0.0], engine="compiled")
    assert np.allclose(a.x_star, b.x_star, atol=1e-9)
    assert a.newton_steps == b.newton_steps


def test_function_constraint_matches_quadratic():
    quad = BarrierProblem(2, LinearObjective([1.0, 2.0]), (QuadraticConstraints(np.eye(2), [0, 0], [-1.0]),))
    fun = BarrierProblem(
        2,
        LinearObjective([1.0, 2.0]),
        (FunctionConstraint(lambda x: x @ x - 1.0, lambda x: 2 * x, lambda x: 2 * np.eye(2)),),
    )
    a = path_follow(quad, [0.0, 0.0])
    b = path_follow(fun, [0.0, 0.0])
    assert np.allclose(a.x_star, b.x_star, atol=1e-7)
    assert np.allclose(b.x_star, np.array([1, 2]) / math.sqrt(5), atol=1e-7)


@pytest.mark.parametrize("mu", [2.0, 10.0, "auto"])
def test_mu_invariance(mu):
    prob, x0 = polygon_problem(8, 12)
    cfg = SolverConfig(mu=mu)
    ref = path_follow(prob, x0, SolverConfig(mu=10.0))
    rep = path_follow(prob, x0, cfg)
    assert abs(rep.f0_star - ref.f0_star) <= 10 * cfg.eps


def test_affine_invariance():
    prob, x0 = polygon_problem(4, 7)
    rng = np.random.default_rng(0)
    T = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
    assert abs(np.linalg.det(T)) > 0.1
    Tinv = np.linalg.inv(T)
    (blk,) = prob.constraints
    moved = BarrierProblem(
        4,
        LogSumObjective(prob.objective.rows @ T),
        (LinearConstraints(blk.A @ T, blk.b),),
    )
    a = path_follow(prob, x0, engine="python")
    b = path_follow(moved, Tinv @ x0, engine="python")
    assert abs(a.newton_steps - b.newton_steps) <= 2
    assert np.allclose(T @ b.x_star, a.x_star, atol=1e-6)


def test_compiled_engine_rejects_function_blocks():
    prob = BarrierProblem(1, LinearObjective([1.0]), (FunctionConstraint(lambda x: x[0] - 1, lambda x: [1.0], lambda x: [[0.0]]),))
    with pytest.raises(InputError):
        path_follow(prob, [0.0], engine="compiled")


# --- gamma and config


def test_gamma_bound_reference_value():
    g = gamma_bound(0.2, 0.9)
    assert g == pytest.approx(0.003522, abs=1e-6)
    assert 1 / (2 * g) < 142
    assert 1 / (2 * g) == pytest.approx(141.97, abs=0.01)


def test_gamma_bound_other():
    assert gamma_bound(0.25, 0.5) == pytest.approx(0.25 * 0.5 * 0.25 / 18)
    assert gamma_bound(1e-9, 0.5) < 1e-9


@pytest.mark.parametrize("alpha, beta", [(0.0, 0.5), (0.5, 0.5), (0.2, 1.0), (0.2, 0.0)])
def test_gamma_bound_range(alpha, beta):
    with pytest.raises(InputError):
        gamma_bound(alpha, beta)


@pytest.mark.parametrize(
    "kw",
    [{"tau0": 0}, {"mu": 1.0}, {"mu": "fast"}, {"eps": 0}, {"alpha": 0.6}, {"beta": 1.5}, {"kappa": -1}, {"max_newton": 0}],
)
def test_config_validation(kw):
    with pytest.raises(InputError):
        SolverConfig(**kw)


def test_config_defaults_and_auto_mu():
    cfg = SolverConfig()
    assert (cfg.alpha, cfg.beta, cfg.eps, cfg.kappa, cfg.max_newton) == (0.2, 0.9, 1e-8, 1e-10, 5000)
    assert SolverConfig(mu="auto").resolve_mu(16) == pytest.approx(1.25)


def test_report_to_dict():
    rep = path_follow(interval_problem(), [0.2, 0.9])
    d = rep.to_dict()
    assert d["termination"] == "Converged"
    assert set(d) == {"f0_star", "gap", "outer_iters", "newton_steps", "termination"}


# --- rounding floor


def test_noise_floor_negligible_when_slack():
    prob = interval_problem()
    state = barrier._State(prob, np.array([0.25, 0.75]))
    assert barrier.noise_floor(prob, state) < 1e-28


@pytest.mark.parametrize("engine", ["python", "compiled"])
def test_fine_polygon_converges_at_large_tau(engine):
    # a 400-gon direction whose last centering sits at the rounding floor of
    # the active slacks (about 1e-11); without the floor rule it cycles
    from inbox.convexset import from_polygon
    from inbox.mair2d import _seed, build_qt, start_point

    th = np.linspace(0, 2 * math.pi, 400, endpoint=False)
    s = from_polygon(np.c_[np.cos(th), np.sin(th)])
    t = 0.17296517616690413
    prob = build_qt(s, t)
    rep = path_follow(prob, start_point(_seed(s), t), engine=engine)
    assert rep.termination is Termination.CONVERGED
    assert rep.newton_steps < 200


@pytest.mark.parametrize("engine", ["python", "compiled"])
def test_sliding_optimum_converges(engine):
    # at this slope the best rectangle can slide along two parallel edges, so
    # the Hessian is singular to rounding along the slide at large tau
    from inbox.convexset import regular_polygon
    from inbox.mair2d import _seed, build_qt, start_point

    s = regular_polygon(6, phase=0.2)
    t = -0.9959493098853
    rep = path_follow(build_qt(s, t), start_point(_seed(s), t), engine=engine)
    assert rep.termination is Termination.CONVERGED
    assert rep.gap <= SolverConfig().eps
