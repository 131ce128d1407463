import math

import numpy as np
import pytest

from ballcover import covering
from ballcover.geometry import Configuration
from ballcover.optimize import (
    ALParams,
    Counters,
    NewtonParams,
    Status,
    al_solve,
    kkt_residuals,
    newton_inner,
)
from ballcover import optimize


@pytest.fixture(scope="module")
def square_solution():
    from conftest import square
    from ballcover.geometry import Region

    reg = Region.from_polygons([square()])
    return reg, al_solve(reg, Configuration(((0.3, 0.6),), 1.0))


def test_unit_square_single_ball(square_solution):
    _, res = square_solution
    assert res.status is Status.CONVERGED
    assert res.cfg.centers[0] == pytest.approx((0.5, 0.5), abs=1e-7)
    # the constraint is degenerate at the optimum, so r is only good to about sqrt(eps)
    assert res.r == pytest.approx(math.sqrt(2) / 2, abs=1e-4)
    assert res.kkt_opt <= 1e-8 and res.kkt_feas <= 1e-8


def test_converged_result_recertifies(square_solution):
    reg, res = square_solution
    opt, feas = kkt_residuals(reg, res.cfg, res.lam)
    assert opt <= 1e-8 and feas <= 1e-8
    assert opt == pytest.approx(res.kkt_opt, abs=1e-14)
    assert feas == pytest.approx(res.kkt_feas, abs=1e-14)


def test_newton_infinite_tolerance_is_identity(unit_square):
    cfg = Configuration(((0.2, 0.4),), 0.6)
    out, res = newton_inner(unit_square, cfg, 1.0, 10.0, math.inf)
    assert out is cfg and res == math.inf


def test_newton_rejects_nonpositive_tolerance(unit_square):
    with pytest.raises(ValueError):
        newton_inner(unit_square, Configuration(((0.2, 0.4),), 0.6), 1.0, 10.0, 0.0)


def test_newton_stationary_start(unit_square):
    """With λ = 0 and G ≡ 0 the subproblem gradient is e_r; nothing to do for a huge tolerance."""
    cfg = Configuration(((0.5, 0.5),), 1.0)
    c = Counters()
    out, res = newton_inner(unit_square, cfg, 0.0, 1.0, 2.0, counters=c)
    assert out == cfg and res == 1.0 and c.inner == 0


def test_newton_quadratic_tail(unit_square):
    hist = []
    _, res = newton_inner(unit_square, Configuration(((0.45, 0.55),), 0.75), 1.0, 10.0, 1e-12, history=hist)
    assert res <= 1e-12
    tail = [h for h in hist if h < 1e-2]
    # quadratic convergence: each residual is at most a modest multiple of the previous one squared
    for a, b in zip(tail, tail[1:]):
        assert b <= 10 * a * a + 1e-14


def test_counters_match_instrumented_calls(unit_square, monkeypatch):
    calls = {"G": 0, "grad": 0, "hess": 0}

    def wrap(name, fn):
        def inner(*a, **k):
            calls[name] += 1
            return fn(*a, **k)

        return inner

    monkeypatch.setattr(optimize, "eval_G", wrap("G", covering.eval_G))
    monkeypatch.setattr(optimize, "eval_grad", wrap("grad", covering.eval_grad))
    monkeypatch.setattr(optimize, "eval_hess", wrap("hess", covering.eval_hess))
    res = al_solve(unit_square, Configuration(((0.3, 0.6),), 1.0))
    c = res.counters
    assert (c.G, c.grad, c.hess) == (calls["G"], calls["grad"], calls["hess"])
    assert c.outer >= 1 and c.inner >= c.hess


def test_reproducible(two_squares):
    cfg = Configuration(((0.4, 0.5), (1.6, 0.5)), 1.0)
    a = al_solve(two_squares, cfg)
    b = al_solve(two_squares, cfg)
    assert a.cfg == b.cfg and a.lam == b.lam and a.counters == b.counters


def test_two_squares_two_balls(two_squares):
    res = al_solve(two_squares, Configuration(((0.4, 0.5), (1.6, 0.5)), 1.0))
    assert res.status is Status.CONVERGED
    assert res.r == pytest.approx(math.sqrt(2) / 2, abs=1e-4)
    assert np.array(sorted(res.cfg.centers)) == pytest.approx(np.array([[0.5, 0.5], [1.5, 0.5]]), abs=1e-6)


def test_nonpositive_initial_radius(unit_square):
    with pytest.raises(ValueError):
        al_solve(unit_square, Configuration(((0.5, 0.5),), 0.0))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eps_feas": 0.0},
        {"eps_opt": -1.0},
        {"rho0": 0.0},
        {"rho_growth": 1.0},
        {"infeas_shrink": 1.0},
        {"lambda_bounds": (1.0, -1.0)},
    ],
)
def test_al_params_validation(kwargs):
    with pytest.raises(ValueError):
        ALParams(**kwargs)


@pytest.mark.parametrize("kwargs", [{"armijo": 0.0}, {"armijo": 0.6}, {"backtrack": 1.0}, {"mu_min": 0.0}])
def test_newton_params_validation(kwargs):
    with pytest.raises(ValueError):
        NewtonParams(**kwargs)


def test_max_outer_reports_status(unit_square):
    res = al_solve(unit_square, Configuration(((0.3, 0.6),), 1.0), ALParams(max_outer=1))
    assert res.status in (Status.MAX_ITER, Status.DEGENERATE)
    assert res.counters.outer == 1
    assert not res.converged
