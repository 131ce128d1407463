"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``CRITERION n: PASS|FAIL ...`` line; the lines are
also collected into the terminal summary by ``conftest.py``.
"""

import math
import time

import numpy as np
import pytest

from ballcover.covering import eval_G, eval_grad, eval_hess, evaluate
from ballcover.geometry import Configuration, Region, build_partition, piece_area
from ballcover.instances import INSTANCE_NAMES, get_instance
from ballcover.multistart import initial_guess, run_multistart, trial_rng
from ballcover.optimize import Status, al_solve, kkt_residuals
from ballcover.oracle import (
    derivative_errors,
    lens_area,
    mc_area,
    random_screened_config,
    reuleaux_area,
    triple_disk_area,
)

from conftest import CORNER_PAIR_COVERED, record, square

BIG = Region.from_polygons([square(-5.0, -5.0, 10.0)])


def _report(n, ok, detail):
    record(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def test_criterion_1_corner_pair(corner_pair):
    region, cfg = corner_pair
    reps = 2000
    best = math.inf
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(reps):
            _, book = build_partition(region, cfg)
            g = eval_G(region, book, cfg)
        best = min(best, (time.perf_counter() - t0) / reps)
    err = abs(g - (9 - CORNER_PAIR_COVERED))
    _report(1, err <= 1e-12 and best < 1e-3, f"corner pair |G - (9 - 3.781718647855564)| = {err:.1e} (tol 1e-12), {best * 1e3:.3f} ms/eval (limit 1 ms)")


def test_criterion_2_lens_sweep():
    r = 1.0
    worst = 0.0
    for k in range(2, 19, 2):
        d = 0.1 * k * r
        g = evaluate(BIG, Configuration(((0.0, 0.0), (d, 0.0)), r), order=0).g
        worst = max(worst, abs(g - (BIG.volume - 2 * math.pi * r * r + lens_area(r, d))))
    _report(2, worst <= 1e-10, f"lens sweep d = 0.2r..1.8r max error {worst:.1e} (tol 1e-10)")


def test_criterion_3_reuleaux_sweep():
    # side/r in {1.2, ..., 1.7} keeps side/sqrt(3) < r < side
    r = 1.0
    worst = exact = 0.0
    for k in range(12, 18):
        side = 0.1 * k * r
        cfg = Configuration(((0.0, 0.0), (side, 0.0), (0.5 * side, 0.5 * math.sqrt(3) * side)), r)
        g = evaluate(BIG, cfg, order=0).g
        formula = BIG.volume - 3 * math.pi * r * r + 3 * lens_area(r, side) - 3 * reuleaux_area(r, side)
        worst = max(worst, abs(g - formula))
        exact = max(exact, abs(g - (BIG.volume - 3 * math.pi * r * r + 3 * lens_area(r, side) - triple_disk_area(r, side))))
    _report(
        3,
        worst <= 1e-10,
        f"Reuleaux sweep side/r = 1.2..1.7 max error {worst:.1e} (tol 1e-10); "
        f"exact triple-disk inclusion-exclusion max error {exact:.1e}",
    )


def test_criterion_4_derivatives():
    t0 = time.perf_counter()
    worst_g = worst_h = 0.0
    for name in INSTANCE_NAMES:
        reg = get_instance(name)
        rng = np.random.default_rng(7)
        for k in range(30):
            cfg = random_screened_config(reg, (3, 5, 8)[k % 3], rng)
            ge, he = derivative_errors(reg, cfg)
            worst_g = max(worst_g, ge)
            worst_h = max(worst_h, he)
    dt = time.perf_counter() - t0
    ok = worst_g <= 1e-6 and worst_h <= 1e-5 and dt <= 60
    _report(4, ok, f"5 instances x 30 configs: grad {worst_g:.1e} (tol 1e-6), hess {worst_h:.1e} (tol 1e-5), {dt:.1f} s (limit 60 s)")


_SOLUTIONS = []


def test_criterion_5_kkt_recheck():
    checked = 0
    worst_opt = worst_feas = 0.0
    for name, m in [("cesaro", 4), ("star", 3), ("minkowski", 5), ("nonconvex_holes", 4), ("america", 3)]:
        reg = get_instance(name)
        for t in range(1, 5):
            res = al_solve(reg, initial_guess(reg, m, trial_rng(11, t)))
            if res.status is Status.CONVERGED:
                _SOLUTIONS.append((reg, res))
    for reg, res in _SOLUTIONS:
        opt, feas = kkt_residuals(reg, res.cfg, res.lam)
        worst_opt = max(worst_opt, opt)
        worst_feas = max(worst_feas, feas)
        checked += 1
    ok = checked > 0 and worst_opt <= 1e-8 and worst_feas <= 1e-8
    _report(5, ok, f"{checked} converged results re-checked: max opt {worst_opt:.1e}, max |G| {worst_feas:.1e} (tol 1e-8)")


TABLE1 = {
    "nonconvex_holes": 1.9546630973359513e-01,
    "star": 1.3040713549156926e00,
    "minkowski": 9.9730787966959566e-01,
}


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(TABLE1))
def test_criterion_6_table1(name):
    reg = get_instance(name)
    t0 = time.perf_counter()
    rep = run_multistart(reg, 10, 200, seed=1)
    dt = time.perf_counter() - t0
    best = rep.best
    opt, feas = kkt_residuals(reg, best.cfg, best.lam)
    ok = best.r <= 1.01 * TABLE1[name] and feas <= 1e-8 and dt <= 600
    _report(
        6,
        ok,
        f"{name} m=10: r = {best.r:.16e} (target {TABLE1[name]:.16e}, ratio {best.r / TABLE1[name]:.6f} <= 1.01), "
        f"|G| {feas:.1e}, trial {rep.best_trial}, {dt:.0f} s (limit 600 s)",
    )


def test_criterion_7_partition_vs_mc():
    worst = 0.0
    for name in INSTANCE_NAMES:
        reg = get_instance(name)
        rng = np.random.default_rng(17)
        for k in range(10):
            cfg = random_screened_config(reg, (3, 5, 8)[k % 3], rng)
            pieces, _ = build_partition(reg, cfg)
            total = sum(piece_area(p, cfg.centers[p.owner[0]], cfg.radius) for p in pieces)
            est, se = mc_area(reg, cfg, 1_000_000, seed=k)
            worst = max(worst, abs(total - est) / se if se > 0 else (0.0 if total == est else math.inf))
    _report(7, worst <= 4.0, f"5 instances x 10 configs: max |sum area(S_ij) - MC| = {worst:.2f} stderr (limit 4)")


def _spread(m, rng):
    n = math.ceil(math.sqrt(m))
    pts = []
    for a in range(n):
        for b in range(n):
            if len(pts) < m:
                pts.append(((a + 0.5 + 0.3 * (rng.random() - 0.5)) / n, (b + 0.5 + 0.3 * (rng.random() - 0.5)) / n))
    return Configuration(tuple(pts), 0.75 / n)


def _eval_time(reg, cfg, reps=5):
    best = math.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        _, book = build_partition(reg, cfg)
        eval_G(reg, book, cfg)
        eval_grad(book, cfg)
        eval_hess(book, cfg)
        best = min(best, time.perf_counter() - t0)
    return best


def test_criterion_8_scaling():
    reg = Region.from_polygons([square()])
    rng = np.random.default_rng(0)
    t512 = _eval_time(reg, _spread(512, rng))
    t1024 = _eval_time(reg, _spread(1024, rng))
    ratio = t1024 / t512
    _report(8, ratio <= 2.6, f"eval time m=1024 / m=512 = {t1024:.3f} s / {t512:.3f} s = {ratio:.2f} (limit 2.6)")


def test_criterion_9_circle_branch():
    r = 0.37
    b = evaluate(Region.from_polygons([square()]), Configuration(((0.5, 0.5),), r))
    ok = np.array_equal(b.grad, np.array([0.0, 0.0, -2 * math.pi * r])) and b.hess[2, 2] == -2 * math.pi
    _report(9, ok, f"single interior ball grad = {b.grad.tolist()}, h_rr = {float(b.hess[2, 2])!r} (exact)")
