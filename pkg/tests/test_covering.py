import math

import numpy as np
import pytest

from ballcover.covering import eval_G, eval_grad, eval_hess, evaluate, near_singular_count
from ballcover.geometry import Configuration, Region, build_partition
from ballcover.instances import INSTANCE_NAMES, get_instance
from ballcover.oracle import fd_gradient, fd_hessian, lens_area, random_screened_config, triple_disk_area

from conftest import CORNER_PAIR_COVERED, corner_pair_covered_closed_form, square

BIG = Region.from_polygons([square(-5.0, -5.0, 10.0)])


def test_corner_pair_value(corner_pair):
    region, cfg = corner_pair
    assert corner_pair_covered_closed_form() == pytest.approx(CORNER_PAIR_COVERED, abs=1e-15)
    assert evaluate(region, cfg, order=0).g == pytest.approx(9 - CORNER_PAIR_COVERED, abs=1e-12)


def test_interior_ball_circle_branch(unit_square):
    r = 0.3
    b = evaluate(unit_square, Configuration(((0.5, 0.5),), r))
    assert b.g == pytest.approx(1 - math.pi * r * r, abs=1e-15)
    assert np.array_equal(b.grad, np.array([0.0, 0.0, -2 * math.pi * r]))
    assert b.hess[2, 2] == -2 * math.pi
    assert not b.hess[:2, :].any() and not b.hess[:, :2].any()


def test_two_interior_balls():
    b = evaluate(BIG, Configuration(((-2.0, 0.0), (2.0, 0.0)), 1.0))
    assert b.hess[-1, -1] == -4 * math.pi
    assert not b.hess[:4, :4].any()


def test_corner_ball_gradient():
    reg = Region.from_polygons([square(s=2.0)])
    b = evaluate(reg, Configuration(((0.0, 0.0),), 1.0), order=1)
    assert b.grad[2] == pytest.approx(-math.pi / 2, abs=1e-15)
    assert b.grad[:2] == pytest.approx([-1.0, -1.0], abs=1e-15)
    assert fd_gradient(reg, Configuration(((0.0, 0.0),), 1.0)) == pytest.approx(b.grad, abs=1e-8)


def test_ball_cut_by_line_closed_form():
    # ball (0, c), r = 1 over the half-plane y >= 0 (approximated by a big box)
    reg = Region.from_polygons([[(-5.0, 0.0), (5.0, 0.0), (5.0, 5.0), (-5.0, 5.0)]])
    c = 0.3
    b = evaluate(reg, Configuration(((0.0, c),), 1.0))
    h_rr = -(2 * math.pi - 2 * math.acos(c) - 2 * c / math.sqrt(1 - c * c))
    assert b.hess[2, 2] == pytest.approx(h_rr, abs=1e-13)
    assert b.hess[2, 2] == pytest.approx(-3.122007059587437, abs=1e-13)


def test_two_squares_random_fd(two_squares):
    rng = np.random.default_rng(4)
    for _ in range(3):
        cfg = random_screened_config(two_squares, 3, rng)
        _, book = build_partition(two_squares, cfg)
        g = eval_grad(book, cfg)
        H = eval_hess(book, cfg)
        assert np.abs(g - fd_gradient(two_squares, cfg)).max() <= 1e-6 * max(1, np.abs(g).max())
        assert (np.abs(H - fd_hessian(two_squares, cfg)) <= 1e-5 * (1 + np.abs(H))).all()


def test_hessian_exactly_symmetric():
    reg = get_instance("nonconvex_holes")
    cfg = random_screened_config(reg, 8, np.random.default_rng(0))
    H = evaluate(reg, cfg).hess
    assert np.array_equal(H, H.T)


@pytest.mark.parametrize("name", INSTANCE_NAMES)
def test_value_bounds_and_radial_sign(name):
    reg = get_instance(name)
    rng = np.random.default_rng(21)
    for _ in range(3):
        b = evaluate(reg, random_screened_config(reg, 5, rng), order=1)
        assert 0.0 <= b.g <= reg.volume
        assert b.grad[-1] <= 0.0


def test_radial_derivative_is_minus_free_length():
    reg = get_instance("minkowski")
    cfg = random_screened_config(reg, 4, np.random.default_rng(8))
    _, book = build_partition(reg, cfg)
    length = sum(
        2 * math.pi * cfg.radius if book.circle[i] else sum(cfg.radius * (a.theta_w - a.theta_v) for a in book.arcs[i])
        for i in range(cfg.m)
    )
    assert eval_grad(book, cfg)[-1] == pytest.approx(-length, rel=1e-14)


def _moved(reg, cfg, f):
    reg2 = Region.from_polygons([[f(p) for p in poly] for poly in reg.polygons])
    cfg2 = Configuration(tuple(f(c) for c in cfg.centers), cfg.radius)
    return reg2, cfg2


def test_translation_equivariance():
    reg = get_instance("cesaro")
    cfg = random_screened_config(reg, 5, np.random.default_rng(3))
    a = evaluate(reg, cfg)
    b = evaluate(*_moved(reg, cfg, lambda p: (p[0] + 3.25, p[1] - 1.5)))
    assert b.g == pytest.approx(a.g, abs=1e-13)
    assert b.grad == pytest.approx(a.grad, abs=1e-12)
    assert b.hess == pytest.approx(a.hess, abs=1e-10)


def test_rotation_equivariance():
    reg = get_instance("nonconvex_holes")
    cfg = random_screened_config(reg, 4, np.random.default_rng(6))
    phi = 0.7
    c, s = math.cos(phi), math.sin(phi)
    a = evaluate(reg, cfg)
    b = evaluate(*_moved(reg, cfg, lambda p: (c * p[0] - s * p[1], s * p[0] + c * p[1])))
    m = cfg.m
    Q = np.zeros((2 * m + 1, 2 * m + 1))
    for i in range(m):
        Q[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = [[c, -s], [s, c]]
    Q[-1, -1] = 1.0
    assert b.g == pytest.approx(a.g, abs=1e-13)
    assert b.grad == pytest.approx(Q @ a.grad, abs=1e-11)
    assert b.hess == pytest.approx(Q @ a.hess @ Q.T, abs=1e-9)


@pytest.mark.parametrize("ratio", [0.2, 0.6, 1.0, 1.4, 1.8])
def test_lens_family(ratio):
    r = 0.8
    d = ratio * r
    g = evaluate(BIG, Configuration(((0.0, 0.0), (d, 0.0)), r), order=0).g
    assert g == pytest.approx(100 - 2 * math.pi * r * r + lens_area(r, d), abs=1e-10)


@pytest.mark.parametrize("f", [1.05, 1.2, 1.5, 1.7])
def test_three_ball_inclusion_exclusion(f):
    side = 1.0
    r = f * side / math.sqrt(3)
    cfg = Configuration(((0.0, 0.0), (side, 0.0), (0.5 * side, 0.5 * math.sqrt(3) * side)), r)
    g = evaluate(BIG, cfg, order=0).g
    exact = 100 - 3 * math.pi * r * r + 3 * lens_area(r, side) - triple_disk_area(r, side)
    assert g == pytest.approx(exact, abs=1e-12)


def test_near_tangent_blow_up():
    """|h_rr| grows as two balls approach tangency."""
    vals = []
    for gap in (1e-1, 1e-2, 1e-3):
        d = 2.0 - gap
        vals.append(abs(evaluate(BIG, Configuration(((0.0, 0.0), (d, 0.0)), 1.0)).hess[-1, -1]))
    assert vals[0] < vals[1] < vals[2]


def test_near_singular_count_flags_tangency():
    cfg = Configuration(((0.0, 0.0), (2.0 - 1e-14, 0.0)), 1.0)
    _, book = build_partition(BIG, cfg)
    assert near_singular_count(book, 1e-6) > 0
    _, book = build_partition(BIG, Configuration(((0.0, 0.0), (1.0, 0.0)), 1.0))
    assert near_singular_count(book, 1e-6) == 0


def test_fd_error_is_truncation_near_boundary_tangency():
    """Close to boundary tangency the Hessian check is limited by O(h^2) truncation."""
    reg = Region.from_polygons([[(-5.0, 0.0), (5.0, 0.0), (5.0, 5.0), (-5.0, 5.0)]])
    cfg = Configuration(((0.0, 1.0 - 2e-3),), 1.0)
    H = evaluate(reg, cfg).hess
    errs = [np.abs(H - fd_hessian(reg, cfg, h)).max() for h in (2e-5, 1e-5, 5e-6)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)
