"""Independent checks: central differences, Monte-Carlo areas, closed-form lens areas."""

from __future__ import annotations

import math

import numpy as np

from .covering import eval_G, eval_grad
from .geometry import Configuration, DuplicateCenters, Region, build_partition, polygon_area, screen_nondegenerate

__all__ = [
    "DomainError",
    "fd_gradient",
    "fd_hessian",
    "lens_area",
    "mc_area",
    "random_screened_config",
    "derivative_errors",
    "reuleaux_area",
    "triple_disk_area",
]


class DomainError(ValueError):
    pass


def _G(region, z):
    cfg = Configuration.from_vector(z)
    _, book = build_partition(region, cfg)
    return eval_G(region, book, cfg)


def _grad(region, z):
    cfg = Configuration.from_vector(z)
    _, book = build_partition(region, cfg)
    return eval_grad(book, cfg)


def fd_gradient(region: Region, cfg: Configuration, h: float = 1e-6) -> np.ndarray:
    z = cfg.to_vector()
    g = np.empty_like(z)
    for k in range(len(z)):
        zp = z.copy()
        zm = z.copy()
        zp[k] += h
        zm[k] -= h
        g[k] = (_G(region, zp) - _G(region, zm)) / (2.0 * h)
    return g


def fd_hessian(region: Region, cfg: Configuration, h: float = 1e-5) -> np.ndarray:
    """Central differences of the analytic gradient, symmetrized."""
    z = cfg.to_vector()
    n = len(z)
    M = np.empty((n, n))
    for k in range(n):
        zp = z.copy()
        zm = z.copy()
        zp[k] += h
        zm[k] -= h
        M[:, k] = (_grad(region, zp) - _grad(region, zm)) / (2.0 * h)
    return 0.5 * (M + M.T)


def mc_area(region: Region, cfg: Configuration, samples: int, seed: int = 0):
    """Monte-Carlo estimate of ``Vol(A ∩ Ω)`` and its standard error.

    Samples are allocated to polygons in proportion to their areas and drawn
    uniformly inside each triangle of a fan triangulation.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    centers = np.asarray(cfg.centers)
    r2 = cfg.radius ** 2
    areas = np.array([polygon_area(p) for p in region.polygons])
    total = areas.sum()
    counts = np.floor(samples * areas / total).astype(int)
    counts[np.argmax(areas)] += samples - counts.sum()
    estimate = 0.0
    var = 0.0
    for poly, area, n in zip(region.polygons, areas, counts):
        if n == 0:
            continue
        pts = np.asarray(poly)
        tri = [(pts[0], pts[k], pts[k + 1]) for k in range(1, len(pts) - 1)]
        tri_areas = np.array([0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) for a, b, c in tri])
        which = rng.choice(len(tri), size=n, p=tri_areas / tri_areas.sum())
        u = rng.random(n)
        v = rng.random(n)
        flip = u + v > 1.0
        u[flip] = 1.0 - u[flip]
        v[flip] = 1.0 - v[flip]
        a = np.array([t[0] for t in tri])[which]
        b = np.array([t[1] for t in tri])[which]
        c = np.array([t[2] for t in tri])[which]
        xy = a + u[:, None] * (b - a) + v[:, None] * (c - a)
        covered = np.zeros(n, dtype=bool)
        for chunk in range(0, len(centers), 64):
            cc = centers[chunk : chunk + 64]
            d2 = (xy[:, None, 0] - cc[None, :, 0]) ** 2 + (xy[:, None, 1] - cc[None, :, 1]) ** 2
            covered |= (d2 < r2).any(axis=1)
        p = covered.mean()
        estimate += area * p
        var += area * area * p * (1.0 - p) / n
    return float(estimate), float(math.sqrt(var))


def lens_area(r: float, d: float) -> float:
    """Area of the intersection of two disks of radius ``r`` at distance ``d``."""
    if r <= 0 or d < 0 or d > 2 * r:
        raise DomainError(f"lens needs 0 <= d <= 2r, got r={r}, d={d}")
    return 2.0 * r * r * math.acos(d / (2.0 * r)) - d * math.sqrt(max(r * r - d * d / 4.0, 0.0))


def reuleaux_area(r: float, side: float) -> float:
    """Area common to three disks of radius ``r`` centered on an equilateral triangle."""
    r0 = side / math.sqrt(3.0)
    if r < r0 * (1.0 - 1e-15) or r > side:
        raise DomainError(f"reuleaux needs side/sqrt(3) <= r <= side, got r={r}, side={side}")
    s = math.sqrt(max(r * r - 0.75 * r0 * r0, 0.0)) - 1.5 * r0 + r
    return 0.5 * (math.pi - math.sqrt(3.0)) * s * s


def triple_disk_area(r: float, side: float) -> float:
    """Exact area common to three disks of radius ``r`` on an equilateral triangle.

    The region is the inner triangle of pairwise circle crossings plus three
    circular segments of radius ``r``.
    """
    r0 = side / math.sqrt(3.0)
    if r < r0 or r > side:
        raise DomainError(f"triple intersection needs side/sqrt(3) <= r <= side, got r={r}, side={side}")
    h = math.sqrt(r * r - side * side / 4.0)
    chord = math.sqrt(3.0) * (h - 0.5 * r0)
    half = 0.5 * chord
    segment = r * r * math.asin(half / r) - half * math.sqrt(r * r - half * half)
    return math.sqrt(3.0) / 4.0 * chord * chord + 3.0 * segment


def random_screened_config(region: Region, m: int, rng: np.random.Generator, margin: float = 1e-2,
                           max_tries: int = 2000) -> Configuration:
    """Random configuration that stays away from the degenerate set.

    Centers are uniform on ``A``; the radius is drawn so that the balls
    cover between roughly a third and all of ``Vol(A)`` when disjoint.
    Besides passing screening, the tangency margins (ball-ball and
    ball-boundary) must exceed ``margin`` times the region diameter, the
    center spacing and the distance of every circle from the corners of
    ``∂A`` must exceed a tenth of that, and the transversality margin must
    exceed ``10 * margin``. Central differences lose accuracy like
    ``h² δ^(-5/2)`` at distance ``δ`` from tangency, so the margins keep the
    oracles meaningful at their default steps.
    """
    x0, y0, x1, y1 = region.bbox
    base = math.sqrt(region.volume / (math.pi * m))
    for _ in range(max_tries):
        pts = []
        while len(pts) < m:
            x = x0 + (x1 - x0) * rng.random()
            y = y0 + (y1 - y0) * rng.random()
            if region.contains(x, y):
                pts.append((x, y))
        cfg = Configuration(tuple(pts), base * rng.uniform(0.6, 1.4))
        try:
            rep = screen_nondegenerate(region, cfg)
        except DuplicateCenters:
            continue
        tol = margin * region.diameter
        if (
            rep.ok
            and min(rep.tangency_margin, rep.boundary_tangency_margin) > tol
            and min(rep.min_center_distance, rep.vertex_margin) > 0.1 * tol
            and rep.transversality_margin > 10 * margin
        ):
            return cfg
    raise RuntimeError("could not draw a screened configuration")


def derivative_errors(region: Region, cfg: Configuration, h_grad: float = 1e-6, h_hess: float = 1e-5):
    """``(grad_rel_err, hess_err)`` of the analytic derivatives against central differences.

    The gradient error is ``‖g - g_fd‖_∞ / max(1, ‖g‖_∞)``; the Hessian error
    is ``max |H - H_fd| / (1 + |H|)`` entrywise.
    """
    from .covering import eval_hess

    _, book = build_partition(region, cfg)
    g = eval_grad(book, cfg)
    H = eval_hess(book, cfg)
    g_fd = fd_gradient(region, cfg, h_grad)
    H_fd = fd_hessian(region, cfg, h_hess)
    ge = float(np.abs(g - g_fd).max() / max(1.0, np.abs(g).max()))
    he = float((np.abs(H - H_fd) / (1.0 + np.abs(H))).max())
    return ge, he
