"""Augmented Lagrangian solver for ``min r  s.t.  G(x, r) = 0, r >= 0``.

The outer loop updates the multiplier and the penalty; each subproblem

    L(x, r; λ, ρ) = r + λ G + (ρ/2) G²

is minimized by a Newton method that uses the exact Hessian of ``G``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .covering import eval_G, eval_grad, eval_hess
from .geometry import Configuration, DuplicateCenters, Region, build_partition, screen_nondegenerate

__all__ = [
    "ALParams",
    "Counters",
    "LineSearchStall",
    "NewtonParams",
    "SolveResult",
    "Status",
    "al_solve",
    "kkt_residuals",
    "newton_inner",
]


_EPS = float(np.finfo(float).eps)


class Status(str, Enum):
    CONVERGED = "Converged"
    MAX_ITER = "MaxIter"
    DEGENERATE = "Degenerate"


class LineSearchStall(RuntimeError):
    """Raised internally when no step satisfies the Armijo test."""


@dataclass(frozen=True)
class NewtonParams:
    mu_min: float = 1e-8
    backtrack: float = 0.5
    armijo: float = 1e-4
    max_ls: int = 40
    max_step: float = 0.25  # relative to the region diameter, ∞-norm
    r_min: float = 1e-10  # relative to the region diameter

    def __post_init__(self):
        if not 0.0 < self.armijo <= 0.5:
            raise ValueError("armijo must lie in (0, 0.5]")
        if not 0.0 < self.backtrack < 1.0:
            raise ValueError("backtrack must lie in (0, 1)")
        if self.mu_min <= 0 or self.max_step <= 0 or self.r_min <= 0:
            raise ValueError("mu_min, max_step and r_min must be positive")


@dataclass(frozen=True)
class ALParams:
    eps_feas: float = 1e-8
    eps_opt: float = 1e-8
    rho0: float = 10.0
    rho_growth: float = 10.0
    infeas_shrink: float = 0.5
    lambda_bounds: tuple = (-1e12, 1e12)
    max_outer: int = 50
    max_inner: int = 200
    newton: NewtonParams = field(default_factory=NewtonParams)

    def __post_init__(self):
        if self.eps_feas <= 0 or self.eps_opt <= 0:
            raise ValueError("tolerances must be positive")
        if self.rho0 <= 0 or self.rho_growth <= 1.0:
            raise ValueError("need rho0 > 0 and rho_growth > 1")
        if not 0.0 < self.infeas_shrink < 1.0:
            raise ValueError("infeas_shrink must lie in (0, 1)")
        lo, hi = self.lambda_bounds
        if not lo < hi:
            raise ValueError("lambda_bounds must be an increasing pair")


@dataclass
class Counters:
    outer: int = 0
    inner: int = 0
    G: int = 0
    grad: int = 0
    hess: int = 0

    def to_dict(self) -> dict:
        return {"outer": self.outer, "inner": self.inner, "G": self.G, "grad": self.grad, "hess": self.hess}


@dataclass
class SolveResult:
    cfg: Configuration
    lam: float
    kkt_opt: float
    kkt_feas: float
    status: Status
    counters: Counters
    G: float = math.nan

    @property
    def r(self) -> float:
        return self.cfg.radius

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED


class _Evaluator:
    """Counts calls into the covering module and caches the last partition."""

    def __init__(self, region: Region, counters: Counters):
        self.region = region
        self.counters = counters
        self._key = None
        self._book = None
        self._g = None

    def _book_for(self, z):
        key = z.tobytes()
        if key != self._key:
            cfg = Configuration.from_vector(z)
            _, book = build_partition(self.region, cfg)
            self._key, self._book, self._cfg, self._g = key, book, cfg, None
        return self._book, self._cfg

    def G(self, z) -> float:
        book, cfg = self._book_for(z)
        if self._g is None:
            self.counters.G += 1
            self._g = eval_G(self.region, book, cfg)
        return self._g

    def grad(self, z):
        book, cfg = self._book_for(z)
        self.counters.grad += 1
        return eval_grad(book, cfg)

    def hess(self, z):
        book, cfg = self._book_for(z)
        self.counters.hess += 1
        return eval_hess(book, cfg)


def _project(z, r_floor):
    if z[-1] < r_floor:
        z = z.copy()
        z[-1] = r_floor
    return z


def _projected_residual(z, g, r_floor):
    """∞-norm of the projected gradient for the single bound ``r >= r_floor``."""
    res = np.abs(g[:-1]).max(initial=0.0)
    gr = g[-1]
    if z[-1] <= r_floor and gr > 0:
        gr = 0.0
    return max(res, abs(gr))


def _newton(ev: _Evaluator, z, lam, rho, tol, max_iter, p: NewtonParams, counters: Counters, history=None):
    region = ev.region
    scale = region.diameter
    r_floor = p.r_min * scale
    cap = p.max_step * scale
    n = len(z)
    eye = np.eye(n)

    def lagrangian(zz):
        g = ev.G(zz)
        return zz[-1] + lam * g + 0.5 * rho * g * g, g

    Lz, Gz = lagrangian(z)
    dG = ev.grad(z)
    grad = (lam + rho * Gz) * dG
    grad[-1] += 1.0
    res = _projected_residual(z, grad, r_floor)
    if history is not None:
        history.append(res)
    stalled = False
    for _ in range(max_iter):
        if res <= tol:
            break
        counters.inner += 1
        H = (lam + rho * Gz) * ev.hess(z) + rho * np.outer(dG, dG)
        free = np.ones(n, dtype=bool)
        if z[-1] <= r_floor and grad[-1] > 0:
            free[-1] = False
        Hf = H[np.ix_(free, free)]
        gf = grad[free]
        d = np.zeros(n)
        mu = 0.0
        step = None
        diag = max(np.abs(np.diag(Hf)).max(initial=0.0), 1.0)
        while step is None:
            try:
                c = np.linalg.cholesky(Hf + mu * eye[: free.sum(), : free.sum()])
                step = -np.linalg.solve(c.T, np.linalg.solve(c, gf))
            except np.linalg.LinAlgError:
                mu = p.mu_min * diag if mu == 0.0 else 2.0 * mu
                if mu > 1e20 * diag:
                    step = -gf
        d[free] = step
        big = np.abs(d).max()
        if big > cap:
            d *= cap / big
        slope = float(grad @ d)
        if slope >= 0:
            d = -grad.copy()
            if not free[-1]:
                d[-1] = 0.0
            big = np.abs(d).max()
            if big > cap:
                d *= cap / big
            slope = float(grad @ d)
        alpha = 1.0
        # G is a difference of areas, so its rounding error scales with Vol(A)
        # and is amplified by |λ + ρG|; below that level L cannot rank steps
        noise = 1e3 * _EPS * (abs(Lz) + abs(lam + rho * Gz) * region.volume)
        by_residual = -slope <= noise
        accepted = False
        new_grad = None
        for _ in range(p.max_ls):
            trial = _project(z + alpha * d, r_floor)
            try:
                Lt, Gt = lagrangian(trial)
            except DuplicateCenters:
                alpha *= p.backtrack
                continue
            if by_residual:
                dG_try = ev.grad(trial)
                g_try = (lam + rho * Gt) * dG_try
                g_try[-1] += 1.0
                if _projected_residual(trial, g_try, r_floor) < res:
                    new_grad = (dG_try, g_try)
                    accepted = True
                    break
            elif Lt <= Lz + p.armijo * alpha * slope + _EPS * abs(Lz):
                accepted = True
                break
            alpha *= p.backtrack
        if not accepted or np.array_equal(trial, z):
            stalled = True
            break
        z, Lz, Gz = trial, Lt, Gt
        if new_grad is None:
            dG = ev.grad(z)
            grad = (lam + rho * Gz) * dG
            grad[-1] += 1.0
        else:
            dG, grad = new_grad
        res = _projected_residual(z, grad, r_floor)
        if history is not None:
            history.append(res)
    return z, res, stalled


def newton_inner(region: Region, cfg: Configuration, lam: float, rho: float, tol: float,
                 params: NewtonParams | None = None, max_iter: int = 200, counters: Counters | None = None,
                 history: list | None = None):
    """Approximate minimizer of the subproblem ``L(·; λ, ρ)`` started at ``cfg``.

    Returns ``(cfg, residual)`` where ``residual`` is the ∞-norm of the
    projected gradient. A line-search stall ends the iteration early and
    returns the best iterate found so far. ``history`` collects the
    residual after every accepted step.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if math.isinf(tol):
        return cfg, math.inf
    params = params or NewtonParams()
    counters = counters if counters is not None else Counters()
    ev = _Evaluator(region, counters)
    z, res, _ = _newton(ev, cfg.to_vector(), lam, rho, tol, max_iter, params, counters, history)
    return Configuration.from_vector(z), res


def kkt_residuals(region: Region, cfg: Configuration, lam: float):
    """``(‖e_r + λ ∇G‖_∞, |G|)`` evaluated from scratch."""
    _, book = build_partition(region, cfg)
    g = eval_G(region, book, cfg)
    dG = eval_grad(book, cfg)
    v = lam * dG
    v[-1] += 1.0
    return float(np.abs(v).max()), abs(g)


def al_solve(region: Region, cfg0: Configuration, params: ALParams | None = None) -> SolveResult:
    """Solve the covering problem from ``cfg0`` by an augmented Lagrangian method."""
    params = params or ALParams()
    if not cfg0.radius > 0:
        raise ValueError("initial radius must be positive")
    counters = Counters()
    ev = _Evaluator(region, counters)
    lo, hi = params.lambda_bounds
    lam = min(max(0.0, lo), hi)
    rho = params.rho0
    tol = math.sqrt(params.eps_opt)
    z = cfg0.to_vector()
    prev_feas = math.inf
    kkt_opt = kkt_feas = math.inf
    lam_star = lam
    g = math.nan
    status = Status.MAX_ITER
    for _ in range(params.max_outer):
        counters.outer += 1
        z_prev = z
        z, _, _ = _newton(ev, z, lam, rho, tol, params.max_inner, params.newton, counters)
        g = ev.G(z)
        lam_star = min(max(lam + rho * g, lo), hi)
        dG = ev.grad(z)
        v = lam_star * dG
        v[-1] += 1.0
        kkt_opt = float(np.abs(v).max())
        kkt_feas = abs(g)
        if kkt_opt <= params.eps_opt and kkt_feas <= params.eps_feas and z[-1] > 0:
            status = Status.CONVERGED
            break
        if np.array_equal(z, z_prev) and kkt_feas <= params.eps_feas:
            # feasible but not stationary and the subproblem no longer moves
            break
        if kkt_feas > params.infeas_shrink * prev_feas:
            rho *= params.rho_growth
        prev_feas = min(prev_feas, kkt_feas)
        lam = lam_star
        tol = max(params.eps_opt, 0.1 * tol)
    cfg = Configuration.from_vector(z)
    if status is not Status.CONVERGED:
        try:
            if not screen_nondegenerate(region, cfg).ok:
                status = Status.DEGENERATE
        except DuplicateCenters:
            status = Status.DEGENERATE
    return SolveResult(cfg, lam_star, kkt_opt, kkt_feas, status, counters, g)
