"""Uncovered area ``G(x, r) = Vol(A) - Vol(A ∩ Ω(x, r))`` and its derivatives.

All three evaluators read the merged arc book of :func:`build_partition`.
Variables are ordered ``(x_1x, x_1y, ..., x_mx, x_my, r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ArcBook, Configuration, Region, build_partition

__all__ = [
    "DerivativeBundle",
    "evaluate",
    "eval_G",
    "eval_grad",
    "eval_hess",
    "near_singular_count",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DerivativeBundle:
    g: float
    grad: np.ndarray | None = None
    hess: np.ndarray | None = None


def eval_G(region: Region, book: ArcBook, cfg: Configuration) -> float:
    r = cfg.radius
    half_r2 = 0.5 * r * r
    gamma = 0.0
    for i in range(book.m):
        if book.circle[i]:
            gamma += math.pi * r * r
            continue
        for v, w in book.edges[i]:
            gamma += 0.5 * (v[0] + w[0]) * (w[1] - v[1])
        cx = cfg.centers[i][0]
        for arc in book.arcs[i]:
            tv, tw = arc.theta_v, arc.theta_w
            sv, cv = math.sin(tv), math.cos(tv)
            sw, cw = math.sin(tw), math.cos(tw)
            gamma += cx * r * (sw - sv) + half_r2 * (tw - tv + sw * cw - sv * cv)
    return region.volume - gamma


def eval_grad(book: ArcBook, cfg: Configuration) -> np.ndarray:
    m = book.m
    r = cfg.radius
    g = np.zeros(2 * m + 1)
    g_r = 0.0
    for i in range(m):
        if book.circle[i]:
            g_r -= TWO_PI * r
            continue
        gx = gy = 0.0
        for arc in book.arcs[i]:
            tv, tw = arc.theta_v, arc.theta_w
            g_r -= r * (tw - tv)
            gx += r * (math.sin(tv) - math.sin(tw))
            gy += r * (math.cos(tw) - math.cos(tv))
        g[2 * i] = gx
        g[2 * i + 1] = gy
    g[-1] = g_r
    return g


def eval_hess(book: ArcBook, cfg: Configuration) -> np.ndarray:
    """Exact Hessian, assembled in the lower triangle and mirrored.

    Endpoint terms are subtracted at arc starts and added at arc ends.
    Contact with ``∂A`` contributes ``β = ν_A·ν_i / ν_A·τ_i``; contact with
    another circle ``ℓ`` contributes through ``cot`` and ``1/sin`` of the
    angle between the two normals.
    """
    m = book.m
    n = 2 * m + 1
    R = n - 1
    rows, cols, vals = [], [], []
    h_rr = 0.0

    def put(i, j, v):
        rows.append(i)
        cols.append(j)
        vals.append(v)

    for i in range(m):
        if book.circle[i]:
            h_rr -= TWO_PI
            continue
        a, b = 2 * i, 2 * i + 1
        hxx = hyx = hyy = 0.0
        hrx = hry = 0.0
        hrr = 0.0
        for arc in book.arcs[i]:
            tv, tw = arc.theta_v, arc.theta_w
            cv, cw = math.cos(tv), math.cos(tw)
            sv, sw = math.sin(tv), math.sin(tw)
            c_sum = math.cos(tv + tw)
            s_diff = math.sin(tv - tw)
            hxx += s_diff * c_sum
            hyx += cw * cw - cv * cv
            hyy -= s_diff * c_sum
            hrx += sv - sw
            hry += cw - cv
            hrr += tv - tw
            for sign, ann in ((-1.0, arc.ann_v), (1.0, arc.ann_w)):
                th = ann.theta
                ct, st = math.cos(th), math.sin(th)
                if ann.nu_A is not None:
                    nx, ny = ann.nu_A
                    beta = sign * (nx * ct + ny * st) / (-nx * st + ny * ct)
                    hxx += beta * ct * ct
                    hyx += beta * st * ct
                    hyy += beta * st * st
                    hrx += beta * ct
                    hry += beta * st
                    hrr += beta
                for ell, vt in zip(ann.L, ann.vartheta):
                    delta = math.remainder(vt - th, TWO_PI)
                    s_d = math.sin(delta)
                    c_d = math.cos(delta)
                    cot = c_d / s_d
                    k = sign * cot
                    hxx += k * ct * ct
                    hyx += k * st * ct
                    hyy += k * st * st
                    hrx += sign * (cot * ct - ct / s_d)
                    hry += sign * (cot * st - st / s_d)
                    hrr += sign * (c_d - 1.0) / s_d
                    if ell > i:
                        f = -sign / s_d
                        cvt, svt = math.cos(vt), math.sin(vt)
                        la, lb = 2 * ell, 2 * ell + 1
                        put(la, a, f * ct * cvt)
                        put(la, b, f * st * cvt)
                        put(lb, a, f * ct * svt)
                        put(lb, b, f * st * svt)
        put(a, a, hxx)
        put(b, a, hyx)
        put(b, b, hyy)
        put(R, a, hrx)
        put(R, b, hry)
        h_rr += hrr
    # lower triangle accumulated sparsely, then written to both halves
    H = np.zeros((n, n))
    if rows:
        r_idx = np.array(rows)
        c_idx = np.array(cols)
        v = np.array(vals)
        np.add.at(H, (r_idx, c_idx), v)
        off = r_idx != c_idx
        np.add.at(H, (c_idx[off], r_idx[off]), v[off])
    H[R, R] = h_rr
    return H


def near_singular_count(book: ArcBook, eps: float = 1e-9) -> int:
    """Arc endpoints whose Hessian denominators fall below ``eps``."""
    count = 0
    for arcs in book.arcs:
        for arc in arcs:
            for ann in (arc.ann_v, arc.ann_w):
                th = ann.theta
                if ann.nu_A is not None:
                    nx, ny = ann.nu_A
                    if abs(-nx * math.sin(th) + ny * math.cos(th)) < eps:
                        count += 1
                for vt in ann.vartheta:
                    if abs(math.sin(vt - th)) < eps:
                        count += 1
    return count


def evaluate(region: Region, cfg: Configuration, order: int = 2) -> DerivativeBundle:
    """G and, up to ``order``, its gradient and Hessian at ``cfg``."""
    _, book = build_partition(region, cfg)
    g = eval_G(region, book, cfg)
    grad = eval_grad(book, cfg) if order >= 1 else None
    hess = eval_hess(book, cfg) if order >= 2 else None
    return DerivativeBundle(g, grad, hess)
