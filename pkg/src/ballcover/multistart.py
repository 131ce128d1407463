"""Seeded multistart driver.

Trial ``t`` (1-based) draws from its own Philox stream keyed by
``SeedSequence(seed, spawn_key=(t,))``, so results do not depend on the
order or the thread in which trials run.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import Configuration, Region
from .optimize import ALParams, SolveResult, Status, al_solve

__all__ = ["MultistartReport", "NoConvergedTrial", "TrialSummary", "initial_guess", "run_multistart", "trial_rng"]


class NoConvergedTrial(RuntimeError):
    pass


@dataclass(frozen=True)
class TrialSummary:
    trial: int
    r: float
    status: Status


@dataclass
class MultistartReport:
    best: SolveResult
    best_trial: int
    summaries: list = field(default_factory=list)
    trials: int = 0
    seed: int = 0
    wall_time: float = 0.0

    def best_so_far(self) -> list:
        """Smallest converged radius after each trial (``inf`` before the first success)."""
        out = []
        cur = math.inf
        for s in self.summaries:
            if s.status is Status.CONVERGED:
                cur = min(cur, s.r)
            out.append(cur)
        return out


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def initial_guess(region: Region, m: int, rng: np.random.Generator) -> Configuration:
    """Centers uniform on ``A`` by rejection from the bounding box; ``r0 = diag/√m``."""
    x0, y0, x1, y1 = region.bbox
    pts = []
    while len(pts) < m:
        batch = rng.random((2 * (m - len(pts)) + 8, 2))
        for u, v in batch:
            x = x0 + (x1 - x0) * u
            y = y0 + (y1 - y0) * v
            if region.contains(x, y):
                pts.append((float(x), float(y)))
                if len(pts) == m:
                    break
    return Configuration(tuple(pts), math.hypot(x1 - x0, y1 - y0) / math.sqrt(m))


def _threads(requested):
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("COVER_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def run_multistart(region: Region, m: int, trials: int, seed: int, params: ALParams | None = None,
                   threads: int | None = None, progress=None) -> MultistartReport:
    """Run ``trials`` independent solves and keep the converged one with the smallest radius.

    Ties in radius go to the earlier trial. ``threads`` defaults to the
    ``COVER_THREADS`` environment variable (1 when unset). ``progress`` is
    called as ``progress(trial, result)`` from the calling thread.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    params = params or ALParams()
    start = time.perf_counter()

    def one(t):
        cfg0 = initial_guess(region, m, trial_rng(seed, t))
        return al_solve(region, cfg0, params)

    n_threads = _threads(threads)
    results = [None] * trials
    if n_threads == 1:
        for t in range(1, trials + 1):
            results[t - 1] = one(t)
            if progress:
                progress(t, results[t - 1])
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            for t, res in enumerate(pool.map(one, range(1, trials + 1)), start=1):
                results[t - 1] = res
                if progress:
                    progress(t, res)

    summaries = [TrialSummary(t, res.r, res.status) for t, res in enumerate(results, start=1)]
    converged = [(res.r, t) for t, res in enumerate(results, start=1) if res.status is Status.CONVERGED]
    if not converged:
        raise NoConvergedTrial(f"none of {trials} trials converged")
    _, best_t = min(converged)
    return MultistartReport(results[best_t - 1], best_t, summaries, trials, seed, time.perf_counter() - start)
