"""Multi-start projected subgradient ascent for homogeneous ratio objectives.

All norm maximizations in this package share one engine: maximize a
0-homogeneous objective (the log of a ratio of two 1-homogeneous norms)
over the unit sphere, by subgradient steps with multiplicative step
adaptation.

Objectives receive a tie width `tau` in addition to the point.  Max-type
norms (top singular value, sup norms, max aggregation) are nonsmooth
exactly at optimizers with tied maxima, where a single-branch subgradient
zigzags and stalls; objectives therefore average the gradients of all
branches within a relative width tau of the maximum (softmax weights),
which the engine anneals geometrically to zero.  The reported value is
always the true, unsmoothed objective.  Starts are seeded independently
from a master seed, so a multi-start run gives identical results
regardless of scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class AscentConfig:
    """Budget and step policy for multi-start ascent."""

    starts: int = 32
    iters: int = 500
    step0: float = 0.25
    grow: float = 1.2
    shrink: float = 0.5
    rel_tol: float = 1e-10
    patience: int = 80
    min_step: float = 1e-15
    tau0: float = 0.3
    tau_end: float = 1e-16
    seed: int = 0
    threads: int = 1

    def scaled(self, **kw) -> "AscentConfig":
        return replace(self, **kw)


DEFAULT = AscentConfig()
# Cheap budget for weak norms nested inside an outer ascent.
INNER = AscentConfig(starts=8, iters=150, patience=40)
# High-accuracy budget for the final certification pass of an estimate.
CERTIFY = AscentConfig(starts=16, iters=1200, patience=300)


def softmax_weights(values: np.ndarray, tau: float) -> np.ndarray:
    """Weights concentrating on the maxima of `values` as tau -> 0."""
    v = np.asarray(values, dtype=float)
    top = v.max()
    scale = max(tau * abs(top), 1e-300)
    w = np.exp((v - top) / scale)
    return w / w.sum()


def _run_single(objective, x0, cfg: AscentConfig):
    nrm = np.linalg.norm(x0)
    if nrm == 0.0 or not np.isfinite(nrm):
        return -np.inf, x0
    x = x0 / nrm
    tau = cfg.tau0
    decay = (cfg.tau_end / cfg.tau0) ** (1.0 / max(cfg.iters, 1))
    val, g = objective(x, tau)
    if not np.isfinite(val):
        return -np.inf, x
    t = cfg.step0
    best_val, best_x = val, x.copy()
    stall = 0
    for _ in range(cfg.iters):
        tau *= decay
        gt = g - np.dot(g, x) * x  # tangent part; objective is scale-free
        gn = np.linalg.norm(gt)
        if gn == 0.0 or not np.isfinite(gn):
            break
        y = x + (t / gn) * gt
        ny = np.linalg.norm(y)
        if ny == 0.0:
            t *= cfg.shrink
            continue
        y = y / ny
        vy, gy = objective(y, tau)
        if np.isfinite(vy) and vy > val:
            gain = vy - val
            x, val, g = y, vy, gy
            t *= cfg.grow
            if val > best_val:
                best_val, best_x = val, y.copy()
            stall = stall + 1 if gain < cfg.rel_tol * (abs(val) + 1.0) else 0
        else:
            t *= cfg.shrink
            stall += 1
            # rejected: refresh the gradient at the narrower tie width
            _, g = objective(x, tau)
        if t < cfg.min_step or stall > cfg.patience:
            break
    return best_val, best_x


def ascent_maximize(objective, dim: int, cfg: AscentConfig = DEFAULT, warm_starts=()):
    """Maximize objective(x, tau) -> (log_value, gradient) over the sphere.

    Returns (best_log_value, best_x).  `warm_starts` are tried in addition
    to cfg.starts random Gaussian directions.
    """
    seeds = np.random.SeedSequence(cfg.seed).spawn(max(cfg.starts, 0))
    starts = [np.asarray(w, dtype=float).ravel() for w in warm_starts]
    starts += [np.random.default_rng(s).standard_normal(dim) for s in seeds]
    if not starts:
        raise ValueError("ascent needs at least one start")

    if cfg.threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda x0: _run_single(objective, x0, cfg), starts))
    else:
        results = [_run_single(objective, x0, cfg) for x0 in starts]

    best_val, best_x = -np.inf, starts[0]
    for val, x in results:
        if val > best_val:
            best_val, best_x = val, x
    return best_val, best_x
