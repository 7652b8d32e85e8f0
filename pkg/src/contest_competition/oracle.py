"""Independent checks of the analytic formulas.

Monte-Carlo estimates draw participation outcomes directly instead of
summing binomial terms, and the equilibrium checks recompute payoffs with
``scipy.stats.binom`` or by literally moving one contestant.  Nothing here
calls the closed forms it is meant to audit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.stats import binom

from .contests import GammaProfile

CHUNK = 1 << 16
Z_THRESHOLD = 4.0


@dataclass(frozen=True)
class SimConfig:
    trials: int = 10**6
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    trials: int

    def z(self, exact: float) -> float:
        if self.stderr == 0.0:
            return 0.0 if abs(self.mean - exact) <= 1e-12 else math.inf
        return (self.mean - exact) / self.stderr

    def agrees(self, exact: float, threshold: float = Z_THRESHOLD) -> bool:
        return abs(self.z(exact)) <= threshold


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    # counter-based stream keyed by (seed, chunk): results do not depend on
    # how chunks are spread over workers
    return np.random.Generator(np.random.Philox(key=seed | (chunk << 64)))


def _simulate(cfg: SimConfig, draw: Callable[[np.random.Generator, int], np.ndarray]) -> Estimate:
    chunks = [(c, min(CHUNK, cfg.trials - c * CHUNK)) for c in range(math.ceil(cfg.trials / CHUNK))]

    def run(chunk: tuple[int, int]) -> tuple[float, float]:
        c, size = chunk
        x = draw(_chunk_rng(cfg.seed, c), size)
        return math.fsum(x), math.fsum(x * x)

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(ch) for ch in chunks]
    n = cfg.trials
    s = math.fsum(a for a, _ in parts)
    ss = math.fsum(b for _, b in parts)
    mean = s / n
    var = max(0.0, (ss - n * mean * mean) / (n - 1)) if n > 1 else 0.0
    return Estimate(mean, math.sqrt(var / n), n)


def mc_contestant_utility(contests: Sequence[GammaProfile], p: Sequence[float], n: int,
                          focal: int, cfg: SimConfig) -> Estimate:
    """Simulated payoff of a participant of ``focal`` when n-1 rivals sample contests from p."""
    cum = np.cumsum(np.asarray(p, dtype=float))
    cum[-1] = 1.0
    payoff = np.asarray(contests[focal].gamma[:n], dtype=float)
    m = len(p)

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        if n == 1:
            return np.full(size, payoff[0])
        picks = np.minimum(np.searchsorted(cum, rng.random((size, n - 1)), side="right"), m - 1)
        return payoff[(picks == focal).sum(axis=1)]

    return _simulate(cfg, draw)


def mc_designer_utility(contest: GammaProfile, p_i: float, n: int, cfg: SimConfig) -> Estimate:
    """Simulated designer revenue: each of n contestants joins with probability p_i."""
    gamma = np.asarray(contest.gamma[:n], dtype=float)
    revenue = np.concatenate([[0.0], contest.reward - np.arange(1, n + 1) * gamma])

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        k = (rng.random((size, n)) < p_i).sum(axis=1)
        return revenue[k]

    return _simulate(cfg, draw)


def _beta_scipy(c: GammaProfile, q: float, n: int) -> float:
    k = np.arange(n)
    return float(binom.pmf(k, n - 1, q) @ np.asarray(c.gamma[:n], dtype=float))


def grid_verify_participation(contests: Sequence[GammaProfile], p: Sequence[float], n: int,
                              grid_size: int = 101) -> float:
    """Largest gain of one contestant switching to any mix on the simplex edges grid."""
    m = len(contests)
    if m == 1:
        return 0.0
    betas = np.array([_beta_scipy(c, q, n) for c, q in zip(contests, p)])
    current = float(np.dot(p, betas))
    best = -math.inf
    ts = np.linspace(0.0, 1.0, grid_size)
    for i in range(m):
        for j in range(i + 1, m):
            best = max(best, float(np.max(ts * betas[i] + (1 - ts) * betas[j])))
    return max(0.0, best - current)


def brute_force_pure_ne_check(contests: Sequence[GammaProfile], assignment: Sequence[int], n: int,
                              tol: float = 1e-12) -> bool:
    """Move each contestant to each other contest and compare realized gamma."""
    assignment = list(getattr(assignment, "assignment", assignment))
    if len(assignment) != n:
        raise ValueError(f"assignment has {len(assignment)} contestants, expected {n}")
    for who, here in enumerate(assignment):
        stay = contests[here](assignment.count(here))
        for there in range(len(contests)):
            if there == here:
                continue
            moved = assignment.copy()
            moved[who] = there
            if contests[there](moved.count(there)) > stay + tol:
                return False
    return True
