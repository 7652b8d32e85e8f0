"""Contestants' symmetric participation equilibrium over m contests.

Every contestant joins contest ``i`` with the same probability ``p[i]``.  A
participant of contest ``i`` then faces ``k ~ Bin(n-1, p[i])`` rivals and
earns ``beta_i(p[i]) = E[gamma_i(k+1)]``.  In equilibrium all supported
contests tie in ``beta`` and no unsupported contest pays more.

The solvers below work on plain per-headcount value vectors so the
risk-averse variant (values ``a(gamma)``) can reuse them unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .contests import GammaProfile, is_mdu
from .errors import ClosedFormInapplicable, ContestError, NotMDUError, UnsupportedModelError

EPS_P = 1e-9
EQ_TOL = 1e-9
MAX_BISECTION_ITER = 200
DEFAULT_GRID = 10_000


@dataclass(frozen=True)
class ParticipationEquilibrium:
    p: tuple[float, ...]
    common_utility: float
    support: tuple[int, ...]
    residual: float

    @property
    def m(self) -> int:
        return len(self.p)


@lru_cache(maxsize=None)
def binomial_coefficients(n_minus_1: int) -> tuple[float, ...]:
    """C(n-1, k) for k = 0..n-1 by the multiplicative running product."""
    out = []
    c = 1.0
    for k in range(n_minus_1 + 1):
        out.append(c)
        c = c * (n_minus_1 - k) / (k + 1)
    return tuple(out)


def expected_value(values: Sequence[float], p: float, n: int) -> float:
    """E[values[k]] for k ~ Bin(n-1, p); values[k] is the payoff with k rivals."""
    if p == 0.0:
        return float(values[0])
    if p == 1.0:
        return float(values[n - 1])
    q = 1.0 - p
    coefs = binomial_coefficients(n - 1)
    return math.fsum(coefs[k] * p**k * q ** (n - 1 - k) * values[k] for k in range(n))


def expected_value_grid(values: Sequence[float], ps: np.ndarray, n: int) -> np.ndarray:
    k = np.arange(n)
    ps = np.asarray(ps, dtype=float)[:, None]
    weights = np.asarray(binomial_coefficients(n - 1)) * ps**k * (1.0 - ps) ** (n - 1 - k)
    return weights @ np.asarray(values[:n], dtype=float)


def _check_p(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise ContestError(f"probability {p} outside [0, 1]")


def _check_n(c: GammaProfile, n: int) -> None:
    if n < 1:
        raise ContestError(f"n must be >= 1, got {n}")
    if n > c.n_max:
        raise ContestError(f"contest {c.name()} defines gamma only up to k={c.n_max} < n={n}")


def beta(c: GammaProfile, p: float, n: int) -> float:
    """Expected utility of a participant when each rival joins with probability p."""
    _check_p(p)
    _check_n(c, n)
    return expected_value(c.gamma, p, n)


# --- residual ---------------------------------------------------------------

def _residual_from_betas(betas: Sequence[float], p: Sequence[float], eps_p: float = EPS_P) -> float:
    support = [i for i, q in enumerate(p) if q > eps_p]
    if not support:
        return math.inf
    top = max(betas)
    dominated = max(top - betas[i] for i in support)
    spread = max(betas[i] for i in support) - min(betas[i] for i in support)
    return max(0.0, dominated) + spread


def _check_vector(p: Sequence[float], m: int) -> None:
    if len(p) != m:
        raise ContestError(f"probability vector has length {len(p)}, expected {m}")
    for q in p:
        _check_p(q)
    if abs(sum(p) - 1.0) > 1e-9:
        raise ContestError(f"probabilities sum to {sum(p)}, expected 1")


def equilibrium_residual(contests: Sequence[GammaProfile], p: Sequence[float], n: int) -> float:
    """Violation of the equilibrium condition; 0 exactly at an equilibrium.

    Sum of the largest gain from moving supported mass to any contest and
    the largest beta spread among supported contests.
    """
    _check_vector(p, len(contests))
    betas = [beta(c, q, n) for c, q in zip(contests, p)]
    return _residual_from_betas(betas, p)


def _make_equilibrium(values: Sequence[Sequence[float]], p: Sequence[float], n: int,
                      eps_p: float = EPS_P) -> ParticipationEquilibrium:
    p = [0.0 if q <= eps_p else q for q in p]
    total = sum(p)
    p = tuple(q / total for q in p)
    betas = [expected_value(v, q, n) for v, q in zip(values, p)]
    support = tuple(i for i, q in enumerate(p) if q > 0.0)
    u_c = sum(betas[i] for i in support) / len(support)
    return ParticipationEquilibrium(p, u_c, support, _residual_from_betas(betas, p, eps_p))


# --- single-player edge case ------------------------------------------------

def _solve_single_contestant(values: Sequence[Sequence[float]]) -> ParticipationEquilibrium:
    # n = 1: beta_i == values_i[0] for every p, so any mix over the argmax is an
    # equilibrium; the uniform one is returned.
    tops = [float(v[0]) for v in values]
    best = max(tops)
    winners = [i for i, t in enumerate(tops) if t >= best - EQ_TOL]
    p = tuple(1.0 / len(winners) if i in winners else 0.0 for i in range(len(values)))
    return _make_equilibrium(values, p, 1)


# --- MDU water-filling ------------------------------------------------------

def _inverse_beta(values: Sequence[float], u: float, n: int) -> float:
    """The p in [0, 1] with E[values] = u, clamped (beta strictly decreasing)."""
    if u >= values[0]:
        return 0.0
    if u <= values[n - 1]:
        return 1.0
    return brentq(lambda q: expected_value(values, q, n) - u, 0.0, 1.0, xtol=1e-16, rtol=8.9e-16, maxiter=200)


def water_fill(values: Sequence[Sequence[float]], n: int) -> ParticipationEquilibrium:
    """Common utility level u with sum_i beta_i^{-1}(u) = 1, bracketed on [0, max R]."""
    if n == 1:
        return _solve_single_contestant(values)
    lo, hi = 0.0, max(float(v[0]) for v in values)

    def mass(u: float) -> list[float]:
        return [_inverse_beta(v, u, n) for v in values]

    def excess(u: float) -> float:
        return math.fsum(mass(u)) - 1.0

    # excess is continuous and non-increasing in u: excess(0) = m-1 >= 0 and
    # excess(max R) = -1 (the richest contest is empty at its own reward)
    if len(values) == 1:
        return _make_equilibrium(values, [1.0], n)
    u = brentq(excess, lo, hi, xtol=1e-16, rtol=8.9e-16, maxiter=MAX_BISECTION_ITER)
    p = mass(u)
    return _make_equilibrium(values, p, n)


def _prepare(contests: Sequence[GammaProfile], n: int) -> list[Sequence[float]]:
    if not contests:
        raise ContestError("need at least one contest")
    for c in contests:
        _check_n(c, n)
    return [c.gamma[:n] for c in contests]


def solve_symmetric_equilibrium_mdu(contests: Sequence[GammaProfile], n: int) -> ParticipationEquilibrium:
    """The unique symmetric participation equilibrium of MDU contests."""
    values = _prepare(contests, n)
    for c in contests:
        if not is_mdu(c.truncate(n)):
            raise NotMDUError(f"contest {c.name()} does not have monotonically decreasing utility")
    return water_fill(values, n)


def frd_closed_form_probabilities(rewards: Sequence[float], n: int) -> tuple[float, ...]:
    """Participation vector when every contest fully dissipates rent.

    1 - p_i = (m-1) R_i^{-1/(n-1)} / sum_j R_j^{-1/(n-1)}; only valid when
    every contest ends up supported.
    """
    if n < 2:
        raise ContestError("closed form needs n >= 2")
    if any(r <= 0 for r in rewards):
        raise ContestError("rewards must be positive")
    m = len(rewards)
    weights = [r ** (-1.0 / (n - 1)) for r in rewards]
    total = sum(weights)
    p = tuple(1.0 - (m - 1) * w / total for w in weights)
    if any(q < 0 for q in p):
        raise ClosedFormInapplicable(f"closed form gives negative probabilities {p}; support is a proper subset")
    return p


# --- general two-contest solver ---------------------------------------------

def _bisect_root(f: Callable[[float], float], a: float, b: float, fa: float, xtol: float = 1e-15) -> float:
    for _ in range(MAX_BISECTION_ITER):
        if b - a <= xtol:
            break
        c = 0.5 * (a + b)
        fc = f(c)
        if fc == 0.0:
            return c
        if (fc < 0) == (fa < 0):
            a, fa = c, fc
        else:
            b = c
    return 0.5 * (a + b)


def two_contest_equilibria(v1: Sequence[float], v2: Sequence[float], n: int,
                           grid: int = DEFAULT_GRID) -> list[ParticipationEquilibrium]:
    """All symmetric equilibria for two contests with value vectors v1, v2."""
    values = [v1, v2]
    if n == 1:
        return [_solve_single_contestant(values)]

    def f(q: float) -> float:
        return expected_value(v1, q, n) - expected_value(v2, 1.0 - q, n)

    found: list[float] = []
    size = grid
    while True:
        ps = np.linspace(0.0, 1.0, size + 1)
        fs = expected_value_grid(v1, ps, n) - expected_value_grid(v2, 1.0 - ps, n)
        roots: list[float] = [float(q) for q in ps[fs == 0.0]]
        left, right = fs[:-1], fs[1:]
        for i in np.flatnonzero((left != 0.0) & (right != 0.0) & ((left < 0) != (right < 0))):
            roots.append(_bisect_root(f, float(ps[i]), float(ps[i + 1]), float(fs[i])))
        # tangent roots: |f| has a local minimum without a sign change
        a, b, c = np.abs(fs[:-2]), np.abs(fs[1:-1]), np.abs(fs[2:])
        same = (np.sign(fs[:-2]) == np.sign(fs[1:-1])) & (np.sign(fs[1:-1]) == np.sign(fs[2:]))
        for j in np.flatnonzero((b <= a) & (b <= c) & same & (b > 0.0)):
            i = j + 1
            res = minimize_scalar(lambda q: abs(f(q)), bounds=(ps[i - 1], ps[i + 1]),
                                  method="bounded", options={"xatol": 1e-14})
            if abs(f(res.x)) <= 1e-12:
                roots.append(float(res.x))
        # corner equilibria: everyone in one contest, the other is weakly worse
        if v2[n - 1] >= v1[0] - EQ_TOL:
            roots.append(0.0)
        if v1[n - 1] >= v2[0] - EQ_TOL:
            roots.append(1.0)
        found = roots
        if found or size >= 100 * grid:
            break
        size *= 10
    if not found:
        raise RuntimeError("no symmetric participation equilibrium located; grid exhausted")

    out: list[ParticipationEquilibrium] = []
    for q in sorted(found):
        eq = _make_equilibrium(values, (q, 1.0 - q), n)
        if eq.residual > EQ_TOL:
            continue
        if out and abs(out[-1].p[0] - eq.p[0]) <= 1e-9:
            continue
        out.append(eq)
    return out


def solve_two_contest_general(c1: GammaProfile, c2: GammaProfile, n: int,
                              grid: int = DEFAULT_GRID) -> list[ParticipationEquilibrium]:
    """Every symmetric equilibrium for two contests, MDU or not, sorted by p_1."""
    v1, v2 = _prepare([c1, c2], n)
    return two_contest_equilibria(v1, v2, n, grid)


def solve_participation(contests: Sequence[GammaProfile], n: int,
                        grid: int = DEFAULT_GRID) -> list[ParticipationEquilibrium]:
    """Route to the MDU solver or the two-contest scan; list sorted by p_1."""
    values = _prepare(contests, n)
    if all(is_mdu(c.truncate(n)) for c in contests):
        return [water_fill(values, n)]
    if len(contests) == 2:
        return two_contest_equilibria(values[0], values[1], n, grid)
    raise UnsupportedModelError(
        f"no algorithm for {len(contests)} contests when some contest is not MDU"
    )
