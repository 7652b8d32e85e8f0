"""Variants beyond the risk-neutral symmetric model.

Risk-averse contestants evaluate a contest through a concave transform ``a``
of their per-headcount utility; designers stay risk neutral.  Pure (possibly
asymmetric) participation profiles are enumerated directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .contests import EPS_GAMMA, GammaProfile, TullockSpec, tullock_gamma
from .designer import designer_utility
from .errors import CapExceededError, ContestError, UnsupportedModelError
from .participation import (
    DEFAULT_GRID,
    ParticipationEquilibrium,
    expected_value,
    two_contest_equilibria,
    water_fill,
)


@dataclass(frozen=True)
class RiskProfile:
    """Utility transform a: [0, 1] -> [0, 1], a(0) = 0, a(1) = 1, increasing."""

    kind: str = "identity"
    coefficients: tuple[float, ...] = ()  # ascending powers, only for kind="poly"

    def __post_init__(self):
        if self.kind not in ("identity", "quartic", "poly"):
            raise ContestError(f"unknown risk profile {self.kind!r}")
        if self.kind == "poly":
            object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
            if abs(self(0.0)) > 1e-12 or abs(self(1.0) - 1.0) > 1e-12:
                raise ContestError("polynomial risk transform must satisfy a(0)=0 and a(1)=1")
            xs = np.linspace(0.0, 1.0, 1001)
            ys = np.polynomial.polynomial.polyval(xs, self.coefficients)
            if np.any(np.diff(ys) <= 0):
                raise ContestError("polynomial risk transform must be strictly increasing on [0, 1]")

    @classmethod
    def quartic(cls) -> RiskProfile:
        return cls("quartic")

    @classmethod
    def poly(cls, coefficients: Sequence[float]) -> RiskProfile:
        return cls("poly", tuple(coefficients))

    @property
    def is_identity(self) -> bool:
        return self.kind == "identity"

    def __call__(self, x: float) -> float:
        if self.kind == "identity":
            return x
        if self.kind == "quartic":
            return 1.0 - (1.0 - x) ** 4
        return float(np.polynomial.polynomial.polyval(x, self.coefficients))

    def to_json(self):
        if self.kind == "poly":
            return {"poly": list(self.coefficients)}
        return self.kind


def risk_from_json(obj) -> RiskProfile:
    if obj is None or obj == "identity":
        return RiskProfile()
    if obj == "quartic":
        return RiskProfile.quartic()
    if isinstance(obj, dict) and set(obj) == {"poly"}:
        return RiskProfile.poly(obj["poly"])
    raise ContestError(f"unknown risk profile {obj!r}")


def _transformed(c: GammaProfile, n: int, risk: RiskProfile) -> tuple[float, ...]:
    if n > c.n_max:
        raise ContestError(f"contest {c.name()} defines gamma only up to k={c.n_max} < n={n}")
    if risk.is_identity:
        return c.gamma[:n]
    if abs(c.reward - 1.0) > EPS_GAMMA:
        raise ContestError("risk-averse evaluation needs reward 1 so gamma lies in the transform's domain")
    return tuple(risk(g) for g in c.gamma[:n])


def beta_averse(c: GammaProfile, p: float, n: int, risk: RiskProfile) -> float:
    """E[a(gamma(k+1))] for k ~ Bin(n-1, p)."""
    if not 0.0 <= p <= 1.0:
        raise ContestError(f"probability {p} outside [0, 1]")
    return expected_value(_transformed(c, n, risk), p, n)


def solve_risk_averse(contests: Sequence[GammaProfile], n: int, risk: RiskProfile,
                      grid: int = DEFAULT_GRID) -> list[ParticipationEquilibrium]:
    """Symmetric equilibria where contestants rank contests by beta_averse."""
    values = [_transformed(c, n, risk) for c in contests]
    if all(all(v[k] <= v[k - 1] + EPS_GAMMA for k in range(1, n)) for v in values):
        return [water_fill(values, n)]
    if len(values) == 2:
        return two_contest_equilibria(values[0], values[1], n, grid)
    raise UnsupportedModelError("no algorithm for more than two non-monotone contests")


def solve_two_contest_risk_averse(c1: GammaProfile, c2: GammaProfile, n: int, risk: RiskProfile,
                                  grid: int = DEFAULT_GRID) -> list[ParticipationEquilibrium]:
    return two_contest_equilibria(_transformed(c1, n, risk), _transformed(c2, n, risk), n, grid)


@dataclass(frozen=True)
class ScanResult:
    taus: tuple[float, ...]
    utilities: tuple[float, ...]
    best_tau: float
    best_utility: float


def default_tau_grid(step: float = 1e-3, upper: float = 2.0) -> list[float]:
    count = int(round(upper / step))
    return [round(i * step, 12) for i in range(count + 1)]


def risk_averse_best_response_scan(tau_grid: Sequence[float] | None, opponent_tau: float, n: int,
                                   risk: RiskProfile, reward: float = 1.0) -> ScanResult:
    """Designer 1's utility for each Tullock tau on the grid against a fixed opponent."""
    taus = list(default_tau_grid() if tau_grid is None else tau_grid)
    if not taus:
        raise ContestError("empty tau grid")
    if any(t < 0 or t > 2 for t in taus):
        raise ContestError("risk-averse scan restricted to tau in [0, 2]")
    opponent = tullock_gamma(TullockSpec(reward, opponent_tau), n)
    utils = []
    for t in taus:
        mine = tullock_gamma(TullockSpec(reward, t), n)
        eq = solve_risk_averse([mine, opponent], n, risk)[0]
        utils.append(designer_utility(mine, eq.p[0], n))
    best = int(np.argmax(utils))
    return ScanResult(tuple(taus), tuple(utils), taus[best], utils[best])


# --- pure participation -----------------------------------------------------

@dataclass(frozen=True)
class PureAssignment:
    """Contest index chosen by each contestant (0-based contestants and contests)."""

    assignment: tuple[int, ...]

    def headcounts(self, m: int) -> tuple[int, ...]:
        counts = [0] * m
        for i in self.assignment:
            counts[i] += 1
        return tuple(counts)

    def groups(self, m: int) -> tuple[tuple[int, ...], ...]:
        """1-based contestant ids per contest, sorted."""
        return tuple(tuple(l + 1 for l, i in enumerate(self.assignment) if i == j) for j in range(m))


def _counts_are_stable(contests: Sequence[GammaProfile], counts: Sequence[int]) -> bool:
    for i, k_i in enumerate(counts):
        if k_i == 0:
            continue
        stay = contests[i](k_i)
        for j, k_j in enumerate(counts):
            if j != i and contests[j](k_j + 1) > stay + EPS_GAMMA:
                return False
    return True


def enumerate_pure_participation_equilibria(contests: Sequence[GammaProfile], n: int,
                                            cap: int = 10**6) -> list[PureAssignment]:
    """Assignments where no contestant gains by moving to another contest."""
    m = len(contests)
    if m < 1:
        raise ContestError("need at least one contest")
    for c in contests:
        if c.n_max < n:
            raise ContestError(f"contest {c.name()} defines gamma only up to k={c.n_max} < n={n}")
    if m**n > cap:
        raise CapExceededError(f"{m}^{n} assignments exceed cap {cap}")
    stable: dict[tuple[int, ...], bool] = {}
    out = []
    for a in itertools.product(range(m), repeat=n):
        pa = PureAssignment(a)
        counts = pa.headcounts(m)
        if counts not in stable:
            stable[counts] = _counts_are_stable(contests, counts)
        if stable[counts]:
            out.append(pa)
    return out


def pure_designer_utilities(contests: Sequence[GammaProfile], assignment: PureAssignment) -> tuple[float, ...]:
    counts = assignment.headcounts(len(contests))
    return tuple(c.reward - k * c(k) if k else 0.0 for c, k in zip(contests, counts))

