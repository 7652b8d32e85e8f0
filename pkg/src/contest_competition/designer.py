"""Designers' game: utilities, best responses, equilibria, dominance, Pareto.

Designers pick one contest each from a finite strategy set; contestants then
play their symmetric participation equilibrium.  When that equilibrium is not
unique (non-MDU contests, two designers) every equilibrium is kept and a
selection rule picks the one used for designer payoffs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .contests import EPS_GAMMA, GammaProfile, is_full_rent_dissipation, is_mdu, mrd_subset
from .errors import CapExceededError, ContestError
from .participation import ParticipationEquilibrium, beta, binomial_coefficients, solve_participation

UTIL_TOL = 1e-9
DEFAULT_CAP = 10**6
SELECTION_RULES = ("lowest_p1", "highest_p1")

Profile = tuple[int, ...]


def designer_utility(c: GammaProfile, p: float, n: int) -> float:
    """R[1 - (1-p)^n] - n p beta(c, p): reach-weighted reward minus contestants' take."""
    return c.reward * (1.0 - (1.0 - p) ** n) - n * p * beta(c, p, n)


def designer_utility_direct(c: GammaProfile, p: float, n: int) -> float:
    """E[(R - k gamma(k)) 1[k >= 1]] with k ~ Bin(n, p), summed term by term."""
    coefs = binomial_coefficients(n)
    return math.fsum(
        coefs[k] * p**k * (1.0 - p) ** (n - k) * (c.reward - k * c(k)) for k in range(1, n + 1)
    )


@dataclass(frozen=True)
class CCGInstance:
    """Contest competition game with finite strategy sets."""

    n: int
    rewards: tuple[float, ...]
    strategy_sets: tuple[tuple[GammaProfile, ...], ...]
    selection: str = "lowest_p1"
    util_tol: float = UTIL_TOL
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rewards = tuple(float(r) for r in self.rewards)
        object.__setattr__(self, "rewards", rewards)
        if self.n < 1:
            raise ContestError(f"n must be >= 1, got {self.n}")
        if len(rewards) < 2:
            raise ContestError("a contest competition game needs m >= 2 designers")
        if len(self.strategy_sets) != len(rewards):
            raise ContestError("one strategy set per designer is required")
        if self.selection not in SELECTION_RULES:
            raise ContestError(f"unknown selection rule {self.selection!r}; use one of {SELECTION_RULES}")
        if not self.util_tol >= 0:
            raise ContestError(f"tolerance must be >= 0, got {self.util_tol}")
        sets = []
        for i, (r, options) in enumerate(zip(rewards, self.strategy_sets)):
            if not options:
                raise ContestError(f"designer {i} has an empty strategy set")
            row = []
            for c in options:
                if abs(c.reward - r) > EPS_GAMMA * max(1.0, r):
                    raise ContestError(f"designer {i}: contest {c.name()} has reward {c.reward}, expected {r}")
                row.append(c.truncate(self.n))
            sets.append(tuple(row))
        object.__setattr__(self, "strategy_sets", tuple(sets))

    @property
    def m(self) -> int:
        return len(self.rewards)

    @property
    def size(self) -> int:
        return math.prod(len(s) for s in self.strategy_sets)

    def contests(self, profile: Sequence[int]) -> list[GammaProfile]:
        if len(profile) != self.m:
            raise ContestError(f"profile {tuple(profile)} has {len(profile)} entries, expected {self.m}")
        for i, j in enumerate(profile):
            if not 0 <= j < len(self.strategy_sets[i]):
                raise ContestError(f"designer {i}: strategy index {j} out of range")
        return [self.strategy_sets[i][j] for i, j in enumerate(profile)]

    def profiles(self) -> Iterator[Profile]:
        return itertools.product(*(range(len(s)) for s in self.strategy_sets))

    def all_mdu(self) -> bool:
        return all(is_mdu(c) for s in self.strategy_sets for c in s)

    def mrd(self, designer: int) -> list[int]:
        return mrd_subset(self.strategy_sets[designer])

    def mrd_mdu(self, designer: int) -> list[int]:
        return [j for j in self.mrd(designer) if is_mdu(self.strategy_sets[designer][j])]


@dataclass(frozen=True)
class ProfileOutcome:
    profile: Profile
    equilibrium: ParticipationEquilibrium
    designer_utilities: tuple[float, ...]
    contestant_utility: float
    welfare: tuple[float, float, float]  # (W_D, W_C, W_S)

    @property
    def p(self) -> tuple[float, ...]:
        return self.equilibrium.p


def _check_cap(count: int, cap: int) -> None:
    if count > cap:
        raise CapExceededError(f"enumeration of {count} profiles exceeds cap {cap}")


def _outcome(instance: CCGInstance, profile: Profile, eq: ParticipationEquilibrium) -> ProfileOutcome:
    n = instance.n
    contests = instance.contests(profile)
    utils = tuple(designer_utility(c, q, n) for c, q in zip(contests, eq.p))
    w_d = math.fsum(utils)
    w_c = n * math.fsum(q * beta(c, q, n) for c, q in zip(contests, eq.p))
    w_s = math.fsum(r * (1.0 - (1.0 - q) ** n) for r, q in zip(instance.rewards, eq.p))
    return ProfileOutcome(profile, eq, utils, eq.common_utility, (w_d, w_c, w_s))


def profile_outcomes(instance: CCGInstance, profile: Sequence[int]) -> list[ProfileOutcome]:
    """One outcome per symmetric participation equilibrium, sorted by p_1."""
    profile = tuple(int(j) for j in profile)
    cached = instance._cache.get(profile)
    if cached is None:
        eqs = solve_participation(instance.contests(profile), instance.n)
        cached = [_outcome(instance, profile, eq) for eq in eqs]
        instance._cache[profile] = cached
    return cached


def select(outcomes: Sequence[ProfileOutcome], rule: str) -> ProfileOutcome:
    if rule == "lowest_p1":
        return outcomes[0]
    if rule == "highest_p1":
        return outcomes[-1]
    raise ContestError(f"unknown selection rule {rule!r}")


def evaluate_profile(instance: CCGInstance, profile: Sequence[int]) -> ProfileOutcome:
    """Outcome under the instance's equilibrium-selection rule."""
    return select(profile_outcomes(instance, profile), instance.selection)


def _utility(instance: CCGInstance, profile: Profile, designer: int) -> float:
    return evaluate_profile(instance, profile).designer_utilities[designer]


def _replace(profile: Sequence[int], designer: int, j: int) -> Profile:
    out = list(profile)
    out[designer] = j
    return tuple(out)


def best_responses(instance: CCGInstance, designer: int, profile: Sequence[int]) -> list[int]:
    """Indices in S_designer maximizing its utility against profile[-designer]."""
    if not 0 <= designer < instance.m:
        raise ContestError(f"designer {designer} out of range")
    utils = [
        _utility(instance, _replace(profile, designer, j), designer)
        for j in range(len(instance.strategy_sets[designer]))
    ]
    best = max(utils)
    return [j for j, u in enumerate(utils) if u >= best - instance.util_tol]


@dataclass(frozen=True)
class Deviation:
    designer: int
    to: int
    gain: float


@dataclass(frozen=True)
class EquilibriumCheck:
    holds: bool
    witness: Deviation | None
    per_equilibrium: tuple[bool, ...]  # verdict if contestants play each equilibrium of the profile


def is_equilibrium(instance: CCGInstance, profile: Sequence[int]) -> EquilibriumCheck:
    profile = tuple(profile)
    outcomes = profile_outcomes(instance, profile)
    chosen = select(outcomes, instance.selection)
    # best deviation payoff per designer, deviations evaluated under the selection rule
    best_dev: list[tuple[float, int]] = []
    for i in range(instance.m):
        alts = [(j, _utility(instance, _replace(profile, i, j), i))
                for j in range(len(instance.strategy_sets[i])) if j != profile[i]]
        best_dev.append(max(((u, j) for j, u in alts), default=(-math.inf, -1)))
    # witness: the lowest-index designer with a profitable deviation, at its best alternative
    witness = None
    for i, (u_dev, j) in enumerate(best_dev):
        gain = u_dev - chosen.designer_utilities[i]
        if gain > instance.util_tol:
            witness = Deviation(i, j, gain)
            break
    per_eq = tuple(
        all(best_dev[i][0] <= o.designer_utilities[i] + instance.util_tol for i in range(instance.m))
        for o in outcomes
    )
    return EquilibriumCheck(witness is None, witness, per_eq)


def enumerate_equilibria(instance: CCGInstance, cap: int = DEFAULT_CAP) -> list[Profile]:
    """All pure designer profiles passing is_equilibrium, in product order."""
    _check_cap(instance.size, cap)
    return [prof for prof in instance.profiles() if is_equilibrium(instance, prof).holds]


@dataclass(frozen=True)
class DominanceCheck:
    holds: bool
    witness: Profile | None  # opponent profile (own entry = the better alternative)
    gain: float = 0.0


def is_dominant(instance: CCGInstance, designer: int, contest_index: int,
                cap: int = DEFAULT_CAP) -> DominanceCheck:
    """Best response against every opponent profile in the given finite sets."""
    if not 0 <= contest_index < len(instance.strategy_sets[designer]):
        raise ContestError(f"contest index {contest_index} out of range")
    others = [range(len(s)) if i != designer else (contest_index,)
              for i, s in enumerate(instance.strategy_sets)]
    _check_cap(math.prod(len(r) for r in others) * len(instance.strategy_sets[designer]), cap)
    for prof in itertools.product(*others):
        own = _utility(instance, prof, designer)
        for j in range(len(instance.strategy_sets[designer])):
            if j == contest_index:
                continue
            alt = _replace(prof, designer, j)
            gain = _utility(instance, alt, designer) - own
            if gain > instance.util_tol:
                return DominanceCheck(False, alt, gain)
    return DominanceCheck(True, None)


@dataclass(frozen=True)
class ParetoCheck:
    optimal: bool
    improvement: Profile | None


def pareto_check(instance: CCGInstance, profile: Sequence[int], cap: int = DEFAULT_CAP) -> ParetoCheck:
    _check_cap(instance.size, cap)
    base = evaluate_profile(instance, profile).designer_utilities
    for prof in instance.profiles():
        u = evaluate_profile(instance, prof).designer_utilities
        if all(a >= b - instance.util_tol for a, b in zip(u, base)) and any(a > b + instance.util_tol for a, b in zip(u, base)):
            return ParetoCheck(False, prof)
    return ParetoCheck(True, None)


def mrd_profile(instance: CCGInstance) -> Profile:
    """First MRD member with MDU in every set."""
    choice = []
    for i in range(instance.m):
        options = instance.mrd_mdu(i)
        if not options:
            raise ContestError(f"designer {i} has no maximal-rent-dissipation contest with MDU")
        choice.append(options[0])
    return tuple(choice)


def predicted_equilibria(instance: CCGInstance) -> list[Profile]:
    """Equilibrium set implied by the MRD characterization for all-MDU games.

    With support P of the all-MRD profile: if |P| >= 2 the equilibria are the
    profiles using MRD contests on P; if P = {i0}, those whose gamma(n) in
    contest i0 matches the MRD value.
    """
    if not instance.all_mdu():
        raise ContestError("the MRD characterization needs every contest to have MDU")
    t = mrd_profile(instance)
    support = evaluate_profile(instance, t).equilibrium.support
    n = instance.n
    out = []
    for prof in instance.profiles():
        if len(support) >= 2:
            ok = all(prof[i] in instance.mrd(i) for i in support)
        else:
            i0 = support[0]
            target = instance.strategy_sets[i0][t[i0]](n)
            ok = abs(instance.strategy_sets[i0][prof[i0]](n) - target) <= EPS_GAMMA
        if ok:
            out.append(prof)
    return out


@dataclass(frozen=True)
class SupportInvarianceReport:
    mrd_profile: Profile
    p_mrd: tuple[float, ...]
    support: tuple[int, ...]
    equilibria: tuple[Profile, ...]
    predicted: tuple[Profile, ...]
    max_deviation: float

    @property
    def holds(self) -> bool:
        return self.max_deviation <= 1e-8 and set(self.equilibria) == set(self.predicted)


def support_invariance(instance: CCGInstance, cap: int = DEFAULT_CAP) -> SupportInvarianceReport:
    """Every equilibrium induces the participation vector of the all-MRD profile."""
    t = mrd_profile(instance)
    p_t = evaluate_profile(instance, t).p
    eqs = enumerate_equilibria(instance, cap)
    dev = max(
        (max(abs(a - b) for a, b in zip(evaluate_profile(instance, e).p, p_t)) for e in eqs),
        default=0.0,
    )
    support = evaluate_profile(instance, t).equilibrium.support
    return SupportInvarianceReport(t, p_t, support, tuple(eqs), tuple(predicted_equilibria(instance)), dev)


def has_frd_option(instance: CCGInstance, designer: int) -> bool:
    return any(is_full_rent_dissipation(c) for c in instance.strategy_sets[designer])
