"""Designer, contestant and total welfare, and the welfare-optimality checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .contests import EPS_GAMMA
from .designer import (
    DEFAULT_CAP,
    CCGInstance,
    Profile,
    _check_cap,
    evaluate_profile,
    has_frd_option,
    mrd_profile,
)
from .errors import ContestError

WELFARE_TOL = 1e-9


@dataclass(frozen=True)
class WelfareReport:
    W_D: float
    W_C: float
    W_S: float
    holder_bound: float
    per_contest_reach: tuple[float, ...]


def holder_bound(rewards: Sequence[float], n: int) -> float:
    """sum R_i - (m-1)^n / (sum_i R_i^{-1/(n-1)})^{n-1}; tight for FRD contests."""
    if n < 2:
        raise ContestError("the Hoelder bound needs n >= 2; with n = 1 use max(R)")
    if any(r <= 0 for r in rewards):
        raise ContestError("rewards must be positive")
    m = len(rewards)
    s = math.fsum(r ** (-1.0 / (n - 1)) for r in rewards)
    return math.fsum(rewards) - (m - 1) ** n / s ** (n - 1)


def ws_upper_bound(rewards: Sequence[float], n: int) -> float:
    # one contestant: W_S = sum R_i p_i, maximized by the richest contest
    return max(rewards) if n == 1 else holder_bound(rewards, n)


def welfare_of(instance: CCGInstance, profile: Sequence[int]) -> WelfareReport:
    out = evaluate_profile(instance, profile)
    w_d, w_c, w_s = out.welfare
    n = instance.n
    reach = tuple(r * (1.0 - (1.0 - q) ** n) for r, q in zip(instance.rewards, out.p))
    return WelfareReport(w_d, w_c, w_s, ws_upper_bound(instance.rewards, n), reach)


def ws_sufficient_cases(instance: CCGInstance) -> list[str]:
    """Which sufficient conditions for W_S-maximality hold, in order.

    "unrestricted" (every contest allowed) cannot be certified from a finite
    set and is never reported; it is subsumed by "frd_available".
    """
    cases = []
    if all(has_frd_option(instance, i) for i in range(instance.m)):
        cases.append("frd_available")
    equal_rewards = all(abs(r - instance.rewards[0]) <= EPS_GAMMA for r in instance.rewards)
    if equal_rewards:
        as_sets = [frozenset(c.gamma for c in s) for s in instance.strategy_sets]
        if all(s == as_sets[0] for s in as_sets):
            cases.append("symmetric")
        mrd_sets = [frozenset(instance.strategy_sets[i][j].gamma for j in instance.mrd(i))
                    for i in range(instance.m)]
        if mrd_sets[0] and all(s == mrd_sets[0] for s in mrd_sets):
            cases.append("mrd_symmetric")
    return cases


@dataclass(frozen=True)
class WsVerdict:
    case: str  # first matching case or "none"
    matched_cases: tuple[str, ...]
    holds: bool  # the MRD profile attains the maximum W_S
    mrd_profile: Profile
    ws_mrd: float
    ws_max: float
    argmax: tuple[Profile, ...]


def check_ws_maximality(instance: CCGInstance, cap: int = DEFAULT_CAP) -> WsVerdict:
    _check_cap(instance.size, cap)
    t = mrd_profile(instance)
    ws = {prof: evaluate_profile(instance, prof).welfare[2] for prof in instance.profiles()}
    top = max(ws.values())
    argmax = tuple(p for p, w in ws.items() if w >= top - WELFARE_TOL)
    cases = ws_sufficient_cases(instance)
    return WsVerdict(
        cases[0] if cases else "none", tuple(cases), ws[t] >= top - WELFARE_TOL, t, ws[t], top, argmax
    )


@dataclass(frozen=True)
class WcVerdict:
    holds: bool
    mrd_profile: Profile
    wc_mrd: float
    margin: float  # min over profiles of W_C(profile) - W_C(MRD); >= -tol when holding
    worst_profile: Profile


def check_wc_minimality(instance: CCGInstance, cap: int = DEFAULT_CAP) -> WcVerdict:
    _check_cap(instance.size, cap)
    t = mrd_profile(instance)
    wc_t = evaluate_profile(instance, t).welfare[1]
    margin, worst = math.inf, t
    for prof in instance.profiles():
        d = evaluate_profile(instance, prof).welfare[1] - wc_t
        if d < margin:
            margin, worst = d, prof
    return WcVerdict(margin >= -WELFARE_TOL, t, wc_t, margin, worst)
