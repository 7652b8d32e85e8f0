"""Worked examples recomputed from the bundled scenarios.

Each check pairs a published figure with the value computed here and the
tolerance it is held to.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .designer import designer_utility, enumerate_equilibria, evaluate_profile, is_dominant, is_equilibrium
from .extensions import (
    enumerate_pure_participation_equilibria,
    pure_designer_utilities,
    risk_averse_best_response_scan,
    solve_risk_averse,
)
from .oracle import brute_force_pure_ne_check
from .scenario import BUNDLED, bundled
from .welfare import check_wc_minimality, check_ws_maximality, welfare_of


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    computed: float
    tol: float

    @property
    def passed(self) -> bool:
        return abs(self.computed - self.expected) <= self.tol


def _flag(name: str, ok: bool) -> Check:
    return Check(name, 1.0, 1.0 if ok else 0.0, 0.0)


def ex1() -> list[Check]:
    inst = bundled("ex1").instance()  # index 0 = APA, 1 = C
    cc = evaluate_profile(inst, (1, 1))
    ac = evaluate_profile(inst, (0, 1))
    tol = 5e-4
    return [
        Check("u_1(C,C)", 0.7812, cc.designer_utilities[0], tol),
        Check("u_2(C,C)", 0.7812, cc.designer_utilities[1], tol),
        Check("p_1(APA,C)", 0.4061, ac.p[0], tol),
        Check("p_2(APA,C)", 0.5939, ac.p[1], tol),
        Check("u_1(APA,C)", 0.7761, ac.designer_utilities[0], tol),
        Check("u_2(APA,C)", 0.7323, ac.designer_utilities[1], tol),
        _flag("(C,C) is an equilibrium", is_equilibrium(inst, (1, 1)).holds),
        _flag("APA is not dominant", not is_dominant(inst, 0, 0).holds),
    ]


def ex_nonmono() -> list[Check]:
    inst = bundled("ex-nonmono").instance()
    cc = evaluate_profile(inst, (1, 1))
    ac = evaluate_profile(inst, (0, 1))
    tol = 5e-4
    return [
        Check("u_1(C,C)", 0.9658, cc.designer_utilities[0], tol),
        Check("p_1(APA,C)", 0.4125, ac.p[0], tol),
        Check("p_2(APA,C)", 0.5875, ac.p[1], tol),
        Check("u_1(APA,C)", 0.9607, ac.designer_utilities[0], tol),
        Check("u_2(APA,C)", 0.9509, ac.designer_utilities[1], tol),
        _flag("(C,C) is an equilibrium", is_equilibrium(inst, (1, 1)).holds),
    ]


def ex_wta() -> list[Check]:
    inst = bundled("ex-wta").instance()  # designer 1: APA, tau=1.2; designer 2: C
    hat = evaluate_profile(inst, (0, 0))
    alt = evaluate_profile(inst, (1, 0))
    tol = 5e-6
    return [
        Check("p_1(APA,C)", 0.366965, hat.p[0], tol),
        Check("p_1(tau=1.2,C)", 0.519786, alt.p[0], tol),
        Check("u_1(APA,C)", 0.929759, hat.designer_utilities[0], tol),
        Check("u_1(tau=1.2,C)", 0.930121, alt.designer_utilities[0], tol),
        _flag("u_1(tau=1.2) > u_1(APA)", alt.designer_utilities[0] > hat.designer_utilities[0]),
    ]


def ex2() -> list[Check]:
    inst = bundled("ex2").instance()
    apa = [len(s) - 1 for s in inst.strategy_sets]  # APA listed last
    eqs = enumerate_equilibria(inst)
    expected = {(j, apa[1], apa[2]) for j in range(len(inst.strategy_sets[0]))}
    checks = [_flag("equilibrium set = {(C_1, APA, APA)}", set(eqs) == expected)]
    for prof in sorted(expected):
        p = evaluate_profile(inst, prof).p
        for i, target in enumerate((0.0, 0.5, 0.5)):
            checks.append(Check(f"p_{i + 1}{prof}", target, p[i], 1e-9))
    return checks


def welfare_ex() -> list[Check]:
    inst = bundled("welfare-ex").instance()  # S_1 = {C}, S_2 = {C, T}
    ct = evaluate_profile(inst, (0, 1))
    return [
        Check("W_S(C,C)", 1.5, welfare_of(inst, (0, 0)).W_S, 1e-9),
        Check("W_S(C,T)", 1441 / 961, welfare_of(inst, (0, 1)).W_S, 1e-9),
        Check("p_1(C,T)", 16 / 31, ct.p[0], 1e-9),
        Check("p_2(C,T)", 15 / 31, ct.p[1], 1e-9),
        _flag("MRD profile does not maximize W_S", not check_ws_maximality(inst).holds),
        _flag("MRD profile minimizes W_C", check_wc_minimality(inst).holds),
    ]


def ex_risk() -> list[Check]:
    scen = bundled("ex-risk")  # designer 1: tau=1, tau=2; designer 2: tau=2
    inst = scen.instance()
    n = scen.n
    mine, other = inst.strategy_sets[0], inst.strategy_sets[1][0]
    eq1 = solve_risk_averse([mine[0], other], n, scen.risk)[0]
    eq2 = solve_risk_averse([mine[1], other], n, scen.risk)[0]
    u1 = designer_utility(mine[0], eq1.p[0], n)
    u2 = designer_utility(mine[1], eq2.p[0], n)
    scan = risk_averse_best_response_scan(None, 2 / 3, n, scen.risk)
    return [
        Check("p_1(tau=1,tau=2)", 256 / 337, eq1.p[0], 1e-9),
        Check("u_1(tau=1,tau=2)", 0.288529, u1, 5e-6),
        Check("u_1(tau=2,tau=2)", 0.25, u2, 1e-9),
        _flag("u_1(tau=1) > u_1(tau=2)", u1 > u2),
        Check("grid best response to tau=2/3", 2 / 3, scan.best_tau, 1e-3),
    ]


def ex_asym() -> list[Check]:
    inst = bundled("ex-asym").instance()  # designer 1: tau=1.5, APA; designer 2: APA
    contests = inst.contests((0, 0))
    target = (0, 0, 1)
    found = {a.assignment: a for a in enumerate_pure_participation_equilibria(contests, inst.n)}
    u1 = pure_designer_utilities(contests, found[target])[0] if target in found else float("nan")
    return [
        _flag("({1,2},{3}) is a pure equilibrium", target in found),
        _flag("brute-force check agrees", brute_force_pure_ne_check(contests, target, inst.n)),
        Check("u_1({1,2},{3})", 0.75, u1, 1e-12),
    ]


EXAMPLES: dict[str, Callable[[], list[Check]]] = {
    "ex1": ex1,
    "ex2": ex2,
    "ex-nonmono": ex_nonmono,
    "ex-wta": ex_wta,
    "ex-asym": ex_asym,
    "ex-risk": ex_risk,
    "welfare-ex": welfare_ex,
}
assert tuple(EXAMPLES) == BUNDLED


def run(example: str) -> list[Check]:
    if example not in EXAMPLES:
        raise KeyError(example)
    return EXAMPLES[example]()
