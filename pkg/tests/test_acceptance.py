"""Acceptance criteria 1-9.  Each test records a verdict line printed in the session summary."""

import itertools
import math
import time

import numpy as np

from conftest import pointwise_min, random_gamma, random_mdu, random_mdu_instance
from contest_competition import reproduce
from contest_competition.contests import TullockSpec, mrd_subset, tullock_gamma
from contest_competition.designer import (
    CCGInstance,
    designer_utility,
    designer_utility_direct,
    enumerate_equilibria,
    is_dominant,
    is_equilibrium,
    mrd_profile,
)
from contest_competition.oracle import SimConfig, mc_contestant_utility, mc_designer_utility
from contest_competition.participation import (
    beta,
    solve_participation,
    solve_symmetric_equilibrium_mdu,
    solve_two_contest_general,
)
from contest_competition.welfare import holder_bound, welfare_of

SEED = 20240611
CASES = 1000
VERDICTS: dict[int, list[tuple[str, bool, str]]] = {}


def record(criterion: int, label: str, ok: bool, detail: str = "") -> None:
    VERDICTS.setdefault(criterion, []).append((label, ok, detail))
    print(f"criterion {criterion} [{label}]: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"criterion {criterion} [{label}] failed: {detail}"


def checks_line(criterion: int, label: str, checks, runtime_limit: float | None = None, runtime: float = 0.0):
    bad = [f"{c.name}: {c.computed!r} vs {c.expected!r}" for c in checks if not c.passed]
    if runtime_limit is not None and runtime >= runtime_limit:
        bad.append(f"runtime {runtime:.3f}s >= {runtime_limit}s")
    detail = f"{len(checks)} checks" + (f", runtime {runtime:.3f}s" if runtime_limit else "")
    record(criterion, label, not bad, "; ".join(bad) if bad else detail)


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# --- worked examples --------------------------------------------------------

def test_criterion_1_example_one():
    checks, dt = timed(reproduce.ex1)
    checks_line(1, "example 1, m=2 n=6", checks, 1.0, dt)


def test_criterion_2_non_monotone_tullock():
    checks, dt = timed(reproduce.ex_nonmono)
    checks_line(2, "non-monotone Tullock, n=10", checks, 1.0, dt)


def test_criterion_3_wta_not_dominant():
    checks_line(3, "winner-take-all not dominant, n=10", reproduce.ex_wta())


def test_criterion_4_welfare_counterexample():
    checks_line(4, "welfare counterexample", reproduce.welfare_ex())


def test_criterion_5_example_two():
    inst = reproduce.bundled("ex2").instance()
    assert inst.rewards == (1.0, 5.0, 5.0)
    checks_line(5, "example 2, m=3 n=3", reproduce.ex2())


def test_criterion_6_risk_averse():
    checks_line(6, "risk-averse contestants", reproduce.ex_risk())


def test_criterion_7_asymmetric_pure():
    checks_line(7, "asymmetric pure participation", reproduce.ex_asym())


# --- criterion 8: property suite --------------------------------------------

def test_criterion_8_designer_utility_identity():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(CASES):
        n = int(rng.integers(1, 13))
        make = random_mdu if rng.random() < 0.5 else random_gamma
        c = make(rng, n, float(rng.uniform(0.1, 2.0)))
        p = float(rng.uniform())
        worst = max(worst, abs(designer_utility(c, p, n) - designer_utility_direct(c, p, n)))
    record(8, "designer utility identity", worst <= 1e-12, f"max |diff| {worst:.2e} over {CASES} cases")


def test_criterion_8_beta_strictly_decreasing():
    rng = np.random.default_rng(SEED + 1)
    bad = 0
    for _ in range(CASES):
        n = int(rng.integers(2, 13))
        c = random_mdu(rng, n, float(rng.uniform(0.1, 2.0)))
        p, q = sorted(rng.uniform(0, 1, 2))
        bad += not (p < q and beta(c, p, n) > beta(c, q, n))
    record(8, "beta strictly decreasing under MDU", bad == 0, f"{bad} violations over {CASES} cases")


def test_criterion_8_mrd_pointwise_beta():
    rng = np.random.default_rng(SEED + 2)
    grid = np.linspace(0, 1, 21)
    bad = 0
    for _ in range(CASES):
        n = int(rng.integers(1, 11))
        members = [random_gamma(rng, n) for _ in range(int(rng.integers(1, 4)))]
        members.append(pointwise_min(members))
        (t, *_) = mrd_subset(members)
        bad += any(beta(members[t], q, n) > beta(c, q, n) + 1e-15 for c in members for q in grid)
    record(8, "MRD member has pointwise smallest beta", bad == 0, f"{bad} violations over {CASES} cases")


def test_criterion_8_uniqueness_two_contests():
    rng = np.random.default_rng(SEED + 3)
    bad = []
    for case in range(CASES):
        n = int(rng.integers(2, 11))
        c1 = random_mdu(rng, n, float(rng.uniform(0.3, 2.0)))
        c2 = random_mdu(rng, n, float(rng.uniform(0.3, 2.0)))
        eqs = solve_two_contest_general(c1, c2, n)
        wf = solve_symmetric_equilibrium_mdu([c1, c2], n)
        if len(eqs) != 1 or max(abs(a - b) for a, b in zip(eqs[0].p, wf.p)) > 1e-8:
            bad.append(case)
    record(8, "uniqueness matches water-filling", not bad, f"{len(bad)} mismatches over {CASES} cases")


def test_criterion_8_comparative_statics():
    rng = np.random.default_rng(SEED + 4)
    bad, zero_cases = 0, 0
    for _ in range(CASES):
        m, n = int(rng.integers(2, 5)), int(rng.integers(2, 10))
        rewards = rng.uniform(0.2, 2.0, m)
        contests = [random_mdu(rng, n, float(r)) for r in rewards]
        t1 = pointwise_min([contests[0], random_mdu(rng, n, float(rewards[0]))])
        p = solve_participation(contests, n)[0].p
        p_hat = solve_participation([t1, *contests[1:]], n)[0].p
        ok = p[0] >= p_hat[0] - 1e-9 and all(p[j] <= p_hat[j] + 1e-9 for j in range(1, m))
        zeros = [i for i in range(m) if p_hat[i] == 0.0]
        zero_cases += bool(zeros)
        ok = ok and all(p[i] <= 1e-9 for i in zeros)
        bad += not ok
    record(8, "comparative statics signs", bad == 0 and zero_cases > 0,
           f"{bad} violations over {CASES} cases, {zero_cases} with an unsupported contest")


def test_criterion_8_holder_bound():
    rng = np.random.default_rng(SEED + 5)
    worst = -math.inf
    for _ in range(CASES):
        m, n = int(rng.integers(2, 5)), int(rng.integers(2, 10))
        rewards = tuple(float(r) for r in rng.uniform(0.2, 2.0, m))
        if m == 2 and rng.random() < 0.3:
            contests = [random_gamma(rng, n, r) for r in rewards]
        else:
            contests = [random_mdu(rng, n, r) for r in rewards]
        inst = CCGInstance(n, rewards, tuple((c,) for c in contests))
        worst = max(worst, welfare_of(inst, (0,) * m).W_S - holder_bound(rewards, n))
    record(8, "Hoelder bound on W_S", worst <= 1e-9, f"max excess {worst:.2e} over {CASES} cases")


def test_criterion_8_mrd_profile_is_equilibrium():
    rng = np.random.default_rng(SEED + 6)
    bad = 0
    for _ in range(100):
        m, n = int(rng.integers(2, 4)), int(rng.integers(1, 8))
        inst = random_mdu_instance(rng, m, n, int(rng.integers(1, 5)))
        t = mrd_profile(inst)
        ok = is_equilibrium(inst, t).holds and all(is_dominant(inst, i, t[i]).holds for i in range(m))
        bad += not ok
    record(8, "MRD profile equilibrium and dominance", bad == 0, f"{bad} failures over 100 instances")


def _symmetric_reward_instance(rng: np.random.Generator) -> CCGInstance:
    m, n = int(rng.integers(2, 4)), int(rng.integers(1, 9))
    sets = []
    for _ in range(m):
        size = int(rng.integers(1, 5))
        base = [random_mdu(rng, n) for _ in range(max(1, size - 1))]
        members = base + [pointwise_min(base)] if size > 1 else base
        sets.append(tuple(members[i] for i in rng.permutation(len(members))))
    return CCGInstance(n, (1.0,) * m, tuple(sets))


def test_criterion_8_characterization_symmetric_rewards():
    rng = np.random.default_rng(SEED + 7)
    bad = 0
    for _ in range(CASES):
        inst = _symmetric_reward_instance(rng)
        mrd = [set(inst.mrd(i)) for i in range(inst.m)]
        expected = {p for p in itertools.product(*(range(len(s)) for s in inst.strategy_sets))
                    if all(p[i] in mrd[i] for i in range(inst.m))}
        bad += set(enumerate_equilibria(inst)) != expected
    record(8, "equilibria are the MRD profiles (equal rewards)", bad == 0, f"{bad} mismatches over {CASES} instances")


# --- criterion 9: Monte-Carlo oracle ----------------------------------------

def _oracle_configs():
    rng = np.random.default_rng(SEED + 8)
    for idx in range(20):
        m, n = int(rng.integers(1, 4)), int(rng.integers(2, 11))
        rewards = rng.uniform(0.5, 2.0, m)
        if idx % 4 == 3:
            contests = [tullock_gamma(TullockSpec(float(r), float(rng.choice([0.5, 1.0, 2.0, math.inf]))), n)
                        for r in rewards]
        else:
            contests = [random_mdu(rng, n, float(r)) for r in rewards]
        p = solve_participation(contests, n)[0].p
        focal = int(np.argmax(p))
        yield idx, contests, p, n, focal


def _oracle_run(contests, p, n, focal, seed):
    cfg = SimConfig(trials=10**6, seed=seed)
    b = mc_contestant_utility(contests, p, n, focal, cfg)
    u = mc_designer_utility(contests[focal], p[focal], n, cfg)
    return b, u


def test_criterion_9_oracle_agreement():
    start = time.perf_counter()
    worst, failures, first = 0.0, [], None
    for idx, contests, p, n, focal in _oracle_configs():
        b, u = _oracle_run(contests, p, n, focal, SEED + idx)
        zb = b.z(beta(contests[focal], p[focal], n))
        zu = u.z(designer_utility(contests[focal], p[focal], n))
        worst = max(worst, abs(zb), abs(zu))
        if abs(zb) > 4 or abs(zu) > 4:
            failures.append(idx)
        if first is None:
            first = (idx, contests, p, n, focal, b, u)
    idx, contests, p, n, focal, b, u = first
    deterministic = _oracle_run(contests, p, n, focal, SEED + idx) == (b, u)
    runtime = time.perf_counter() - start
    ok = not failures and deterministic and runtime < 30.0
    record(9, "Monte-Carlo oracle, 20 configs at 1e6 trials", ok,
           f"max |z| {worst:.2f}, failing configs {failures}, deterministic={deterministic}, runtime {runtime:.1f}s")
