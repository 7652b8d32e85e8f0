import math

import numpy as np
import pytest

from conftest import random_gamma, random_mdu_instance
from contest_competition.contests import INF, GammaProfile, PiecewiseTullockSpec, TullockSpec, apa, materialize, tullock_gamma
from contest_competition.designer import (
    CCGInstance,
    best_responses,
    designer_utility,
    designer_utility_direct,
    enumerate_equilibria,
    evaluate_profile,
    is_dominant,
    is_equilibrium,
    mrd_profile,
    pareto_check,
    predicted_equilibria,
    profile_outcomes,
    support_invariance,
)
from contest_competition.errors import CapExceededError, ContestError

C6 = GammaProfile(1, (1, 0, 0, 0, 1 / 5, 1 / 6), "C")
C10 = materialize(PiecewiseTullockSpec(1, {k: 1 for k in range(7, 11)}, INF), 10)
CW = materialize(PiecewiseTullockSpec(1, {k: 1 for k in range(6, 11)}, INF), 10)


def tullock(r, tau, n):
    return tullock_gamma(TullockSpec(r, tau), n)


def ex1():
    s = (apa(1, 6), C6)
    return CCGInstance(6, (1, 1), (s, s))


def test_designer_utility_values():
    assert designer_utility(C6, 0.0, 6) == 0.0
    assert designer_utility(C6, 0.5, 6) == pytest.approx(0.78125, abs=1e-15)
    assert designer_utility(apa(1, 6), 0.40611060601690301241, 6) == pytest.approx(0.77610224692456450006, abs=1e-12)
    assert designer_utility(C6, 1 - 0.40611060601690301241, 6) == pytest.approx(0.73225405773760761021, abs=1e-12)
    assert designer_utility(C10, 0.5, 10) == pytest.approx(0.96584085131448412698, abs=1e-12)
    assert designer_utility(apa(2.5, 4), 1.0, 4) == 2.5


def test_designer_utility_identity(rng):
    for _ in range(200):
        n = int(rng.integers(1, 15))
        c = random_gamma(rng, n, float(rng.uniform(0.2, 5)))
        p = float(rng.uniform())
        assert designer_utility(c, p, n) == pytest.approx(designer_utility_direct(c, p, n), abs=1e-12)


def test_evaluate_profile_examples():
    inst = ex1()
    assert evaluate_profile(inst, (1, 1)).designer_utilities == pytest.approx((0.78125, 0.78125), abs=1e-12)
    wta = CCGInstance(10, (1, 1), ((apa(1, 10), tullock(1, 1.2, 10)), (CW,)))
    assert evaluate_profile(wta, (0, 0)).designer_utilities[0] == pytest.approx(0.92975890242465624947, abs=1e-10)
    assert evaluate_profile(wta, (1, 0)).designer_utilities[0] == pytest.approx(0.9301214808580344313, abs=1e-10)
    for n in (2, 3, 7):
        two = CCGInstance(n, (1, 1), ((apa(1, n),), (apa(1, n),)))
        out = evaluate_profile(two, (0, 0))
        assert out.welfare[2] == pytest.approx(2 - 2 * 0.5**n, abs=1e-12)
        assert out.designer_utilities[0] == pytest.approx(out.designer_utilities[1], abs=1e-12)


def test_outcome_invariants(rng):
    for _ in range(30):
        inst = random_mdu_instance(rng, int(rng.integers(2, 4)), int(rng.integers(1, 7)), 3)
        for prof in inst.profiles():
            o = evaluate_profile(inst, prof)
            w_d, w_c, w_s = o.welfare
            assert w_d + w_c == pytest.approx(w_s, abs=1e-9)
            for u, r in zip(o.designer_utilities, inst.rewards):
                assert -1e-12 <= u <= r + 1e-12


def test_instance_validation():
    with pytest.raises(ContestError):
        CCGInstance(3, (1,), ((apa(1, 3),),))
    with pytest.raises(ContestError):
        CCGInstance(3, (1, 2), ((apa(1, 3),), (apa(1, 3),)))
    with pytest.raises(ContestError):
        CCGInstance(3, (1, 1), ((apa(1, 3),), ()))
    with pytest.raises(ContestError):
        CCGInstance(4, (1, 1), ((apa(1, 3),), (apa(1, 4),)))
    with pytest.raises(ContestError):
        CCGInstance(3, (1, 1), ((apa(1, 3),), (apa(1, 3),)), selection="random")
    with pytest.raises(ContestError):
        ex1().contests((0, 2))


def test_best_responses():
    inst = ex1()
    assert best_responses(inst, 0, (0, 1)) == [1]
    single = CCGInstance(2, (1, 1), ((apa(1, 2),), (apa(1, 2), tullock(1, 1, 2))))
    assert best_responses(single, 0, (0, 1)) == [0]


def test_mrd_is_best_response_random(rng):
    for _ in range(20):
        inst = random_mdu_instance(rng, 2, int(rng.integers(2, 6)), 3)
        t = mrd_profile(inst)
        for prof in inst.profiles():
            for i in range(inst.m):
                assert t[i] in best_responses(inst, i, prof)


def test_is_equilibrium_examples():
    inst = ex1()
    assert is_equilibrium(inst, (1, 1)).holds
    chk = is_equilibrium(inst, (0, 1))
    assert not chk.holds
    assert (chk.witness.designer, chk.witness.to) == (0, 1)
    assert chk.witness.gain == pytest.approx(0.78125 - 0.77610224692456450006, abs=1e-12)


def test_mrd_profile_is_equilibrium_random(rng):
    for _ in range(20):
        inst = random_mdu_instance(rng, int(rng.integers(2, 4)), int(rng.integers(1, 6)), 3)
        assert is_equilibrium(inst, mrd_profile(inst)).holds


def test_enumerate_symmetric_rewards_only_mrd(rng):
    for _ in range(15):
        inst = random_mdu_instance(rng, 2, int(rng.integers(2, 6)), 3, equal_rewards=True)
        expected = {p for p in inst.profiles() if all(p[i] in inst.mrd(i) for i in range(inst.m))}
        assert set(enumerate_equilibria(inst)) == expected


def test_enumerate_single_supported_contest():
    s1 = (apa(1, 3), tullock(1, 0.5, 3))
    s2 = (GammaProfile(10, (10, 3, 3)), GammaProfile(10, (10, 4, 3)), GammaProfile(10, (10, 5, 10 / 3)))
    inst = CCGInstance(3, (1, 10), (s1, s2))
    assert evaluate_profile(inst, mrd_profile(inst)).equilibrium.support == (1,)
    expected = [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert enumerate_equilibria(inst) == expected
    assert predicted_equilibria(inst) == expected


def test_enumerate_asymmetric_reward_example():
    s1 = tuple(tullock(1, t, 3) for t in (0, 1, 1.5, INF))
    sj = tuple(tullock(5, t, 3) for t in (0, 1, 1.5, INF))
    inst = CCGInstance(3, (1, 5, 5), (s1, sj, sj))
    assert enumerate_equilibria(inst) == [(j, 3, 3) for j in range(4)]
    rep = support_invariance(inst)
    assert rep.holds
    assert rep.p_mrd == pytest.approx((0, 0.5, 0.5), abs=1e-12)


def test_enumerate_cap():
    s = tuple(tullock(1, t, 3) for t in (0, 1, 2))
    inst = CCGInstance(3, (1, 1, 1), (s, s, s))
    with pytest.raises(CapExceededError):
        enumerate_equilibria(inst, cap=26)


def test_dominance():
    s = tuple(tullock(1, t, 4) for t in (0, 0.5, 1, 1.5, 2, 3, INF))
    inst = CCGInstance(4, (1, 1), (s, s))
    for j in range(len(s)):
        assert is_dominant(inst, 0, j).holds == (j >= 4)
    chk = is_dominant(ex1(), 0, 0)
    assert not chk.holds and chk.witness is not None
    single = CCGInstance(2, (1, 1), ((apa(1, 2),), (apa(1, 2),)))
    assert is_dominant(single, 1, 0).holds


def test_pareto():
    inst = ex1()
    chk = pareto_check(inst, (0, 1))
    assert not chk.optimal
    base = evaluate_profile(inst, (0, 1)).designer_utilities
    cc = evaluate_profile(inst, (1, 1)).designer_utilities
    assert all(a > b for a, b in zip(cc, base))
    single = CCGInstance(2, (1, 1), ((apa(1, 2),), (apa(1, 2),)))
    assert pareto_check(single, (0, 0)).optimal


def test_mrd_profile_pareto_optimal_random(rng):
    for _ in range(15):
        inst = random_mdu_instance(rng, int(rng.integers(2, 4)), int(rng.integers(2, 6)), 3)
        assert pareto_check(inst, mrd_profile(inst)).optimal


def test_support_invariance_tullock_one_two():
    # oracle utilities u_1(t1, t2) for n=3: (1,1) .2708, (1,2) .3416, (2,1) .3816, (2,2) .5
    s = (tullock(1, 1, 3), tullock(1, 2, 3))
    inst = CCGInstance(3, (1, 1), (s, s))
    assert evaluate_profile(inst, (0, 1)).designer_utilities[0] == pytest.approx(0.34162779412501483091, abs=1e-12)
    assert evaluate_profile(inst, (1, 0)).designer_utilities[0] == pytest.approx(0.38164007306961970886, abs=1e-12)
    rep = support_invariance(inst)
    assert rep.equilibria == ((1, 1),)
    assert rep.p_mrd == pytest.approx((0.5, 0.5), abs=1e-12)
    assert rep.holds


def test_support_invariance_symmetric_random(rng):
    for _ in range(10):
        m = int(rng.integers(2, 4))
        base = random_mdu_instance(rng, 2, int(rng.integers(2, 6)), 3, equal_rewards=True)
        inst = CCGInstance(base.n, (1.0,) * m, (base.strategy_sets[0],) * m)
        rep = support_invariance(inst)
        assert rep.holds
        assert rep.p_mrd == pytest.approx([1 / m] * m, abs=1e-9)


def test_multiple_contestant_equilibria_per_equilibrium_verdicts():
    c1 = GammaProfile(1, (1, 0, 0, 1 / 4, 0, 1 / 6, 0, 1 / 8))
    c2 = GammaProfile(1, (1, 0, 0, 0, 1 / 5, 1 / 6, 1 / 7, 1 / 8))
    for rule in ("lowest_p1", "highest_p1"):
        inst = CCGInstance(8, (1, 1), ((c1, apa(1, 8)), (c2, apa(1, 8))), selection=rule)
        outs = profile_outcomes(inst, (0, 0))
        assert len(outs) == 3
        chosen = evaluate_profile(inst, (0, 0))
        assert chosen is (outs[0] if rule == "lowest_p1" else outs[-1])
        assert len(is_equilibrium(inst, (0, 0)).per_equilibrium) == 3


def test_util_tolerance_controls_ties():
    s = (apa(1, 3), GammaProfile(1, (1, 1e-7, 0)))
    strict = CCGInstance(3, (1, 1), (s, s), util_tol=0.0)
    loose = CCGInstance(3, (1, 1), (s, s), util_tol=1e-3)
    assert best_responses(strict, 0, (0, 0)) == [0]
    assert best_responses(loose, 0, (0, 0)) == [0, 1]
    assert math.isclose(strict.util_tol, 0.0)


def test_enumeration_is_deterministic(rng):
    inst = random_mdu_instance(np.random.default_rng(5), 3, 4, 3)
    again = random_mdu_instance(np.random.default_rng(5), 3, 4, 3)
    assert enumerate_equilibria(inst) == enumerate_equilibria(again)
