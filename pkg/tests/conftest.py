import sys

import numpy as np
import pytest

from contest_competition.contests import GammaProfile


def random_mdu(rng: np.random.Generator, n: int, reward: float = 1.0) -> GammaProfile:
    """Non-increasing gamma with gamma(1) = R and gamma(k) <= R/k."""
    g = [reward]
    for k in range(2, n + 1):
        g.append(min(g[-1], rng.uniform(0.0, reward / k)))
    return GammaProfile(reward, tuple(g))


def random_gamma(rng: np.random.Generator, n: int, reward: float = 1.0) -> GammaProfile:
    g = [reward] + [rng.uniform(0.0, reward / k) for k in range(2, n + 1)]
    return GammaProfile(reward, tuple(g))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pointwise_min(profiles) -> GammaProfile:
    return GammaProfile(profiles[0].reward, tuple(min(v) for v in zip(*(c.gamma for c in profiles))))


def random_mdu_instance(rng: np.random.Generator, m: int, n: int, size: int, equal_rewards: bool = False):
    """All-MDU game whose every strategy set contains a pointwise-minimal member."""
    from contest_competition.designer import CCGInstance

    rewards = [1.0] * m if equal_rewards else [float(rng.uniform(0.5, 2.0)) for _ in range(m)]
    sets = []
    for r in rewards:
        base = [random_mdu(rng, n, r) for _ in range(max(1, size - 1))]
        members = base + [pointwise_min(base)] if size > 1 else base
        order = rng.permutation(len(members))
        sets.append(tuple(members[i] for i in order))
    return CCGInstance(n, tuple(rewards), tuple(sets))


def pytest_terminal_summary(terminalreporter):
    """One verdict line per acceptance criterion, when that module ran."""
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for criterion in range(1, 10):
        parts = mod.VERDICTS.get(criterion)
        if not parts:
            terminalreporter.write_line(f"criterion {criterion}: NOT RUN")
            continue
        failed = [label for label, ok, _ in parts if not ok]
        verdict = "PASS" if not failed else "FAIL (" + ", ".join(failed) + ")"
        terminalreporter.write_line(f"criterion {criterion}: {verdict} ({len(parts)} part(s))")
        for label, ok, detail in parts:
            terminalreporter.write_line(f"    {'ok  ' if ok else 'FAIL'} {label}: {detail}")
