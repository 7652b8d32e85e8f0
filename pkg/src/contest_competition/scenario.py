"""JSON scenario files: a designers' game plus solver options."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .contests import ContestSpec, contest_from_json, contest_to_json, materialize
from .designer import SELECTION_RULES, UTIL_TOL, CCGInstance
from .errors import ContestError, ScenarioError
from .extensions import RiskProfile, risk_from_json

BUNDLED = ("ex1", "ex2", "ex-nonmono", "ex-wta", "ex-asym", "ex-risk", "welfare-ex")


@dataclass(frozen=True)
class Scenario:
    n: int
    rewards: tuple[float, ...]
    strategy_sets: tuple[tuple[ContestSpec, ...], ...]
    risk: RiskProfile = field(default_factory=RiskProfile)
    selection: str = "lowest_p1"
    util_tol: float = UTIL_TOL
    name: str = ""

    @property
    def m(self) -> int:
        return len(self.rewards)

    def instance(self, util_tol: float | None = None) -> CCGInstance:
        sets = tuple(tuple(materialize(c, self.n) for c in s) for s in self.strategy_sets)
        tol = self.util_tol if util_tol is None else util_tol
        return CCGInstance(self.n, self.rewards, sets, self.selection, tol)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "m": self.m,
            "n": self.n,
            "rewards": [int(r) if float(r).is_integer() else r for r in self.rewards],
            "strategy_sets": [[contest_to_json(c) for c in s] for s in self.strategy_sets],
            "risk": self.risk.to_json(),
            "selection": self.selection,
            "tolerances": {"utility": self.util_tol},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def scenario_from_json(obj: Any) -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError("scenario must be a JSON object")
    try:
        n = obj["n"]
        rewards = obj["rewards"]
        sets = obj["strategy_sets"]
    except KeyError as exc:
        raise ScenarioError(f"scenario is missing {exc.args[0]!r}") from None
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ScenarioError(f"n must be a positive integer, got {n!r}")
    if not isinstance(rewards, list) or not isinstance(sets, list):
        raise ScenarioError("rewards and strategy_sets must be lists")
    if "m" in obj and obj["m"] != len(rewards):
        raise ScenarioError(f"m={obj['m']} but {len(rewards)} rewards given")
    if len(sets) != len(rewards):
        raise ScenarioError("one strategy set per designer is required")
    selection = obj.get("selection", "lowest_p1")
    if selection not in SELECTION_RULES:
        raise ScenarioError(f"unknown selection rule {selection!r}")
    tolerances = obj.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ScenarioError("tolerances must be an object")
    tol = tolerances.get("utility", UTIL_TOL)
    try:
        scen = Scenario(
            n=n,
            rewards=tuple(float(r) for r in rewards),
            strategy_sets=tuple(tuple(contest_from_json(c) for c in s) for s in sets),
            risk=risk_from_json(obj.get("risk")),
            selection=selection,
            util_tol=float(tol),
            name=str(obj.get("name", "")),
        )
        scen.instance()
    except ScenarioError:
        raise
    except (ContestError, TypeError, ValueError) as exc:
        raise ScenarioError(str(exc)) from exc
    return scen


def loads(text: str) -> Scenario:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from None
    return scenario_from_json(obj)


def load(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc.strerror}") from None
    return loads(text)


def bundled(name: str) -> Scenario:
    if name not in BUNDLED:
        raise ScenarioError(f"unknown bundled scenario {name!r}; choose from {', '.join(BUNDLED)}")
    return loads(resources.files(__package__).joinpath("scenarios").joinpath(f"{name}.json").read_text())
