"""Contests represented by their per-headcount contestant utility vectors.

A contest enters every computation only through ``gamma[k-1]``, the expected
utility of each of ``k`` contestants in the contest's symmetric effort
equilibrium.  Tullock contests are the one family whose vector is built from
primitives here (reward and discriminatory power ``tau``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence, Union

from .errors import ContestError, ScenarioError

INF = math.inf  # tau sentinel for the all-pay auction; serialized as "inf"
EPS_GAMMA = 1e-12


@dataclass(frozen=True)
class GammaProfile:
    """Reward plus contestant utilities gamma(1..n_max)."""

    reward: float
    gamma: tuple[float, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        gamma = tuple(float(g) for g in self.gamma)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "reward", float(self.reward))
        if not self.reward > 0 or not math.isfinite(self.reward):
            raise ContestError(f"reward must be positive and finite, got {self.reward}")
        if not gamma:
            raise ContestError("gamma must have at least one entry")
        tol = EPS_GAMMA * max(1.0, self.reward)
        if abs(gamma[0] - self.reward) > tol:
            raise ContestError(f"gamma(1) must equal the reward {self.reward}, got {gamma[0]}")
        for k, g in enumerate(gamma, start=1):
            if not (-tol <= g <= self.reward / k + tol):
                raise ContestError(f"gamma({k})={g} outside [0, R/k] with R={self.reward}")

    @property
    def n_max(self) -> int:
        return len(self.gamma)

    def __call__(self, k: int) -> float:
        """gamma(k), 1-based."""
        if not 1 <= k <= self.n_max:
            raise ContestError(f"headcount {k} outside 1..{self.n_max}")
        return self.gamma[k - 1]

    def truncate(self, n: int) -> GammaProfile:
        if n > self.n_max:
            raise ContestError(f"profile supports n_max={self.n_max} < required n={n}")
        if n == self.n_max:
            return self
        return GammaProfile(self.reward, self.gamma[:n], self.label)

    def name(self) -> str:
        return self.label or "(" + ", ".join(f"{g:.4g}" for g in self.gamma) + ")"


@dataclass(frozen=True)
class TullockSpec:
    reward: float
    tau: float
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.reward > 0 or not math.isfinite(self.reward):
            raise ContestError(f"reward must be positive, got {self.reward}")
        if math.isnan(self.tau) or self.tau < 0:
            raise ContestError(f"tau must be >= 0, got {self.tau}")


@dataclass(frozen=True)
class PiecewiseTullockSpec:
    """Tullock contest whose tau depends on the realized headcount k."""

    reward: float
    tau_by_headcount: tuple[tuple[int, float], ...]
    default_tau: float | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.reward > 0 or not math.isfinite(self.reward):
            raise ContestError(f"reward must be positive, got {self.reward}")
        items = self.tau_by_headcount
        if isinstance(items, Mapping):
            items = items.items()
        items = tuple(sorted((int(k), float(t)) for k, t in items))
        for k, t in items:
            if k < 1:
                raise ContestError(f"headcount keys must be >= 1, got {k}")
            if math.isnan(t) or t < 0:
                raise ContestError(f"tau for k={k} must be >= 0, got {t}")
        if self.default_tau is not None and (math.isnan(self.default_tau) or self.default_tau < 0):
            raise ContestError(f"default tau must be >= 0, got {self.default_tau}")
        object.__setattr__(self, "tau_by_headcount", items)

    def tau_at(self, k: int) -> float:
        for key, t in self.tau_by_headcount:
            if key == k:
                return t
        if self.default_tau is None:
            raise ContestError(f"no tau given for headcount k={k}")
        return self.default_tau


ContestSpec = Union[GammaProfile, TullockSpec, PiecewiseTullockSpec]


def _tullock_value(reward: float, tau: float, k: int) -> float:
    if k == 1:
        return reward
    if math.isinf(tau) or k / (k - 1) <= tau:
        return 0.0
    return max(0.0, reward * (k - (k - 1) * tau) / (k * k))


def tullock_gamma(spec: TullockSpec, n: int) -> GammaProfile:
    """gamma(k) = R(1/k - (k-1)tau/k^2) while k/(k-1) > tau, else 0."""
    if n < 1:
        raise ContestError(f"n must be >= 1, got {n}")
    gamma = tuple(_tullock_value(spec.reward, spec.tau, k) for k in range(1, n + 1))
    return GammaProfile(spec.reward, gamma, spec.label or f"tau={format_tau(spec.tau)}")


def piecewise_tullock_gamma(spec: PiecewiseTullockSpec, n: int) -> GammaProfile:
    if n < 1:
        raise ContestError(f"n must be >= 1, got {n}")
    gamma = tuple(_tullock_value(spec.reward, spec.tau_at(k), k) for k in range(1, n + 1))
    return GammaProfile(spec.reward, gamma, spec.label)


def materialize(spec: ContestSpec, n: int) -> GammaProfile:
    """Gamma vector of length exactly ``n`` for any contest description."""
    if isinstance(spec, GammaProfile):
        return spec.truncate(n)
    if isinstance(spec, TullockSpec):
        return tullock_gamma(spec, n)
    if isinstance(spec, PiecewiseTullockSpec):
        return piecewise_tullock_gamma(spec, n)
    raise TypeError(f"not a contest spec: {spec!r}")


def apa(reward: float, n: int, label: str = "APA") -> GammaProfile:
    return tullock_gamma(TullockSpec(reward, INF, label), n)


def is_mdu(c: GammaProfile, tol: float = EPS_GAMMA) -> bool:
    g = c.gamma
    return all(g[k] <= g[k - 1] + tol for k in range(1, len(g)))


def is_full_rent_dissipation(c: GammaProfile, tol: float = EPS_GAMMA) -> bool:
    return abs(c.gamma[0] - c.reward) <= tol and all(abs(g) <= tol for g in c.gamma[1:])


def mrd_subset(strategy_set: Sequence[GammaProfile], tol: float = EPS_GAMMA) -> list[int]:
    """Indices of the pointwise-minimal members; empty if no member is minimal."""
    if not strategy_set:
        return []
    reward, n_max = strategy_set[0].reward, strategy_set[0].n_max
    for c in strategy_set:
        if c.reward != reward or c.n_max != n_max:
            raise ContestError("mrd_subset needs profiles with a common reward and n_max")
    floor = [min(c.gamma[k] for c in strategy_set) for k in range(n_max)]
    return [
        i for i, c in enumerate(strategy_set)
        if all(c.gamma[k] <= floor[k] + tol for k in range(n_max))
    ]


def expected_total_effort(c: GammaProfile, k: int) -> float:
    """Designer's expected revenue R - k*gamma(k) with k participants."""
    return c.reward - k * c(k)


# --- JSON forms -------------------------------------------------------------

def parse_tau(value: Any) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "+inf", "infinity", "apa"):
            return INF
        try:
            value = float(value)
        except ValueError:
            raise ScenarioError(f"cannot parse tau {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"cannot parse tau {value!r}")
    tau = float(value)
    if math.isnan(tau) or tau < 0:
        raise ScenarioError(f"tau must be >= 0, got {value!r}")
    return tau


def format_tau(tau: float) -> Any:
    return "inf" if math.isinf(tau) else tau


def _json_number(x: float) -> int | float:
    return int(x) if float(x).is_integer() and abs(x) < 2**53 else x


def contest_from_json(obj: Mapping[str, Any]) -> ContestSpec:
    """Parse one of the three accepted contest forms."""
    if not isinstance(obj, Mapping):
        raise ScenarioError(f"contest must be a JSON object, got {obj!r}")
    if "reward" not in obj:
        raise ScenarioError(f"contest {dict(obj)!r} has no reward")
    label = str(obj.get("label", ""))
    forms = [key for key in ("gamma", "tullock_tau", "tau_by_k") if key in obj]
    if len(forms) != 1:
        raise ScenarioError(f"contest needs exactly one of gamma/tullock_tau/tau_by_k, got {forms}")
    try:
        reward = float(obj["reward"])
        if forms[0] == "gamma":
            return GammaProfile(reward, tuple(float(g) for g in obj["gamma"]), label)
        if forms[0] == "tullock_tau":
            return TullockSpec(reward, parse_tau(obj["tullock_tau"]), label)
        table = obj["tau_by_k"]
        if not isinstance(table, Mapping):
            raise ScenarioError("tau_by_k must be an object mapping headcount to tau")
        default = None
        pairs = []
        for key, val in table.items():
            if key == "default":
                default = parse_tau(val)
            else:
                pairs.append((int(key), parse_tau(val)))
        return PiecewiseTullockSpec(reward, tuple(pairs), default, label)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc)) from exc


def contest_to_json(spec: ContestSpec) -> dict[str, Any]:
    out: dict[str, Any] = {"reward": _json_number(spec.reward)}
    if spec.label:
        out["label"] = spec.label
    if isinstance(spec, GammaProfile):
        out["gamma"] = [_json_number(g) for g in spec.gamma]
    elif isinstance(spec, TullockSpec):
        out["tullock_tau"] = format_tau(spec.tau)
        if out["tullock_tau"] != "inf":
            out["tullock_tau"] = _json_number(spec.tau)
    elif isinstance(spec, PiecewiseTullockSpec):
        table: dict[str, Any] = {}
        for k, t in spec.tau_by_headcount:
            table[str(k)] = "inf" if math.isinf(t) else _json_number(t)
        if spec.default_tau is not None:
            table["default"] = "inf" if math.isinf(spec.default_tau) else _json_number(spec.default_tau)
        out["tau_by_k"] = table
    else:
        raise TypeError(f"not a contest spec: {spec!r}")
    return out


def profiles_from_specs(specs: Iterable[ContestSpec], n: int) -> list[GammaProfile]:
    return [materialize(s, n) for s in specs]
