"""Command-line front end: load a scenario, run one analysis, print a report."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import reproduce as repro
from .contests import (
    GammaProfile,
    TullockSpec,
    is_full_rent_dissipation,
    is_mdu,
    parse_tau,
    tullock_gamma,
)
from .designer import (
    DEFAULT_CAP,
    CCGInstance,
    ProfileOutcome,
    designer_utility,
    enumerate_equilibria,
    evaluate_profile,
    is_dominant,
    mrd_profile,
    pareto_check,
    predicted_equilibria,
    profile_outcomes,
)
from .errors import CapExceededError, ContestError, ScenarioError, UnsupportedModelError
from .extensions import (
    default_tau_grid,
    enumerate_pure_participation_equilibria,
    pure_designer_utilities,
    risk_averse_best_response_scan,
    risk_from_json,
    solve_risk_averse,
)
from .oracle import (
    Z_THRESHOLD,
    SimConfig,
    brute_force_pure_ne_check,
    grid_verify_participation,
    mc_contestant_utility,
    mc_designer_utility,
)
from .participation import beta
from .scenario import BUNDLED, Scenario, bundled, load
from .welfare import check_wc_minimality, check_ws_maximality, ws_sufficient_cases, ws_upper_bound

EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_CAP, EXIT_FAILED = 0, 2, 3, 4, 5
GRID_TOL = 1e-8


class VerificationFailed(Exception):
    """Raised after the report is printed when a check did not pass."""


# --- output -------------------------------------------------------------------

def _num(x: Any, fmt: str) -> Any:
    if isinstance(x, bool) or not isinstance(x, float):
        return x
    if fmt == "json":
        return x if math.isfinite(x) else str(x)
    return f"{x:.6g}"


def _clean(obj: Any, fmt: str) -> Any:
    if isinstance(obj, dict):
        return {k: _clean(v, fmt) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v, fmt) for v in obj]
    return _num(obj, fmt)


def _text_table(rows: list[dict[str, Any]]) -> str:
    cols = list(rows[0])
    cells = [[str(_num(r[c], "text")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def emit(summary: dict[str, Any], rows: list[dict[str, Any]] | None, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        payload = dict(summary)
        if rows is not None:
            payload["rows"] = rows
        out.write(json.dumps(_clean(payload, "json"), indent=2) + "\n")
        return
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        else:
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["key", "value"])
            for k, v in summary.items():
                writer.writerow([k, json.dumps(_clean(v, "json"))])
        out.write(buf.getvalue())
        return
    for k, v in summary.items():
        v = _clean(v, "text")
        if isinstance(v, list):
            v = "  ".join(" ".join(map(str, x)) if isinstance(x, list) else str(x) for x in v)
        out.write(f"{k}: {v if isinstance(v, str) else json.dumps(v)}\n")
    if rows:
        out.write(_text_table(rows) + "\n")


# --- helpers ------------------------------------------------------------------

def _scenario(args) -> Scenario:
    if not args.scenario:
        raise ScenarioError("--scenario is required for this command")
    if not Path(args.scenario).exists() and args.scenario in BUNDLED:
        return bundled(args.scenario)
    return load(args.scenario)


def _instance(args) -> tuple[Scenario, CCGInstance]:
    scen = _scenario(args)
    return scen, scen.instance(args.tol)


def _parse_profile(text: str | None, inst: CCGInstance) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        prof = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ScenarioError(f"profile must be comma-separated indices, got {text!r}") from None
    inst.contests(prof)
    return prof


def _profile_key(prof: Sequence[int]) -> str:
    return ",".join(str(j) for j in prof)


def _labels(inst: CCGInstance, prof: Sequence[int]) -> list[str]:
    return [c.name() for c in inst.contests(prof)]


def outcome_row(o: ProfileOutcome) -> dict[str, Any]:
    row: dict[str, Any] = {"profile": _profile_key(o.profile)}
    row.update({f"p_{i + 1}": q for i, q in enumerate(o.p)})
    row.update({f"u_{i + 1}": u for i, u in enumerate(o.designer_utilities)})
    row["u_c"] = o.contestant_utility
    row["W_D"], row["W_C"], row["W_S"] = o.welfare
    return row


def _profiles(args, inst: CCGInstance) -> list[tuple[int, ...]]:
    prof = _parse_profile(args.profile, inst)
    if prof is not None:
        return [prof]
    if inst.size > args.cap:
        raise CapExceededError(f"{inst.size} profiles exceed cap {args.cap}")
    return list(inst.profiles())


# --- commands -----------------------------------------------------------------

def cmd_gamma(args) -> None:
    if (args.tullock is None) == (args.gamma is None):
        raise ScenarioError("give exactly one of --tullock or --gamma")
    if args.tullock is not None:
        c = tullock_gamma(TullockSpec(args.reward, parse_tau(args.tullock)), args.n)
    else:
        try:
            values = tuple(float(x) for x in args.gamma.split(","))
        except ValueError:
            raise ScenarioError(f"cannot parse gamma list {args.gamma!r}") from None
        c = GammaProfile(args.reward, values).truncate(args.n)
    rows = [{"k": k, "gamma": c(k)} for k in range(1, args.n + 1)]
    emit({"contest": c.name(), "reward": c.reward, "mdu": is_mdu(c),
          "full_rent_dissipation": is_full_rent_dissipation(c)}, rows, args.format)


def cmd_solve(args) -> None:
    scen, inst = _instance(args)
    rows = [outcome_row(o) for prof in _profiles(args, inst) for o in profile_outcomes(inst, prof)]
    summary: dict[str, Any] = {"scenario": scen.name, "m": inst.m, "n": inst.n, "selection": inst.selection}
    if not scen.risk.is_identity:
        summary["note"] = "risk-neutral contestants; use the risk command for the scenario's risk profile"
    emit(summary, rows, args.format)


def cmd_equilibria(args) -> None:
    scen, inst = _instance(args)
    eqs = enumerate_equilibria(inst, args.cap)
    rows = [outcome_row(evaluate_profile(inst, e)) for e in eqs]
    summary: dict[str, Any] = {
        "scenario": scen.name,
        "equilibria": [_profile_key(e) for e in eqs],
        "labels": [_labels(inst, e) for e in eqs],
    }
    if inst.all_mdu():
        t = mrd_profile(inst)
        predicted = predicted_equilibria(inst)
        summary["mrd_profile"] = _profile_key(t)
        summary["support"] = [i + 1 for i in evaluate_profile(inst, t).equilibrium.support]
        summary["characterization_holds"] = set(predicted) == set(eqs)
    else:
        summary["characterization"] = "not applicable: some contest is not MDU"
    emit(summary, rows, args.format)


def cmd_dominance(args) -> None:
    scen, inst = _instance(args)
    if not 0 <= args.designer < inst.m:
        raise ScenarioError(f"designer {args.designer} out of range")
    options = range(len(inst.strategy_sets[args.designer])) if args.contest is None else [args.contest]
    rows = []
    for j in options:
        chk = is_dominant(inst, args.designer, j, args.cap)
        rows.append({
            "contest": j,
            "label": inst.strategy_sets[args.designer][j].name(),
            "dominant": chk.holds,
            "witness": _profile_key(chk.witness) if chk.witness else "",
            "gain": chk.gain,
        })
    emit({"scenario": scen.name, "designer": args.designer,
          "scope": "dominant over the given finite sets"}, rows, args.format)


def cmd_pareto(args) -> None:
    scen, inst = _instance(args)
    prof = _parse_profile(args.profile, inst) or mrd_profile(inst)
    chk = pareto_check(inst, prof, args.cap)
    emit({
        "scenario": scen.name,
        "profile": _profile_key(prof),
        "designer_utilities": list(evaluate_profile(inst, prof).designer_utilities),
        "pareto_optimal": chk.optimal,
        "improvement": _profile_key(chk.improvement) if chk.improvement else None,
    }, None, args.format)


def cmd_welfare(args) -> None:
    scen, inst = _instance(args)
    rows = [outcome_row(evaluate_profile(inst, prof)) for prof in _profiles(args, inst)]
    summary: dict[str, Any] = {"scenario": scen.name, "ws_upper_bound": ws_upper_bound(inst.rewards, inst.n)}
    try:
        mrd_profile(inst)
    except ContestError as exc:
        summary["mrd_checks"] = f"skipped: {exc}"
    else:
        ws = check_ws_maximality(inst, args.cap)
        wc = check_wc_minimality(inst, args.cap)
        summary.update({
            "mrd_profile": _profile_key(ws.mrd_profile),
            "sufficient_cases": list(ws_sufficient_cases(inst)),
            "ws_maximal_at_mrd": ws.holds,
            "ws_mrd": ws.ws_mrd,
            "ws_max": ws.ws_max,
            "wc_minimal_at_mrd": wc.holds,
            "wc_mrd": wc.wc_mrd,
        })
    emit(summary, rows, args.format)


def cmd_risk(args) -> None:
    risk = risk_from_json(json.loads(args.risk) if args.risk.startswith("{") else args.risk)
    if args.opponent_tau is not None:
        grid = default_tau_grid(args.step)
        scan = risk_averse_best_response_scan(grid, parse_tau(args.opponent_tau), args.n, risk)
        rows = None
        if args.format == "csv":
            rows = [{"tau": t, "u_1": u} for t, u in zip(scan.taus, scan.utilities)]
        emit({"opponent_tau": args.opponent_tau, "n": args.n, "risk": risk.to_json(), "step": args.step,
              "best_tau": scan.best_tau, "best_utility": scan.best_utility}, rows, args.format)
        return
    scen, inst = _instance(args)
    if args.risk == "identity" and not scen.risk.is_identity:
        risk = scen.risk
    rows = []
    for prof in _profiles(args, inst):
        contests = inst.contests(prof)
        for eq in solve_risk_averse(contests, inst.n, risk):
            row: dict[str, Any] = {"profile": _profile_key(prof)}
            row.update({f"p_{i + 1}": q for i, q in enumerate(eq.p)})
            row.update({f"u_{i + 1}": designer_utility(c, q, inst.n) for i, (c, q) in enumerate(zip(contests, eq.p))})
            row["u_c"] = eq.common_utility
            rows.append(row)
    emit({"scenario": scen.name, "risk": risk.to_json()}, rows, args.format)


def cmd_pure_ne(args) -> None:
    scen, inst = _instance(args)
    prof = _parse_profile(args.profile, inst)
    if prof is None:
        raise ScenarioError("--profile is required for pure-ne")
    contests = inst.contests(prof)
    rows = []
    for a in enumerate_pure_participation_equilibria(contests, inst.n, args.cap):
        row: dict[str, Any] = {"assignment": " ".join(str(j + 1) for j in a.assignment)}
        row.update({f"u_{i + 1}": u for i, u in enumerate(pure_designer_utilities(contests, a))})
        row["brute_force"] = brute_force_pure_ne_check(contests, a, inst.n)
        rows.append(row)
    emit({"scenario": scen.name, "profile": _profile_key(prof), "count": len(rows)}, rows or None, args.format)
    if not all(r["brute_force"] for r in rows):
        raise VerificationFailed("brute-force check disagrees with enumeration")


def cmd_oracle(args) -> None:
    scen, inst = _instance(args)
    prof = _parse_profile(args.profile, inst)
    if prof is None:
        prof = next(iter(inst.profiles()))
    cfg = SimConfig(args.trials, args.seed, args.workers)
    contests = inst.contests(prof)
    eq = evaluate_profile(inst, prof).equilibrium
    n = inst.n
    rows = []
    for i, (c, q) in enumerate(zip(contests, eq.p)):
        for quantity, exact, est in (
            (f"beta_{i + 1}", beta(c, q, n), mc_contestant_utility(contests, eq.p, n, i, cfg)),
            (f"u_{i + 1}", designer_utility(c, q, n), mc_designer_utility(c, q, n, cfg)),
        ):
            z = est.z(exact)
            rows.append({"quantity": quantity, "analytic": exact, "simulated": est.mean,
                         "stderr": est.stderr, "z": z, "pass": abs(z) <= Z_THRESHOLD})
    gap = grid_verify_participation(contests, eq.p, n)
    emit({"scenario": scen.name, "profile": _profile_key(prof), "trials": cfg.trials, "seed": cfg.seed,
          "grid_deviation_gain": gap, "grid_pass": gap <= GRID_TOL}, rows, args.format)
    if gap > GRID_TOL or not all(r["pass"] for r in rows):
        raise VerificationFailed("oracle disagrees with analytic values")


def cmd_reproduce(args) -> None:
    ids = list(repro.EXAMPLES) if args.example == "all" else [args.example]
    rows = []
    for ex in ids:
        for c in repro.run(ex):
            rows.append({"example": ex, "quantity": c.name, "published": c.expected, "computed": c.computed,
                         "tol": c.tol, "verdict": "pass" if c.passed else "FAIL"})
    failed = sum(r["verdict"] != "pass" for r in rows)
    emit({"examples": ids, "checks": len(rows), "failed": failed}, rows, args.format)
    if failed:
        raise VerificationFailed(f"{failed} reproduction check(s) failed")


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario JSON path or bundled example id")
    common.add_argument("--tol", type=float, default=None, help="utility tolerance for equilibrium verdicts")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10**6)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum profiles to enumerate")

    parser = argparse.ArgumentParser(prog="contest-competition", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("gamma", cmd_gamma, "per-headcount utilities of one contest")
    p.add_argument("--tullock", help="Tullock tau (number or inf)")
    p.add_argument("--gamma", help="explicit comma-separated gamma(1..)")
    p.add_argument("--reward", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)

    for name, func, help_text in (
        ("solve", cmd_solve, "participation equilibria, utilities and welfare per profile"),
        ("welfare", cmd_welfare, "welfare per profile and optimality of the MRD profile"),
        ("pure-ne", cmd_pure_ne, "pure (asymmetric) participation equilibria of a profile"),
        ("oracle", cmd_oracle, "Monte-Carlo and grid checks of a profile"),
    ):
        p = add(name, func, help_text)
        p.add_argument("--profile", help="comma-separated contest index per designer (0-based)")
        if name == "oracle":
            p.add_argument("--workers", type=int, default=1)

    add("equilibria", cmd_equilibria, "all designer equilibria and the MRD characterization")

    p = add("dominance", cmd_dominance, "dominance of a designer's contests")
    p.add_argument("--designer", type=int, required=True, help="0-based designer index")
    p.add_argument("--contest", type=int, default=None, help="0-based contest index (default: all)")

    p = add("pareto", cmd_pareto, "Pareto optimality for designers (default: MRD profile)")
    p.add_argument("--profile")

    p = add("risk", cmd_risk, "risk-averse contestants: solve a profile or scan tau")
    p.add_argument("--profile")
    p.add_argument("--risk", default="identity", help='identity, quartic or {"poly": [...]}')
    p.add_argument("--opponent-tau", help="scan designer 1's tau against this fixed tau")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--step", type=float, default=1e-3)

    p = add("reproduce", cmd_reproduce, "recompute the worked examples")
    p.add_argument("example", choices=(*BUNDLED, "all"))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except VerificationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except UnsupportedModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ContestError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
