"""Aggregated diagnoses as unions of one MCS per observation."""

from __future__ import annotations

from faultloc.engines.mcs import per_observation_mcses
from faultloc.engines.problem import DiagnosisProblem
from faultloc.engines.report import EngineReport
from faultloc.engines.validate import validate_diagnosis
from faultloc.errors import EnumerationBudgetExceeded
from faultloc.formula.solver import Budget, Oracle

DEFAULT_ENUM_BUDGET = 10**6


def set_combine(per_obs: list, cap: int | None = None, stats: dict | None = None) -> list:
    """Deduplicated unions over the Cartesian product of the per-observation
    sets, in a fixed order.  Raises ``EnumerationBudgetExceeded`` past ``cap``."""
    acc = {frozenset(): None}
    peak = 1
    for mcses in per_obs:
        nxt = {}
        for a in acc:
            for m in mcses:
                nxt[a | m] = None
                if cap is not None and len(nxt) > cap:
                    raise EnumerationBudgetExceeded(f"more than {cap} combined diagnoses",
                                                    dict(stats or {}, peak_enumeration=len(nxt)))
        acc = nxt
        peak = max(peak, len(acc))
    if stats is not None:
        stats["peak_enumeration"] = peak
    return list(acc)


def sniper_localize(p: DiagnosisProblem, *, budget: Budget | None = None,
                    enum_budget: int | None = DEFAULT_ENUM_BUDGET) -> EngineReport:
    budget = budget if budget is not None else Budget()
    stats = {}
    per_obs = per_observation_mcses(p, budget, stats)
    stats["oracle_calls"] = budget.oracle_calls
    unions = set_combine(per_obs, enum_budget, stats)
    diagnoses = [p.diagnosis(u) for u in unions]
    oracle = Oracle(p.unified.hard.clauses, p.unified.num_vars, budget=budget)
    selected = None
    for d in sorted(diagnoses, key=lambda d: d.cost):
        if validate_diagnosis(p, d, oracle=oracle):
            selected = d
            break
    stats = {
        "oracle_calls": budget.oracle_calls,
        "cores": stats.get("cores", 0),
        "mcses": stats["mcses"],
        "iterations": len(per_obs),
        "num_diagnoses": len(diagnoses),
        "peak_enumeration": stats["peak_enumeration"],
    }
    return EngineReport("sniper", diagnoses, selected, stats)
