"""Per-observation MCSes ranked by votes; the first ranked set that is
consistent with all observations is selected."""

from __future__ import annotations

from faultloc.engines.mcs import per_observation_mcses
from faultloc.engines.problem import DiagnosisProblem
from faultloc.engines.report import EngineReport
from faultloc.engines.validate import validate_diagnosis
from faultloc.errors import ExhaustedRankingError
from faultloc.formula.solver import Budget, Oracle


def rank_mcses(per_obs: list) -> list:
    """Unique MCSes with vote counts, by descending votes, then ascending
    size, then first appearance."""
    votes = {}
    for mcses in per_obs:
        for m in mcses:
            votes[m] = votes.get(m, 0) + 1
    order = {m: i for i, m in enumerate(votes)}
    return sorted(votes.items(), key=lambda kv: (-kv[1], len(kv[0]), order[kv[0]]))


def bugassist_localize(p: DiagnosisProblem, *, budget: Budget | None = None) -> EngineReport:
    budget = budget if budget is not None else Budget()
    stats = {}
    per_obs = per_observation_mcses(p, budget, stats)
    ranking = [(p.diagnosis(m), v) for m, v in rank_mcses(per_obs)]
    oracle = Oracle(p.unified.hard.clauses, p.unified.num_vars, budget=budget)
    selected = None
    tried = 0
    for d, _ in ranking:
        tried += 1
        if validate_diagnosis(p, d, oracle=oracle):
            selected = d
            break
    stats = {
        "oracle_calls": budget.oracle_calls,
        "cores": stats.get("cores", 0),
        "mcses": stats["mcses"],
        "iterations": tried,
        "num_diagnoses": 1 if selected is not None else 0,
        "ranked": len(ranking),
    }
    if selected is None:
        raise ExhaustedRankingError(f"none of the {len(ranking)} ranked MCSes is consistent "
                                    "with every observation")
    return EngineReport("bugassist", [selected], selected, stats, ranking=ranking)
