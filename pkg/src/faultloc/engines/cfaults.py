"""Aggregated diagnosis by enumerating every optimum of the unified MaxSAT
formula."""

from __future__ import annotations

from faultloc.engines.problem import DiagnosisProblem
from faultloc.engines.report import EngineReport
from faultloc.formula.maxsat import enumerate_optimal_solutions
from faultloc.formula.solver import Budget


def cfaults_localize(p: DiagnosisProblem, *, budget: Budget | None = None,
                     limit: int | None = None) -> EngineReport:
    budget = budget if budget is not None else Budget()
    w = p.unified
    stats = {}
    deltas = enumerate_optimal_solutions(w, budget=budget, limit=limit, stats=stats)
    diagnoses = [p.diagnosis(p.comps_of_lits(w.soft[i][0][0] for i in d)) for d in deltas]
    stats = {
        "oracle_calls": budget.oracle_calls,
        "cores": stats.get("cores", 0),
        "iterations": len(deltas),
        "num_diagnoses": len(diagnoses),
    }
    return EngineReport("cfaults", diagnoses, diagnoses[0], stats)
