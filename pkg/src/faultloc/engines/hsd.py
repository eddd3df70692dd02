"""Implicit hitting-set enumeration of subset-minimal aggregated diagnoses.

Each round proposes a minimum-cost hitting set of the cores collected so
far (excluding supersets of diagnoses already found) and checks it against
every observation separately.  A failing check contributes that
observation's assumption core, optionally shrunk to a minimal one.
"""

from __future__ import annotations

from faultloc.engines.problem import DiagnosisProblem
from faultloc.engines.report import EngineReport
from faultloc.errors import NoDiagnosisError
from faultloc.formula.solver import Budget, Oracle
from faultloc.formula.subsets import HittingSetSolver, shrink_assumptions


def hsd_localize(p: DiagnosisProblem, core_minimize: bool = False, *,
                 budget: Budget | None = None, early_exit: bool = False,
                 limit: int | None = None) -> EngineReport:
    budget = budget if budget is not None else Budget()
    hs = HittingSetSolver(p.components, p.weights, budget=budget)
    oracles = [Oracle(w.hard.clauses, w.num_vars, budget=budget) for w in p.per_observation]
    diagnoses = []
    cores = 0
    iterations = 0
    while limit is None or len(diagnoses) < limit:
        delta = hs.solve()
        if delta is None:
            break
        iterations += 1
        assumps = p.healthy_assumptions(delta)
        core = None
        for o in oracles:
            if not o.solve(assumps):
                core = o.core()
                if core and core_minimize:
                    core = shrink_assumptions(o, core)
                break
        if core is None:
            diagnoses.append(p.diagnosis(delta))
            hs.block(delta)
            if early_exit and not hs.feasible():
                break
            continue
        if not core:
            raise NoDiagnosisError("an observation is inconsistent even with every component relaxed")
        cores += 1
        hs.add_set(p.comps_of_lits(core))
    if not diagnoses:
        raise NoDiagnosisError("no set of components explains the observations")
    name = "hsd-cm" if core_minimize else "hsd"
    stats = {
        "oracle_calls": budget.oracle_calls,
        "cores": cores,
        "iterations": iterations,
        "num_diagnoses": len(diagnoses),
    }
    return EngineReport(name, diagnoses, diagnoses[0], stats)
