"""Per-observation MCS enumeration shared by the single-observation engines."""

from __future__ import annotations

from faultloc.engines.problem import DiagnosisProblem
from faultloc.formula.solver import Budget
from faultloc.formula.subsets import enumerate_mcses


def per_observation_mcses(p: DiagnosisProblem, budget: Budget, stats: dict) -> list:
    """One list of component sets per observation.  An observation that is
    already consistent contributes the single empty correction."""
    out = []
    for w in p.per_observation:
        soft = [cl[0] for cl, _ in w.soft]
        mcses = enumerate_mcses(w.hard, soft, budget=budget, stats=stats)
        out.append([p.comps_of_lits(m) for m in mcses] or [frozenset()])
    stats["mcses"] = sum(len(d) for d in out)
    return out
