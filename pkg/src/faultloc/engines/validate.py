"""Diagnosis validation and the exhaustive reference oracle."""

from __future__ import annotations

from itertools import combinations

from faultloc.engines.problem import Diagnosis, DiagnosisProblem
from faultloc.formula.solver import Budget, Oracle


def validate_diagnosis(p: DiagnosisProblem, d, *, budget: Budget | None = None,
                       oracle: Oracle | None = None) -> bool:
    """One SAT call: is the unified hard part consistent with every
    component of ``d`` unhealthy and every other component healthy?"""
    comps = d.components if isinstance(d, Diagnosis) else frozenset(d)
    if oracle is None:
        oracle = Oracle(p.unified.hard.clauses, p.unified.num_vars, budget=budget)
    return oracle.solve(p.forced_assumptions(comps))


def brute_force_diagnoses(p: DiagnosisProblem, max_cardinality: int | None = None, *,
                          budget: Budget | None = None) -> list:
    """All subset-minimal diagnoses up to ``max_cardinality``, by trying
    subsets in increasing size and skipping supersets of earlier finds."""
    comps = p.components
    limit = len(comps) if max_cardinality is None else max_cardinality
    oracle = Oracle(p.unified.hard.clauses, p.unified.num_vars, budget=budget)
    found = []
    for k in range(limit + 1):
        for subset in combinations(comps, k):
            s = frozenset(subset)
            if any(f <= s for f in found):
                continue
            if validate_diagnosis(p, s, oracle=oracle):
                found.append(s)
        if found and found[0] == frozenset():
            break
    return [p.diagnosis(s) for s in found]
