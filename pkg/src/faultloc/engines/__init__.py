"""Fault-localisation engines over a common diagnosis problem."""

from faultloc.engines.bugassist import bugassist_localize, rank_mcses
from faultloc.engines.cfaults import cfaults_localize
from faultloc.engines.hsd import hsd_localize
from faultloc.engines.problem import (
    Diagnosis,
    DiagnosisProblem,
    problem_from_circuit,
    sorted_components,
    split_problem,
)
from faultloc.engines.report import EngineReport
from faultloc.engines.sniper import DEFAULT_ENUM_BUDGET, set_combine, sniper_localize
from faultloc.engines.validate import brute_force_diagnoses, validate_diagnosis

ENGINES = ("cfaults", "hsd", "hsd-cm", "bugassist", "sniper")


def localize(p: DiagnosisProblem, engine: str, *, budget=None,
             enum_budget=DEFAULT_ENUM_BUDGET, core_minimize: bool = False) -> EngineReport:
    """Run the named engine.  ``hsd-cm`` is ``hsd`` with core minimisation."""
    if engine == "cfaults":
        return cfaults_localize(p, budget=budget)
    if engine in ("hsd", "hsd-cm"):
        return hsd_localize(p, core_minimize or engine == "hsd-cm", budget=budget)
    if engine == "bugassist":
        return bugassist_localize(p, budget=budget)
    if engine == "sniper":
        return sniper_localize(p, budget=budget, enum_budget=enum_budget)
    raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")


__all__ = [
    "ENGINES", "Diagnosis", "DiagnosisProblem", "EngineReport", "brute_force_diagnoses",
    "bugassist_localize", "cfaults_localize", "hsd_localize", "localize",
    "problem_from_circuit", "rank_mcses", "set_combine", "sniper_localize",
    "sorted_components", "split_problem", "validate_diagnosis",
]
