"""Common view of a diagnosis problem, shared by every engine."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from faultloc.errors import FormulaError
from faultloc.formula.cnf import CnfFormula, HealthVarMap, WcnfFormula


def component_key(comp) -> tuple:
    """Natural sort key: ``"g10"`` after ``"g9"``, ``"rv6[10]"`` after ``"rv6[9]"``."""
    return tuple((0, int(t)) if t.isdigit() else (1, t) for t in re.split(r"(\d+)", str(comp)) if t)


def sorted_components(comps) -> list:
    return sorted(comps, key=component_key)


@dataclass(frozen=True)
class Diagnosis:
    components: frozenset
    cost: int

    def __post_init__(self):
        object.__setattr__(self, "components", frozenset(self.components))

    def __len__(self):
        return len(self.components)

    def sorted(self) -> list:
        return sorted_components(self.components)


@dataclass
class DiagnosisProblem:
    """``unified`` conjoins every observation (shared health variables);
    ``per_observation[k]`` holds only observation k's replica.  All of them
    carry the same soft units ``(h_c): w_c``."""

    unified: WcnfFormula
    per_observation: list
    health: HealthVarMap
    kind: str = "circuit"
    labels: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    ranges: list = field(default_factory=list)  # per observation, into unified hard clauses
    shared_range: Optional[tuple] = None

    def __post_init__(self):
        self.weights = {}
        for cl, w in self.unified.soft:
            if len(cl) != 1 or cl[0] < 0 or not self.health.has_var(cl[0]):
                raise FormulaError(f"soft clause {cl} is not a positive health unit")
            comp = self.health.comp(cl[0])
            self.weights[comp] = self.weights.get(comp, 0) + w

    @property
    def components(self) -> list:
        return self.health.components

    @property
    def num_observations(self) -> int:
        return len(self.per_observation)

    def cost(self, comps) -> int:
        return sum(self.weights[c] for c in comps)

    def diagnosis(self, comps) -> Diagnosis:
        return Diagnosis(frozenset(comps), self.cost(comps))

    def comps_of_lits(self, lits) -> frozenset:
        return frozenset(self.health.comp(abs(l)) for l in lits)

    def healthy_assumptions(self, delta) -> list:
        """``h_c`` for every component outside ``delta``."""
        return [self.health.var(c) for c in self.components if c not in delta]

    def forced_assumptions(self, delta) -> list:
        """``-h_c`` inside ``delta`` and ``h_c`` outside it."""
        return [-self.health.var(c) if c in delta else self.health.var(c)
                for c in self.components]

    def label(self, comp):
        return self.labels.get(comp, comp)

    def to_json_diagnosis(self, d: Optional[Diagnosis]) -> Optional[dict]:
        if d is None:
            return None
        out = {"components": d.sorted(), "cost": d.cost}
        if self.labels:
            out["lines"] = sorted({self.labels[c] for c in d.components if c in self.labels})
        return out


def split_problem(unified: WcnfFormula, ranges, health: HealthVarMap, shared=None,
                  **kw) -> DiagnosisProblem:
    """Build a problem whose per-observation replicas are the given
    ``[start, end)`` slices of the unified hard clauses, each prefixed by the
    optional ``shared`` slice."""
    per = []
    clauses = unified.hard.clauses
    common = list(clauses[shared[0]:shared[1]]) if shared else []
    for start, end in ranges:
        hard = CnfFormula(unified.num_vars, common + list(clauses[start:end]))
        per.append(WcnfFormula(hard, list(unified.soft)))
    return DiagnosisProblem(unified, per, health, ranges=[tuple(r) for r in ranges],
                            shared_range=tuple(shared) if shared else None, **kw)


def problem_sidecar(p: DiagnosisProblem, extra: Optional[dict] = None) -> dict:
    """JSON-able description of everything in ``p`` that a WCNF file does not
    carry: component names, labels and the per-observation clause ranges."""
    comps = {}
    for comp, var in p.health.items():
        row = {"component": comp, "weight": p.weights[comp]}
        if comp in p.labels:
            row["line"] = p.labels[comp]
        row.update((extra or {}).get(comp, {}))
        comps[str(var)] = row
    return {"kind": p.kind, "components": comps, "observations": [list(r) for r in p.ranges],
            "shared": list(p.shared_range) if p.shared_range else None, "meta": p.meta}


def problem_from_wcnf(unified: WcnfFormula, sidecar: dict) -> DiagnosisProblem:
    health = HealthVarMap((row["component"], int(v)) for v, row in sidecar["components"].items())
    labels = {row["component"]: row["line"] for row in sidecar["components"].values()
              if "line" in row}
    ranges = sidecar.get("observations") or [(0, len(unified.hard.clauses))]
    return split_problem(unified, ranges, health, shared=sidecar.get("shared"),
                         kind=sidecar.get("kind", "circuit"), labels=labels,
                         meta=dict(sidecar.get("meta") or {}))


def problem_from_circuit(circuit, observations) -> DiagnosisProblem:
    from faultloc.circuit.encode import encode_instrumented

    enc = encode_instrumented(circuit, observations)
    return split_problem(enc.wcnf, enc.clause_ranges, enc.health, kind="circuit",
                         meta={"circuit": circuit.name, "observations": len(enc.clause_ranges)})
