"""Engine results and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from faultloc.engines.problem import Diagnosis, DiagnosisProblem


@dataclass
class EngineReport:
    engine: str
    diagnoses: list
    selected: Optional[Diagnosis]
    stats: dict = field(default_factory=dict)
    ranking: list = field(default_factory=list)  # bugassist only: (diagnosis, votes)
    wall_time: Optional[float] = None

    def __post_init__(self):
        if self.selected is not None and self.diagnoses and self.selected not in self.diagnoses:
            raise ValueError("selected diagnosis must be one of the reported diagnoses")

    @property
    def min_cost(self) -> Optional[int]:
        return min((d.cost for d in self.diagnoses), default=None)

    def component_sets(self) -> set:
        return {d.components for d in self.diagnoses}

    def to_json(self, problem: DiagnosisProblem, timing: bool = False) -> dict:
        doc = {
            "engine": self.engine,
            "status": "ok",
            "selected": problem.to_json_diagnosis(self.selected),
            "diagnoses": [problem.to_json_diagnosis(d) for d in self.diagnoses],
            "stats": dict(sorted(self.stats.items())),
        }
        if self.ranking:
            doc["ranking"] = [dict(problem.to_json_diagnosis(d), votes=v) for d, v in self.ranking]
        if timing and self.wall_time is not None:
            doc["wall_time_s"] = round(self.wall_time, 6)
        return doc

    def dumps(self, problem: DiagnosisProblem, timing: bool = False) -> str:
        return json.dumps(self.to_json(problem, timing), indent=2)
