"""Fault-injection campaigns over circuits and their evaluation.

Layout of a generated campaign::

    <dir>/instances/<name>/circuit.bench   faulty netlist
    <dir>/instances/<name>/obs.json        failing observations
    <dir>/instances/<name>/manifest.json   injected faults and provenance

``run_campaign`` writes ``results.csv`` (one row per instance and engine),
``cactus.csv`` (per engine, solved instances sorted by time with the running
total) and ``scatter.csv`` (per instance, paired times for every engine
pair; unsolved runs are charged the full time budget).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import multiprocessing
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Optional

from faultloc.circuit import (
    generate_observations,
    inject_faults,
    observations_from_json,
    observations_to_json,
    parse_bench,
    random_circuit,
    read_bench,
    render_bench,
)
from faultloc.circuit.sim import MAX_DRAWS
from faultloc.engines import ENGINES, localize, problem_from_circuit, validate_diagnosis
from faultloc.engines.sniper import DEFAULT_ENUM_BUDGET
from faultloc.errors import (
    EnumerationBudgetExceeded,
    ExhaustedRankingError,
    NoDiagnosisError,
    PreconditionError,
    TimeoutExceeded,
)
from faultloc.formula.solver import Budget

log = logging.getLogger(__name__)

CSV_COLUMNS = ("instance", "engine", "status", "time_s", "cost", "num_diagnoses", "iterations")
STATUSES = ("valid-diagnosis", "timeout", "budget", "no-observations", "no-diagnosis",
            "invalid-diagnosis", "crashed")


@dataclass
class CampaignConfig:
    circuits: list
    fault_counts: list = field(default_factory=lambda: [1])
    observation_counts: list = field(default_factory=lambda: [10])
    seeds: list = field(default_factory=lambda: [0])
    time_budget: float = 60.0
    enum_budget: int = DEFAULT_ENUM_BUDGET
    engines: list = field(default_factory=lambda: list(ENGINES))
    weights: str = "flat"
    workers: int = 1
    isolate: bool = False
    max_draws: int = MAX_DRAWS

    def __post_init__(self):
        if not self.circuits:
            raise PreconditionError("campaign needs at least one circuit")
        if not self.fault_counts or min(self.fault_counts) < 1:
            raise PreconditionError("fault counts must be at least 1")
        if not self.observation_counts or min(self.observation_counts) < 1:
            raise PreconditionError("observation counts must be at least 1")
        if not self.seeds:
            raise PreconditionError("campaign needs at least one seed")
        if self.time_budget <= 0 or self.enum_budget <= 0:
            raise PreconditionError("budgets must be positive")
        if self.workers < 1:
            raise PreconditionError("workers must be at least 1")
        bad = [e for e in self.engines if e not in ENGINES]
        if bad or not self.engines:
            raise PreconditionError(f"unknown engines {bad}; choose from {', '.join(ENGINES)}")
        if self.weights not in ("flat", "hierarchical"):
            raise PreconditionError(f"unknown weight mode {self.weights!r}")

    @classmethod
    def from_json(cls, text: str) -> "CampaignConfig":
        doc = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise PreconditionError(f"unknown campaign keys: {', '.join(sorted(unknown))}")
        return cls(**doc)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1) + "\n"


@dataclass(frozen=True)
class InstanceResult:
    instance: str
    engine: str
    status: str
    time_s: float
    cost: Optional[int] = None
    num_diagnoses: Optional[int] = None
    iterations: Optional[int] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        object.__setattr__(self, "time_s", round(float(self.time_s), 6))

    @property
    def solved(self) -> bool:
        return self.status == "valid-diagnosis"


# -- circuits ---------------------------------------------------------------------

_RANDOM = re.compile(r"random:(\d+):(\d+):(-?\d+)$")


def bundled_circuits() -> list:
    return sorted(p.name[:-6] for p in resources.files("faultloc.data").iterdir()
                  if p.name.endswith(".bench"))


def resolve_circuit(spec: str):
    """A ``.bench`` path, a bundled circuit name (``c17``) or
    ``random:<inputs>:<gates>:<seed>``."""
    m = _RANDOM.match(spec)
    if m:
        n_in, n_gates, seed = map(int, m.groups())
        return random_circuit(n_in, n_gates, seed, name=f"rand{n_in}x{n_gates}s{seed}")
    path = Path(spec)
    if path.exists():
        return read_bench(path)
    res = resources.files("faultloc.data").joinpath(f"{spec}.bench")
    if res.is_file():
        return parse_bench(res.read_text(), name=spec, source=f"{spec}.bench")
    raise PreconditionError(f"no circuit file or bundled circuit named {spec!r}")


def instance_name(circuit: str, n_faults: int, n_obs: int, seed) -> str:
    return f"{circuit}_f{n_faults}_o{n_obs}_s{seed}"


def generate_campaign(cfg: CampaignConfig, out_dir) -> list:
    """Write every instance of ``cfg`` under ``out_dir/instances``; returns
    the manifests.  Faults that no sampled input exposes give an instance
    marked ``skipped`` with no observations."""
    root = Path(out_dir) / "instances"
    root.mkdir(parents=True, exist_ok=True)
    manifests = []
    for spec in cfg.circuits:
        golden = resolve_circuit(spec)
        for nf in cfg.fault_counts:
            for no in cfg.observation_counts:
                for seed in cfg.seeds:
                    name = instance_name(golden.name, nf, no, seed)
                    d = root / name
                    d.mkdir(exist_ok=True)
                    man = {"name": name, "circuit": golden.name, "seed": seed,
                           "requested_faults": nf, "requested_observations": no}
                    if nf > len(golden.gates):
                        man.update(skipped=True, reason="more faults than gates", faults=[],
                                   observations=0)
                        obs, faulty = [], golden
                    else:
                        faulty, faults = inject_faults(golden, nf, seed)
                        obs = generate_observations(golden, faulty, no, seed, cfg.max_draws)
                        man.update(faults=[f.to_json() for f in faults], observations=len(obs),
                                   skipped=not obs)
                        if not obs:
                            man["reason"] = "no input exposes the injected faults"
                    (d / "circuit.bench").write_text(render_bench(faulty))
                    (d / "obs.json").write_text(observations_to_json(faulty, obs))
                    (d / "manifest.json").write_text(json.dumps(man, indent=1) + "\n")
                    manifests.append(man)
    return manifests


def list_instances(inst_dir) -> list:
    root = Path(inst_dir)
    if (root / "instances").is_dir():
        root = root / "instances"
    if not root.is_dir():
        raise PreconditionError(f"no instance directory at {inst_dir}")
    return sorted(p for p in root.iterdir() if p.is_dir())


def load_instance(d):
    """``(problem or None, manifest)``; None when there is nothing to diagnose."""
    d = Path(d)
    missing = [n for n in ("circuit.bench", "obs.json", "manifest.json") if not (d / n).is_file()]
    if missing:
        raise PreconditionError(f"instance {d.name} lacks {', '.join(missing)}")
    man = json.loads((d / "manifest.json").read_text())
    c = read_bench(d / "circuit.bench")
    obs = observations_from_json((d / "obs.json").read_text(), c)
    if not obs:
        return None, man
    return problem_from_circuit(c, obs), man


# -- running ----------------------------------------------------------------------

def run_instance(d, engine: str, time_budget: float, enum_budget: int = DEFAULT_ENUM_BUDGET) -> InstanceResult:
    d = Path(d)
    p, _ = load_instance(d)
    name = d.name
    if p is None:
        return InstanceResult(name, engine, "no-observations", 0.0)
    t0 = time.perf_counter()
    budget = Budget.from_seconds(time_budget)
    try:
        rep = localize(p, engine, budget=budget, enum_budget=enum_budget)
    except TimeoutExceeded:
        return InstanceResult(name, engine, "timeout", time.perf_counter() - t0)
    except EnumerationBudgetExceeded:
        return InstanceResult(name, engine, "budget", time.perf_counter() - t0)
    except MemoryError:
        return InstanceResult(name, engine, "budget", time.perf_counter() - t0)
    except ExhaustedRankingError:
        return InstanceResult(name, engine, "invalid-diagnosis", time.perf_counter() - t0)
    except NoDiagnosisError:
        return InstanceResult(name, engine, "no-diagnosis", time.perf_counter() - t0)
    elapsed = time.perf_counter() - t0
    sel = rep.selected
    ok = sel is not None and validate_diagnosis(p, sel)
    it = rep.stats.get("iterations", rep.stats.get("oracle_calls"))
    return InstanceResult(name, engine, "valid-diagnosis" if ok else "invalid-diagnosis", elapsed,
                          sel.cost if sel is not None else None, len(rep.diagnoses), it)


def _isolated_target(q, d, engine, time_budget, enum_budget):
    try:
        q.put(run_instance(d, engine, time_budget, enum_budget))
    except BaseException as exc:  # report and let the parent decide
        q.put(repr(exc))


def run_isolated(d, engine: str, time_budget: float, enum_budget: int = DEFAULT_ENUM_BUDGET,
                 grace: float = 5.0) -> InstanceResult:
    """Run one job in a child process that is killed once the budget plus
    ``grace`` seconds have passed."""
    ctx = multiprocessing.get_context("spawn")
    q = ctx.Queue()
    proc = ctx.Process(target=_isolated_target, args=(q, str(d), engine, time_budget, enum_budget))
    t0 = time.perf_counter()
    proc.start()
    try:
        res = q.get(timeout=time_budget + grace)
    except Exception:
        res = None
    proc.join(1.0)
    if proc.is_alive():
        proc.kill()
        proc.join()
    elapsed = time.perf_counter() - t0
    if isinstance(res, InstanceResult):
        return res
    if res is None:
        return InstanceResult(Path(d).name, engine, "timeout", elapsed)
    log.warning("%s/%s crashed: %s", Path(d).name, engine, res)
    return InstanceResult(Path(d).name, engine, "crashed", elapsed)


def _job(args):
    d, engine, tb, eb, isolate = args
    runner = run_isolated if isolate else run_instance
    return runner(d, engine, tb, eb)


def run_campaign(inst_dir, cfg: CampaignConfig, out_dir=None) -> list:
    """Evaluate every instance with every engine of ``cfg``.  With
    ``out_dir`` the three CSV files are written there."""
    jobs = [(str(d), e, cfg.time_budget, cfg.enum_budget, cfg.isolate)
            for d in list_instances(inst_dir) for e in cfg.engines]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.workers, mp_context=multiprocessing.get_context("spawn")) as ex:
            results = list(ex.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    for r in results:
        log.info("%s %s %s %.3fs", r.instance, r.engine, r.status, r.time_s)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.csv").write_text(render_results(results))
        (out / "cactus.csv").write_text(render_cactus(results))
        (out / "scatter.csv").write_text(render_scatter(results, cfg.time_budget))
    return results


# -- CSV ---------------------------------------------------------------------------

def _cell(v) -> str:
    return "" if v is None else repr(v) if isinstance(v, float) else str(v)


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([_cell(v) for v in row] for row in rows)
    return buf.getvalue()


def render_results(results) -> str:
    return _rows_to_csv(CSV_COLUMNS, ([getattr(r, c) for c in CSV_COLUMNS] for r in results))


def parse_results(text: str) -> list:
    rows = list(csv.DictReader(io.StringIO(text)))
    opt = lambda v: None if v == "" else int(v)  # noqa: E731
    return [InstanceResult(r["instance"], r["engine"], r["status"], float(r["time_s"]),
                           opt(r["cost"]), opt(r["num_diagnoses"]), opt(r["iterations"]))
            for r in rows]


def render_cactus(results) -> str:
    rows = []
    for engine in dict.fromkeys(r.engine for r in results):
        times = sorted(r.time_s for r in results if r.engine == engine and r.solved)
        total = 0.0
        for k, t in enumerate(times, 1):
            total += t
            rows.append((engine, k, t, round(total, 6)))
    return _rows_to_csv(("engine", "solved", "time_s", "cumulative_s"), rows)


def render_scatter(results, time_budget: float) -> str:
    by = {(r.instance, r.engine): r for r in results}
    engines = list(dict.fromkeys(r.engine for r in results))
    instances = list(dict.fromkeys(r.instance for r in results))
    rows = []
    for a, b in combinations(engines, 2):
        for inst in instances:
            ra, rb = by.get((inst, a)), by.get((inst, b))
            if ra is None or rb is None:
                continue
            ta = ra.time_s if ra.solved else float(time_budget)
            tb = rb.time_s if rb.solved else float(time_budget)
            rows.append((inst, a, b, ta, tb, ra.status, rb.status))
    return _rows_to_csv(("instance", "engine_x", "engine_y", "time_x", "time_y",
                         "status_x", "status_y"), rows)
