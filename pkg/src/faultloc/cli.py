"""Command-line front end.  Reports go to stdout as JSON, logs to stderr.

Exit codes: 0 success, 1 input or parse error, 2 no diagnosis,
3 time or enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from faultloc import harness
from faultloc.circuit import (
    generate_observations,
    inject_faults,
    observations_from_json,
    observations_to_json,
    render_bench,
)
from faultloc.engines import ENGINES, localize, problem_from_circuit, validate_diagnosis
from faultloc.engines.problem import problem_from_wcnf, problem_sidecar
from faultloc.engines.sniper import DEFAULT_ENUM_BUDGET
from faultloc.errors import (
    EnumerationBudgetExceeded,
    ExhaustedRankingError,
    FaultlocError,
    NoDiagnosisError,
    TimeoutExceeded,
)
from faultloc.formula.cnf import parse_wcnf, to_wcnf
from faultloc.formula.solver import Budget

log = logging.getLogger("faultloc")

EXIT_OK, EXIT_INPUT, EXIT_NO_DIAGNOSIS, EXIT_BUDGET = 0, 1, 2, 3


def _at_least(lo, kind=int):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}")
        if v < lo or (kind is float and v <= 0):
            raise argparse.ArgumentTypeError(f"must be {'positive' if kind is float else f'>= {lo}'}")
        return v
    return conv


def _emit(doc):
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


# -- loading inputs ---------------------------------------------------------------

def _load_problem(args):
    """Build the diagnosis problem from the positional inputs:
    ``prog.mc tests.json``, ``circuit.bench obs.json`` or ``f.wcnf [sidecar]``."""
    paths = args.inputs
    first = paths[0]
    if first.endswith(".wcnf"):
        side = Path(paths[1] if len(paths) > 1 else first + ".json")
        w = parse_wcnf(Path(first).read_text())
        return problem_from_wcnf(w, json.loads(side.read_text())), None
    if len(paths) != 2:
        raise FaultlocError("expected two inputs: a program or circuit and its test file")
    if first.endswith(".mc"):
        from faultloc.minilang import build_trace_formula, load_tests, read_program

        prog = read_program(first)
        tests = load_tests(Path(paths[1]).read_text())
        tf = build_trace_formula(prog, tests, unwind=args.unwind, bitwidth=args.bitwidth,
                                 weights=args.weights, io_penalty=args.io_penalty)
        return tf.problem(), tf
    circuit = harness.resolve_circuit(first)
    obs = observations_from_json(Path(paths[1]).read_text(), circuit)
    if not obs:
        raise FaultlocError(f"{paths[1]} holds no observations")
    return problem_from_circuit(circuit, obs), None


def _budget(args):
    return Budget.from_seconds(args.time_budget) if args.time_budget else None


# -- subcommands ------------------------------------------------------------------

def cmd_localize(args) -> int:
    p, _ = _load_problem(args)
    log.info("%s problem: %d components, %d observations", p.kind, len(p.components),
             p.num_observations)
    t0 = time.perf_counter()
    try:
        rep = localize(p, args.engine, budget=_budget(args), enum_budget=args.enum_budget,
                       core_minimize=args.core_minimize)
    except TimeoutExceeded as exc:
        _emit({"engine": args.engine, "status": "budget-exceeded", "reason": "time",
               "message": str(exc), "stats": getattr(exc, "stats", {})})
        return EXIT_BUDGET
    except EnumerationBudgetExceeded as exc:
        _emit({"engine": args.engine, "status": "budget-exceeded", "reason": "enumeration",
               "message": str(exc), "stats": exc.stats})
        return EXIT_BUDGET
    except ExhaustedRankingError as exc:
        _emit({"engine": args.engine, "status": "no-valid-diagnosis", "message": str(exc)})
        return EXIT_NO_DIAGNOSIS
    except NoDiagnosisError as exc:
        status = "unwind-insufficient" if p.kind == "program" else "no-diagnosis"
        _emit({"engine": args.engine, "status": status, "message": str(exc)})
        return EXIT_NO_DIAGNOSIS
    rep.wall_time = time.perf_counter() - t0
    doc = rep.to_json(p, timing=args.timing)
    doc["problem"] = {"kind": p.kind, "components": len(p.components),
                      "observations": p.num_observations}
    _emit(doc)
    return EXIT_OK


def cmd_export_wcnf(args) -> int:
    p, tf = _load_problem(args)
    out = Path(args.output)
    extra = None
    if tf is not None:
        extra = {e.id: {"kind": e.kind} for e in tf.relax.shared()}
    out.write_text(to_wcnf(p.unified))
    side = Path(str(out) + ".json")
    side.write_text(json.dumps(problem_sidecar(p, extra), indent=1, sort_keys=True) + "\n")
    _emit({"wcnf": str(out), "sidecar": str(side), "variables": p.unified.num_vars,
           "hard": len(p.unified.hard.clauses), "soft": len(p.unified.soft)})
    return EXIT_OK


def cmd_validate(args) -> int:
    p, _ = _load_problem(args)
    chosen = set()
    for item in args.diagnosis:
        hits = {c for c in p.components if str(c) == item or str(p.labels.get(c)) == item}
        if not hits:
            raise FaultlocError(f"no component or line named {item!r}")
        chosen |= hits
    ok = validate_diagnosis(p, chosen, budget=_budget(args))
    _emit({"valid": ok, "diagnosis": p.to_json_diagnosis(p.diagnosis(chosen))})
    return EXIT_OK if ok else EXIT_NO_DIAGNOSIS


def cmd_inject(args) -> int:
    golden = harness.resolve_circuit(args.circuit)
    faulty, faults = inject_faults(golden, args.faults, args.seed)
    text = render_bench(faulty)
    doc = {"circuit": golden.name, "seed": args.seed, "faults": [f.to_json() for f in faults]}
    if args.output:
        Path(args.output).write_text(text)
        doc["output"] = args.output
    if args.observations:
        obs = generate_observations(golden, faulty, args.observations, args.seed)
        doc["observations"] = len(obs)
        if args.obs_output:
            Path(args.obs_output).write_text(observations_to_json(faulty, obs))
            doc["obs_output"] = args.obs_output
    if not args.output:
        sys.stderr.write(text)
    _emit(doc)
    return EXIT_OK


def _campaign_config(args) -> harness.CampaignConfig:
    if args.config:
        cfg = harness.CampaignConfig.from_json(Path(args.config).read_text())
    else:
        cfg = harness.CampaignConfig(circuits=args.circuits or ["c17"])
    for key in ("fault_counts", "observation_counts", "seeds", "engines"):
        v = getattr(args, key, None)
        if v:
            setattr(cfg, key, v)
    for key in ("time_budget", "enum_budget", "workers"):
        v = getattr(args, key, None)
        if v is not None:
            setattr(cfg, key, v)
    if getattr(args, "isolate", False):
        cfg.isolate = True
    cfg.__post_init__()
    return cfg


def cmd_generate(args) -> int:
    cfg = _campaign_config(args)
    mans = harness.generate_campaign(cfg, args.out_dir)
    Path(args.out_dir, "campaign.json").write_text(cfg.to_json())
    _emit({"instances": len(mans), "skipped": sum(1 for m in mans if m.get("skipped")),
           "directory": str(Path(args.out_dir) / "instances")})
    return EXIT_OK


def cmd_run_campaign(args) -> int:
    if not args.config and Path(args.campaign_dir, "campaign.json").is_file():
        args.config = str(Path(args.campaign_dir, "campaign.json"))
    cfg = _campaign_config(args)
    out = args.out or args.campaign_dir
    res = harness.run_campaign(args.campaign_dir, cfg, out)
    counts = {}
    for r in res:
        counts.setdefault(r.engine, {}).setdefault(r.status, 0)
        counts[r.engine][r.status] += 1
    _emit({"rows": len(res), "results": str(Path(out) / "results.csv"), "summary": counts})
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def _add_problem_flags(sp):
    sp.add_argument("inputs", nargs="+",
                    help="program.mc tests.json | circuit.bench obs.json | formula.wcnf [sidecar]")
    sp.add_argument("--unwind", type=_at_least(1), default=8)
    sp.add_argument("--bitwidth", type=int, choices=(8, 16, 32), default=16)
    sp.add_argument("--weights", choices=("flat", "hierarchical"), default="hierarchical")
    sp.add_argument("--io-penalty", type=_at_least(1), default=1000)
    sp.add_argument("--time-budget", type=_at_least(0, float), default=None, metavar="S")
    sp.add_argument("--seed", type=int, default=0)


def _add_campaign_flags(sp):
    sp.add_argument("--config", help="campaign JSON (keys of CampaignConfig)")
    sp.add_argument("--circuits", nargs="+")
    sp.add_argument("--faults", dest="fault_counts", nargs="+", type=_at_least(1))
    sp.add_argument("--observations", dest="observation_counts", nargs="+", type=_at_least(1))
    sp.add_argument("--seeds", nargs="+", type=int)
    sp.add_argument("--seed", type=int, dest="seed_single")
    sp.add_argument("--engines", nargs="+", choices=ENGINES)
    sp.add_argument("--time-budget", type=_at_least(0, float))
    sp.add_argument("--enum-budget", type=_at_least(1))
    sp.add_argument("--workers", type=_at_least(1))


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1 so that 2 keeps meaning "no diagnosis"."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="faultloc", description="Fault localisation with "
                                 "multiple failing observations via MaxSAT.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("localize", help="diagnose a program or circuit")
    _add_problem_flags(sp)
    sp.add_argument("--engine", choices=ENGINES, default="cfaults")
    sp.add_argument("--enum-budget", type=_at_least(1), default=DEFAULT_ENUM_BUDGET)
    sp.add_argument("--core-minimize", action="store_true")
    sp.add_argument("--timing", action="store_true", help="include wall time in the report")
    sp.set_defaults(func=cmd_localize)

    sp = sub.add_parser("export-wcnf", help="write the weighted CNF and its sidecar map")
    _add_problem_flags(sp)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_export_wcnf)

    sp = sub.add_parser("validate", help="check a candidate diagnosis")
    _add_problem_flags(sp)
    sp.add_argument("--diagnosis", nargs="*", default=[],
                    help="component ids or source lines")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("inject", help="inject gate faults into a circuit")
    sp.add_argument("circuit")
    sp.add_argument("--faults", type=_at_least(1), default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.add_argument("--observations", type=_at_least(1))
    sp.add_argument("--obs-output")
    sp.set_defaults(func=cmd_inject)

    sp = sub.add_parser("generate", help="generate a fault-injection campaign")
    sp.add_argument("out_dir")
    _add_campaign_flags(sp)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("run-campaign", help="run engines over a generated campaign")
    sp.add_argument("campaign_dir")
    sp.add_argument("--out", help="directory for results.csv, cactus.csv, scatter.csv")
    sp.add_argument("--isolate", action="store_true", help="one killable process per run")
    _add_campaign_flags(sp)
    sp.set_defaults(func=cmd_run_campaign)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed_single", None) is not None and not getattr(args, "seeds", None):
        args.seeds = [args.seed_single]
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        level=logging.WARNING - 10 * min(args.verbose, 2))
    try:
        return args.func(args)
    except (FaultlocError, OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"faultloc: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
