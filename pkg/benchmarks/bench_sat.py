"""Compare the compiled and pure-Python CDCL backends.

Workloads: random 3-SAT near the phase transition, pigeonhole formulas and
MaxSAT diagnosis of random faulty circuits.  Prints one line per workload
with the median time of each backend and the speedup.

    python benchmarks/bench_sat.py --repeat 3
"""

import argparse
import random
import statistics
import sys
import time

from faultloc.circuit import generate_observations, inject_faults, random_circuit
from faultloc.engines import problem_from_circuit
from faultloc.formula.cnf import CnfFormula
from faultloc.formula.maxsat import maxsat_solve
from faultloc.formula.solver import BACKEND, sat_solve


def random_3sat(n, ratio, seed):
    rng = random.Random(seed)
    clauses = []
    for _ in range(int(n * ratio)):
        vs = rng.sample(range(1, n + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n, clauses)


def pigeonhole(holes):
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1  # noqa: E731
    clauses = [tuple(var(p, h) for h in range(holes)) for p in range(pigeons)]
    for h in range(holes):
        for a in range(pigeons):
            for b in range(a + 1, pigeons):
                clauses.append((-var(a, h), -var(b, h)))
    return CnfFormula(pigeons * holes, clauses)


def diagnosis_wcnf(seed):
    golden = random_circuit(8, 60, seed)
    faulty, _ = inject_faults(golden, 3, seed)
    obs = generate_observations(golden, faulty, 20, seed)
    return problem_from_circuit(faulty, obs).unified if obs else None


def workloads(scale):
    for seed in range(4):
        yield f"3sat n={100 * scale} seed={seed}", "sat", random_3sat(100 * scale, 4.26, seed)
    yield f"pigeonhole {6 + scale}", "sat", pigeonhole(6 + scale)
    for seed in range(3):
        w = diagnosis_wcnf(seed)
        if w is not None:
            yield f"circuit maxsat seed={seed}", "maxsat", w


def run(kind, f, backend):
    t0 = time.perf_counter()
    if kind == "sat":
        sat_solve(f, backend=backend)
    else:
        maxsat_solve(f, backend=backend)
    return time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=int, default=1, help="grow instance sizes")
    args = ap.parse_args(argv)
    if BACKEND != "cython":
        print("compiled backend not built; only the Python backend is timed", file=sys.stderr)
    backends = ["python"] + (["cython"] if BACKEND == "cython" else [])
    print(f"{'workload':32s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, kind, f in workloads(args.scale):
        med = {b: statistics.median(run(kind, f, b) for _ in range(args.repeat)) for b in backends}
        cells = " ".join(f"{med[b]:9.4f}s" for b in backends)
        speed = f"{med['python'] / med['cython']:8.1f}x" if "cython" in med and med["cython"] > 0 else ""
        print(f"{name:32s} {cells} {speed}")


if __name__ == "__main__":
    main()
