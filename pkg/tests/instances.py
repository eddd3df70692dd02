"""Seeded random diagnosis instances shared by several test modules."""

import random

from faultloc.circuit import generate_observations, inject_faults, random_circuit
from faultloc.engines import problem_from_circuit


def random_instance(seed: int):
    """``(golden, faulty, faults, observations)``; observations may be empty
    when no sampled input exposes the faults."""
    rng = random.Random(seed)
    golden = random_circuit(rng.randint(2, 5), rng.randint(3, 15), seed)
    faulty, faults = inject_faults(golden, rng.randint(1, 3), seed)
    obs = generate_observations(golden, faulty, rng.randint(2, 5), seed)
    return golden, faulty, faults, obs


def instance_suite(count: int = 200):
    """First ``count`` seeds whose faults are observable, as
    ``(seed, faulty, faults, problem)``."""
    out = []
    seed = 0
    while len(out) < count:
        _, faulty, faults, obs = random_instance(seed)
        if obs:
            out.append((seed, faulty, faults, problem_from_circuit(faulty, obs)))
        seed += 1
    return out


def brute_min_cardinality(all_minimal):
    m = min(len(d) for d in all_minimal)
    return {d for d in all_minimal if len(d) == m}
