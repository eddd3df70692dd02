"""Gate-level netlists: BENCH parsing, simulation, fault injection and the
health-instrumented CNF encoding."""

from faultloc.circuit.bench import GATE_KINDS, Circuit, Gate, parse_bench, read_bench, render_bench
from faultloc.circuit.encode import InstrumentedCircuitFormula, encode_instrumented
from faultloc.circuit.sim import (
    CircuitObservation,
    Fault,
    generate_observations,
    inject_faults,
    observations_from_json,
    observations_to_json,
    random_circuit,
    simulate,
)

__all__ = [
    "GATE_KINDS", "Circuit", "Gate", "parse_bench", "read_bench", "render_bench",
    "InstrumentedCircuitFormula", "encode_instrumented", "CircuitObservation", "Fault",
    "generate_observations", "inject_faults", "observations_from_json",
    "observations_to_json", "random_circuit", "simulate",
]
