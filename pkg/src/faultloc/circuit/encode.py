"""Tseitin encoding of circuits with one shared health variable per gate.

Variable layout: health variables ``1..G`` in gate order, then one block of
signal variables per observation copy, then auxiliaries for n-ary XOR
chains.  Every clause defining gate j carries the literal ``-h_j``, so an
unhealthy gate leaves its output free in all copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from faultloc.circuit.bench import Circuit
from faultloc.circuit.sim import CircuitObservation
from faultloc.errors import PreconditionError
from faultloc.formula.cnf import CnfFormula, HealthVarMap, WcnfFormula


def gate_clauses(kind: str, out: int, ins: list, new_var) -> list:
    """Clauses for ``out <-> kind(ins)``."""
    if kind in ("NAND", "NOR", "XNOR", "NOT"):
        base = {"NAND": "AND", "NOR": "OR", "XNOR": "XOR", "NOT": "BUFF"}[kind]
        return gate_clauses(base, -out, ins, new_var)
    if kind == "BUFF":
        (a,) = ins
        return [(-out, a), (out, -a)]
    if kind == "AND":
        return [(-out, a) for a in ins] + [(out,) + tuple(-a for a in ins)]
    if kind == "OR":
        return [(out, -a) for a in ins] + [(-out,) + tuple(ins)]
    if kind == "XOR":
        cls = []
        acc = ins[0]
        for k, b in enumerate(ins[1:]):
            t = out if k == len(ins) - 2 else new_var()
            cls += [(-t, acc, b), (-t, -acc, -b), (t, -acc, b), (t, acc, -b)]
            acc = t
        return cls
    raise ValueError(f"unknown gate kind {kind!r}")


@dataclass
class InstrumentedCircuitFormula:
    wcnf: WcnfFormula
    health: HealthVarMap
    signal_offsets: list
    clause_ranges: list  # per observation, [start, end) into wcnf.hard.clauses
    signal_index: dict = field(default_factory=dict)

    def signal_var(self, k: int, signal: str) -> int:
        return self.signal_offsets[k] + self.signal_index[signal]


def encode_instrumented(c: Circuit, obs) -> InstrumentedCircuitFormula:
    obs = list(obs)
    if not obs:
        raise PreconditionError("at least one observation is required")
    obs = [o if isinstance(o, CircuitObservation) else CircuitObservation(*o) for o in obs]
    for o in obs:
        o.check(c)

    health = HealthVarMap((g.id, j + 1) for j, g in enumerate(c.gates))
    n_health = len(c.gates)
    signals = c.signals()
    index = {s: i + 1 for i, s in enumerate(signals)}
    per_copy = len(signals)
    offsets = [n_health + k * per_copy for k in range(len(obs))]
    next_var = [n_health + len(obs) * per_copy]

    def new_var():
        next_var[0] += 1
        return next_var[0]

    hard = []
    ranges = []
    for k, o in enumerate(obs):
        start = len(hard)
        sv = lambda s: offsets[k] + index[s]  # noqa: E731
        for j, g in enumerate(c.gates):
            h = j + 1
            for cl in gate_clauses(g.kind, sv(g.id), [sv(s) for s in g.fanin], new_var):
                hard.append((-h,) + cl)
        for s, b in zip(c.inputs, o.input_bits):
            hard.append((sv(s) if b else -sv(s),))
        for s, b in zip(c.outputs, o.output_bits):
            hard.append((sv(s) if b else -sv(s),))
        ranges.append((start, len(hard)))
    soft = [((j + 1,), 1) for j in range(n_health)]
    w = WcnfFormula(CnfFormula(next_var[0], hard), soft)
    return InstrumentedCircuitFormula(w, health, offsets, ranges, index)
