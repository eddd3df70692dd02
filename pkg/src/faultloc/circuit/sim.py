"""Simulation, fault injection and observation sampling."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from faultloc.circuit.bench import GATE_KINDS, UNARY_KINDS, Circuit, Gate
from faultloc.errors import PreconditionError

MAX_DRAWS = 100_000
_BATCH = 64


def _eval_word(kind: str, vals: list, mask: int) -> int:
    if kind in ("AND", "NAND"):
        r = mask
        for v in vals:
            r &= v
    elif kind in ("OR", "NOR"):
        r = 0
        for v in vals:
            r |= v
    elif kind in ("XOR", "XNOR"):
        r = 0
        for v in vals:
            r ^= v
    elif kind in ("BUFF", "NOT"):
        r = vals[0]
    else:
        raise ValueError(f"unknown gate kind {kind!r}")
    if kind in ("NAND", "NOR", "XNOR", "NOT"):
        r = ~r & mask
    return r


def simulate_words(c: Circuit, words, width: int) -> list:
    """Bit-parallel evaluation: ``words[i]`` packs ``width`` values of input i,
    one per bit.  Returns one packed word per output."""
    mask = (1 << width) - 1
    val = dict(zip(c.inputs, words))
    for g in c.gates:
        val[g.id] = _eval_word(g.kind, [val[s] for s in g.fanin], mask)
    return [val[s] for s in c.outputs]


def simulate(c: Circuit, input_bits) -> tuple:
    """Output bits for one input vector (ordered like ``c.inputs``)."""
    bits = list(input_bits)
    if len(bits) != len(c.inputs):
        raise PreconditionError(f"expected {len(c.inputs)} input bits, got {len(bits)}")
    return tuple(simulate_words(c, [int(b) & 1 for b in bits], 1))


def all_signals(c: Circuit, input_bits) -> dict:
    """Value of every signal for one input vector."""
    val = dict(zip(c.inputs, (int(b) & 1 for b in input_bits)))
    for g in c.gates:
        val[g.id] = _eval_word(g.kind, [val[s] for s in g.fanin], 1)
    return val


@dataclass(frozen=True)
class Fault:
    gate: str
    old_kind: str
    new_kind: str

    def to_json(self) -> dict:
        return {"gate": self.gate, "old": self.old_kind, "new": self.new_kind}


def compatible_kinds(kind: str) -> list:
    if kind in UNARY_KINDS:
        return [k for k in UNARY_KINDS if k != kind]
    return [k for k in GATE_KINDS if k not in UNARY_KINDS and k != kind]


def inject_faults(c: Circuit, n_faults: int, seed) -> tuple:
    """Swap the kind of ``n_faults`` distinct gates for a different kind of
    the same arity.  Returns ``(faulty_circuit, faults)``."""
    if not 1 <= n_faults <= len(c.gates):
        raise PreconditionError(f"n_faults must be in [1, {len(c.gates)}], got {n_faults}")
    rng = random.Random(seed)
    picked = rng.sample(range(len(c.gates)), n_faults)
    faults = []
    for i in picked:
        g = c.gates[i]
        faults.append(Fault(g.id, g.kind, rng.choice(compatible_kinds(g.kind))))
    faulty = c.replace_kinds({f.gate: f.new_kind for f in faults})
    return faulty, faults


@dataclass(frozen=True)
class CircuitObservation:
    input_bits: tuple
    output_bits: tuple

    def __post_init__(self):
        object.__setattr__(self, "input_bits", tuple(int(b) for b in self.input_bits))
        object.__setattr__(self, "output_bits", tuple(int(b) for b in self.output_bits))
        if any(b not in (0, 1) for b in self.input_bits + self.output_bits):
            raise PreconditionError("observation bits must be 0 or 1")

    def check(self, c: Circuit) -> None:
        if len(self.input_bits) != len(c.inputs) or len(self.output_bits) != len(c.outputs):
            raise PreconditionError("observation does not match the circuit interface")


def generate_observations(golden: Circuit, faulty: Circuit, count: int, seed,
                          max_draws: int = MAX_DRAWS) -> list:
    """Up to ``count`` distinct input vectors on which the two circuits
    disagree, each paired with the golden output.  Vectors are drawn
    uniformly with rejection; fewer are returned when the draw budget or
    the input space runs out."""
    if golden.inputs != faulty.inputs or golden.outputs != faulty.outputs:
        raise PreconditionError("golden and faulty circuits have different interfaces")
    n = len(golden.inputs)
    space = 1 << n
    rng = random.Random(seed)
    seen = set()
    out = []
    draws = 0
    while len(out) < count and draws < max_draws and len(seen) < space:
        batch = []
        while len(batch) < _BATCH and draws < max_draws and len(seen) < space:
            v = rng.getrandbits(n) if n else 0
            draws += 1
            if v in seen:
                continue
            seen.add(v)
            batch.append(v)
        words = [sum(((v >> i) & 1) << k for k, v in enumerate(batch)) for i in range(n)]
        good = simulate_words(golden, words, len(batch))
        bad = simulate_words(faulty, words, len(batch))
        for k, v in enumerate(batch):
            if any(((a ^ b) >> k) & 1 for a, b in zip(good, bad)):
                out.append(CircuitObservation(
                    tuple((v >> i) & 1 for i in range(n)),
                    tuple((a >> k) & 1 for a in good),
                ))
                if len(out) == count:
                    break
    return out


def observations_to_json(c: Circuit, obs) -> str:
    doc = {
        "inputs": list(c.inputs),
        "outputs": list(c.outputs),
        "observations": [{"in": "".join(map(str, o.input_bits)),
                          "out": "".join(map(str, o.output_bits))} for o in obs],
    }
    return json.dumps(doc, indent=1) + "\n"


def observations_from_json(text: str, c: Circuit | None = None) -> list:
    doc = json.loads(text)
    rows = doc["observations"] if isinstance(doc, dict) else doc
    obs = [CircuitObservation(r["in"], r["out"]) for r in rows]
    if c is not None:
        if isinstance(doc, dict) and "inputs" in doc and list(doc["inputs"]) != list(c.inputs):
            raise PreconditionError("observation file names different circuit inputs")
        for o in obs:
            o.check(c)
    return obs


def random_circuit(n_inputs: int, n_gates: int, seed, n_outputs: int | None = None,
                   max_fanin: int = 3, name: str = "rand") -> Circuit:
    """Random combinational netlist.  Gates read earlier signals; outputs
    are the gates nobody reads (plus random extras up to ``n_outputs``)."""
    rng = random.Random(seed)
    inputs = [f"i{k}" for k in range(n_inputs)]
    signals = list(inputs)
    gates = []
    multi = [k for k in GATE_KINDS if k not in UNARY_KINDS]
    for k in range(n_gates):
        gid = f"g{k}"
        if len(signals) < 2 or rng.random() < 0.15:
            kind = rng.choice(UNARY_KINDS)
            fanin = [rng.choice(signals)]
        else:
            kind = rng.choice(multi)
            fanin = rng.sample(signals, rng.randint(2, min(max_fanin, len(signals))))
        gates.append(Gate(gid, kind, fanin))
        signals.append(gid)
    read = {s for g in gates for s in g.fanin}
    outputs = [g.id for g in gates if g.id not in read]
    if n_outputs is not None:
        extra = [g.id for g in gates if g.id not in outputs]
        rng.shuffle(extra)
        while len(outputs) < n_outputs and extra:
            outputs.append(extra.pop())
    outputs.sort(key=lambda s: int(s[1:]))
    return Circuit(name, inputs, outputs, gates)
