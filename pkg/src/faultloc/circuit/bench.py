"""ISCAS85 BENCH netlists: parsing, validation and rendering."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from faultloc.errors import ParseError

GATE_KINDS = ("AND", "NAND", "OR", "NOR", "NOT", "XOR", "XNOR", "BUFF")
UNARY_KINDS = ("NOT", "BUFF")
_ALIASES = {"BUF": "BUFF"}

_NAME = r"[A-Za-z0-9_.\[\]$:']+"
_IO_RE = re.compile(rf"^(INPUT|OUTPUT)\s*\(\s*({_NAME})\s*\)$", re.IGNORECASE)
_GATE_RE = re.compile(rf"^({_NAME})\s*=\s*([A-Za-z]+)\s*\((.*)\)$")
_NAME_RE = re.compile(rf"^{_NAME}$")


@dataclass(frozen=True)
class Gate:
    id: str
    kind: str
    fanin: tuple

    def __post_init__(self):
        object.__setattr__(self, "fanin", tuple(self.fanin))


@dataclass(frozen=True)
class Circuit:
    name: str
    inputs: tuple
    outputs: tuple
    gates: tuple
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "_index", {g.id: i for i, g in enumerate(self.gates)})

    @property
    def gate_ids(self) -> list:
        return [g.id for g in self.gates]

    def gate(self, gid: str) -> Gate:
        return self.gates[self._index[gid]]

    def signals(self) -> list:
        """Inputs followed by gate outputs, in evaluation order."""
        return list(self.inputs) + self.gate_ids

    def replace_kinds(self, kinds: dict) -> "Circuit":
        gates = [Gate(g.id, kinds.get(g.id, g.kind), g.fanin) for g in self.gates]
        return Circuit(self.name, self.inputs, self.outputs, gates)

    def validate(self) -> None:
        defined = set()
        for s in self.inputs:
            if s in defined:
                raise ParseError(f"signal {s!r} defined twice", kind="duplicate")
            defined.add(s)
        for g in self.gates:
            _check_arity(g.kind, len(g.fanin), g.id, None)
            for s in g.fanin:
                if s not in defined:
                    raise ParseError(f"gate {g.id!r} reads {s!r} before it is defined",
                                     kind="undefined")
            if g.id in defined:
                raise ParseError(f"signal {g.id!r} defined twice", kind="duplicate")
            defined.add(g.id)
        for s in self.outputs:
            if s not in defined:
                raise ParseError(f"output {s!r} is never defined", kind="undefined")


def _check_arity(kind, n, gid, line, source=None):
    if kind in UNARY_KINDS and n != 1:
        raise ParseError(f"{kind} gate {gid!r} needs exactly one input, got {n}",
                         line=line, kind="arity", source=source)
    if kind not in UNARY_KINDS and n < 2:
        raise ParseError(f"{kind} gate {gid!r} needs at least two inputs, got {n}",
                         line=line, kind="arity", source=source)


def parse_bench(text: str, name: str = "circuit", source: str | None = None) -> Circuit:
    """Parse BENCH text and return a validated, topologically sorted circuit."""
    inputs, outputs = [], []
    raw = {}  # gate id -> (kind, fanin, line)
    input_lines = {}
    output_lines = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _IO_RE.match(line)
        if m:
            what, sig = m.group(1).upper(), m.group(2)
            if what == "INPUT":
                if sig in input_lines or sig in raw:
                    raise ParseError(f"signal {sig!r} defined twice", lineno, kind="duplicate",
                                     source=source)
                input_lines[sig] = lineno
                inputs.append(sig)
            else:
                output_lines.setdefault(sig, lineno)
                outputs.append(sig)
            continue
        m = _GATE_RE.match(line)
        if not m:
            raise ParseError(f"cannot parse {line!r}", lineno, kind="syntax", source=source)
        gid, kind, args = m.group(1), m.group(2).upper(), m.group(3)
        kind = _ALIASES.get(kind, kind)
        if kind not in GATE_KINDS:
            raise ParseError(f"unknown gate kind {m.group(2)!r}", lineno, kind="unknown-gate",
                             source=source)
        fanin = [a.strip() for a in args.split(",")] if args.strip() else []
        for a in fanin:
            if not _NAME_RE.match(a):
                raise ParseError(f"bad signal name {a!r}", lineno, kind="syntax", source=source)
        if gid in raw or gid in input_lines:
            raise ParseError(f"signal {gid!r} defined twice", lineno, kind="duplicate",
                             source=source)
        _check_arity(kind, len(fanin), gid, lineno, source)
        raw[gid] = (kind, fanin, lineno)

    defined = set(inputs) | set(raw)
    for gid, (kind, fanin, lineno) in raw.items():
        for a in fanin:
            if a not in defined:
                raise ParseError(f"gate {gid!r} reads undefined signal {a!r}", lineno,
                                 kind="undefined", source=source)
    for s in outputs:
        if s not in defined:
            raise ParseError(f"output {s!r} is never defined", output_lines[s],
                             kind="undefined", source=source)

    order = _topo_order(raw, set(inputs), source)
    gates = [Gate(gid, raw[gid][0], raw[gid][1]) for gid in order]
    return Circuit(name, inputs, outputs, gates)


def _topo_order(raw: dict, inputs: set, source) -> list:
    """Depth-first order that keeps file order where dependencies allow."""
    state = {}  # 1 = on stack, 2 = done
    order = []
    for root in raw:
        if state.get(root) == 2:
            continue
        stack = [(root, iter(raw[root][1]))]
        state[root] = 1
        while stack:
            gid, it = stack[-1]
            advanced = False
            for a in it:
                if a in inputs or state.get(a) == 2:
                    continue
                if state.get(a) == 1:
                    raise ParseError(f"combinational cycle through {a!r}", raw[a][2],
                                     kind="cyclic", source=source)
                state[a] = 1
                stack.append((a, iter(raw[a][1])))
                advanced = True
                break
            if not advanced:
                stack.pop()
                state[gid] = 2
                order.append(gid)
    return order


def render_bench(c: Circuit) -> str:
    lines = [f"# {c.name}"]
    lines.extend(f"INPUT({s})" for s in c.inputs)
    lines.extend(f"OUTPUT({s})" for s in c.outputs)
    lines.append("")
    lines.extend(f"{g.id} = {g.kind}({', '.join(g.fanin)})" for g in c.gates)
    return "\n".join(lines) + "\n"


def read_bench(path) -> Circuit:
    with open(path) as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(str(path)))[0]
    return parse_bench(text, name=name, source=str(path))
