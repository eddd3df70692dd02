"""Relaxation of an unrolled program.

Every relaxable item of the source gets one number from a single sequence,
in source order.  The same item in different scopes shares its ``rv``;
branch choices (``ev``) are private to a scope.  Inside loops the variables
become arrays indexed by the iteration of every enclosing loop:

* plain statements are guarded: ``if (rv) stmt``
* if and loop conditions become ``rv ? cond : ev``
* for-loop init/update items become ``rv ? item : 1``

Declarations and ``return`` are never relaxed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from faultloc.errors import PreconditionError
from faultloc.minilang.ast import (
    Assign,
    Block,
    Cond,
    Decl,
    Exit,
    For,
    If,
    Output,
    RelaxRef,
    Relaxed,
    While,
    render_stmt,
)
from faultloc.minilang.unroll import Scope, UnrolledProgram, render_unrolled

KINDS = ("statement", "if-condition", "loop-condition", "expression-list", "else-branch")


@dataclass(frozen=True)
class RelaxEntry:
    id: str  # "rv6[3]", "ev5@0", ...
    line: int
    kind: str
    weight: int  # 0 for else-branch variables
    iteration: tuple = ()
    base: str = ""  # "rv6"
    scope: int = -1  # -1 when shared


@dataclass
class RelaxationMap:
    """All relaxation variables plus the per-item structure used for weights.

    ``items`` maps a base rv name to ``(line, kind, loops, io)``; ``children``
    maps a condition's base name to the bases relaxed inside its block(s),
    transitively."""

    entries: dict = field(default_factory=dict)
    items: dict = field(default_factory=dict)
    children: dict = field(default_factory=dict)
    nested: dict = field(default_factory=dict)  # direct children only
    unwind: int = 1

    def shared(self) -> list:
        return [e for e in self.entries.values() if e.scope < 0]

    def else_vars(self) -> list:
        return [e for e in self.entries.values() if e.kind == "else-branch"]

    def weight_of_base(self, base: str) -> int:
        for e in self.entries.values():
            if e.base == base and e.scope < 0:
                return e.weight
        raise KeyError(base)

    def labels(self) -> dict:
        return {e.id: e.line for e in self.shared()}

    def to_json(self) -> dict:
        return {e.id: {"line": e.line, "kind": e.kind, "weight": e.weight,
                       **({"iteration": list(e.iteration)} if e.iteration else {})}
                for e in self.shared()}


@dataclass(frozen=True)
class InstrumentedProgram:
    scopes: tuple
    unrolled: UnrolledProgram
    unwind: int

    def render(self) -> str:
        by = {s.index: s.body for s in self.scopes}
        return render_unrolled(self.unrolled, body_of=lambda s: by[s.index])


def _ref_id(base: str, iters) -> str:
    return base + "".join(f"[{i}]" for i in iters)


class _Instrumenter:
    def __init__(self, scope: int, unwind: int, rmap: RelaxationMap | None):
        self.scope = scope
        self.unwind = unwind
        self.rmap = rmap  # only filled while instrumenting scope 0
        self.counter = 0
        self.loops = ()  # enclosing loop ids
        self.stack = []  # condition bases whose block we are inside
        self.evs = []  # (number, line, iterations), scope 0 only

    def _next(self) -> int:
        self.counter += 1
        return self.counter

    def _ranges(self, last_extra: bool) -> list:
        """Iteration tuples for an item nested in ``self.loops``; with
        ``last_extra`` the innermost index also takes the value ``unwind``."""
        dims = [range(self.unwind)] * len(self.loops)
        if last_extra and dims:
            dims[-1] = range(self.unwind + 1)
        return list(itertools.product(*dims))

    def _register(self, n: int, line: int, kind: str, io: bool = False, extra: bool = False) -> RelaxRef:
        base = f"rv{n}"
        if self.rmap is not None:
            self.rmap.items[base] = (line, kind, self.loops, io)
            for b in self.stack:
                self.rmap.children.setdefault(b, []).append(base)
            if self.stack:
                self.rmap.nested.setdefault(self.stack[-1], []).append(base)
            for it in self._ranges(extra):
                rid = _ref_id(base, it)
                self.rmap.entries[rid] = RelaxEntry(rid, line, kind, 1, it, base)
        return RelaxRef(base, self.loops)

    def _else(self, n: int, line: int, extra: bool = False) -> RelaxRef:
        if self.rmap is not None:
            self.evs.append((n, line, self._ranges(extra)))
        return RelaxRef(f"ev{n}@{self.scope}", self.loops)

    def relax_cond(self, cond, line: int, kind: str, extra: bool):
        n = self._next()
        rv = self._register(n, line, kind, extra=extra)
        ev = self._else(self._next(), line, extra)
        return Cond(rv, cond, ev), rv.name

    def block(self, b: Block) -> Block:
        return Block(tuple(self.stmt(s) for s in b.stmts), b.line, b.scoped)

    def stmt(self, s):
        if isinstance(s, Block):
            return self.block(s)
        if isinstance(s, (Decl, Exit)):
            return s
        if isinstance(s, Assign):
            return Relaxed(self._register(self._next(), s.line, "statement", io=s.io), s)
        if isinstance(s, Output):
            return Relaxed(self._register(self._next(), s.line, "statement", io=True), s)
        if isinstance(s, If):
            cond, base = self.relax_cond(s.cond, s.line, "if-condition", False)
            self.stack.append(base)
            then = self.block(s.then)
            other = self.block(s.other) if s.other is not None else None
            self.stack.pop()
            return If(cond, then, other, s.line)
        if isinstance(s, While):
            self.loops += (s.loop_id,)
            cond, base = self.relax_cond(s.cond, s.line, "loop-condition", True)
            self.stack.append(base)
            body = self.block(s.body)
            self.stack.pop()
            self.loops = self.loops[:-1]
            return While(cond, body, s.line, s.loop_id)
        if isinstance(s, For):
            init = tuple(Relaxed(self._register(self._next(), s.line, "expression-list"), i)
                         for i in s.init)
            self.loops += (s.loop_id,)
            cond, base = self.relax_cond(s.cond, s.line, "loop-condition", True)
            self.stack.append(base)
            body = self.block(s.body)
            update = tuple(Relaxed(self._register(self._next(), s.line, "expression-list"), u)
                           for u in s.update)
            self.stack.pop()
            self.loops = self.loops[:-1]
            return For(init, cond, update, body, s.line, s.loop_id)
        raise TypeError(f"unexpected statement {s!r}")


def instrument_program(u: UnrolledProgram, unwind: int = 8):
    """Returns ``(InstrumentedProgram, RelaxationMap)`` with all weights 1."""
    if unwind < 1:
        raise PreconditionError(f"unwind bound must be at least 1, got {unwind}")
    rmap = RelaxationMap(unwind=unwind)
    scopes = []
    evs = []
    for s in u.scopes:
        ins = _Instrumenter(s.index, unwind, rmap if s.index == 0 else None)
        scopes.append(Scope(s.index, s.test, ins.block(s.body)))
        evs = evs or ins.evs
    for s in u.scopes:
        for n, line, iters in evs:
            base = f"ev{n}@{s.index}"
            for it in iters:
                rid = _ref_id(base, it)
                rmap.entries[rid] = RelaxEntry(rid, line, "else-branch", 0, it, base, s.index)
    return InstrumentedProgram(tuple(scopes), u, unwind), rmap


def _structural(rmap: RelaxationMap, scheme: str) -> dict:
    sw = {}

    def weight(base):
        if base in sw:
            return sw[base]
        kids = rmap.nested.get(base, [])
        if scheme == "height":
            w = 1 + max((weight(k) for k in kids), default=0)
        else:
            w = max(1, sum(weight(k) for k in kids)) if rmap.items[base][1] in (
                "if-condition", "loop-condition") else 1
        sw[base] = w
        return w

    for b in rmap.items:
        weight(b)
    return sw


def assign_weights(r: RelaxationMap, hierarchical: bool = True, io_penalty: int = 1000,
                   scheme: str = "sum", propagate_io: bool = False) -> RelaxationMap:
    """Return a copy of ``r`` with soft weights set.

    Flat mode gives every shared variable weight 1.  Hierarchical mode gives a
    plain statement weight 1 and a condition the sum of the weights relaxed
    inside its block(s) (floor 1); ``read``/``print`` statements get
    ``io_penalty``.  By default the penalty applies to the I/O statement only
    and conditions sum the structural weights; ``propagate_io`` lets it flow
    into enclosing conditions instead.  ``scheme="height"`` weighs a condition
    by the height of its relaxed subtree."""
    if io_penalty < 1:
        raise PreconditionError(f"io penalty must be at least 1, got {io_penalty}")
    if scheme not in ("sum", "height"):
        raise ValueError(f"unknown weighting scheme {scheme!r}")
    if not hierarchical:
        final = {b: 1 for b in r.items}
    elif propagate_io and scheme == "sum":
        final = {}

        def fw(base):
            if base not in final:
                line, kind, loops, io = r.items[base]
                if io:
                    final[base] = io_penalty
                elif kind in ("if-condition", "loop-condition"):
                    final[base] = max(1, sum(fw(k) for k in r.nested.get(base, [])))
                else:
                    final[base] = 1
            return final[base]

        for b in r.items:
            fw(b)
    else:
        sw = _structural(r, scheme)
        final = {b: io_penalty if r.items[b][3] else sw[b] for b in r.items}
    entries = {k: (replace(e, weight=final[e.base]) if e.scope < 0 else e)
               for k, e in r.entries.items()}
    return RelaxationMap(entries, dict(r.items), dict(r.children), dict(r.nested), r.unwind)


def render_instrumented(p: InstrumentedProgram) -> str:
    return p.render()


__all__ = ["KINDS", "RelaxEntry", "RelaxationMap", "InstrumentedProgram", "instrument_program",
           "assign_weights", "render_instrumented", "render_stmt"]
