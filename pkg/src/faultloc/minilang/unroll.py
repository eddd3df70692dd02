"""One fresh copy of the program per failing test.

Variables of copy k are renamed ``name@k``; ``read`` becomes a read of the
next element of that test's input array, ``print`` appends to that test's
output sequence and ``return`` jumps to the next copy.  The property checked
at the very end is "some test still fails", i.e. the disjunction of the
negated per-test assertions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from faultloc.errors import PreconditionError
from faultloc.minilang.ast import (
    Assign,
    Binary,
    Block,
    Cond,
    Decl,
    Exit,
    For,
    If,
    InputAt,
    Num,
    Output,
    Print,
    Program,
    Read,
    Return,
    Unary,
    Var,
    While,
    render_stmt,
)


@dataclass(frozen=True)
class TestCase:
    inputs: tuple
    expected_output: tuple

    __test__ = False  # not a pytest class

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(v) for v in self.inputs))
        object.__setattr__(self, "expected_output", tuple(int(v) for v in self.expected_output))


def load_tests(text: str) -> list:
    """Parse ``{"tests": [{"in": [...], "out": [...]}, ...]}``."""
    doc = json.loads(text)
    rows = doc["tests"] if isinstance(doc, dict) else doc
    return [TestCase(r.get("in", []), r.get("out", [])) for r in rows]


def dump_tests(tests) -> str:
    return json.dumps({"tests": [{"in": list(t.inputs), "out": list(t.expected_output)}
                                 for t in tests]}) + "\n"


@dataclass(frozen=True)
class Scope:
    index: int
    test: TestCase
    body: Block


@dataclass(frozen=True)
class UnrolledProgram:
    scopes: tuple
    source: Program

    @property
    def tests(self) -> list:
        return [s.test for s in self.scopes]


class _Renamer:
    def __init__(self, k: int):
        self.k = k

    def name(self, n: str) -> str:
        return f"{n}@{self.k}"

    def expr(self, e):
        if isinstance(e, Var):
            return Var(self.name(e.name))
        if isinstance(e, Num):
            return e
        if isinstance(e, Unary):
            return Unary(e.op, self.expr(e.operand))
        if isinstance(e, Binary):
            return Binary(e.op, self.expr(e.left), self.expr(e.right))
        if isinstance(e, Cond):
            return Cond(self.expr(e.cond), self.expr(e.then), self.expr(e.other))
        raise TypeError(f"unexpected expression {e!r}")

    def block(self, b: Block) -> Block:
        return Block(tuple(self.stmt(s) for s in b.stmts), b.line, b.scoped)

    def stmt(self, s):
        k = self.k
        if isinstance(s, Block):
            return self.block(s)
        if isinstance(s, Decl):
            return Decl(tuple(self.name(n) for n in s.names), s.line, s.is_global)
        if isinstance(s, Assign):
            return Assign(self.name(s.target), self.expr(s.value), s.line, s.io)
        if isinstance(s, Read):
            reads = tuple(Assign(self.name(t), InputAt(k), s.line, io=True) for t in s.targets)
            return reads[0] if len(reads) == 1 else Block(reads, s.line, scoped=False)
        if isinstance(s, Print):
            return Output(k, self.expr(s.value), s.line)
        if isinstance(s, Return):
            return Exit(k, s.line)
        if isinstance(s, If):
            other = self.block(s.other) if s.other is not None else None
            return If(self.expr(s.cond), self.block(s.then), other, s.line)
        if isinstance(s, While):
            return While(self.expr(s.cond), self.block(s.body), s.line, s.loop_id)
        if isinstance(s, For):
            return For(tuple(self.stmt(i) for i in s.init), self.expr(s.cond),
                       tuple(self.stmt(u) for u in s.update), self.block(s.body), s.line, s.loop_id)
        raise TypeError(f"unexpected statement {s!r}")


def unroll_program(p: Program, failing) -> UnrolledProgram:
    failing = [t if isinstance(t, TestCase) else TestCase(*t) for t in failing]
    if not failing:
        raise PreconditionError("at least one failing test is required")
    scopes = []
    for k, test in enumerate(failing):
        r = _Renamer(k)
        stmts = tuple(r.stmt(g) for g in p.globals) + r.block(p.body).stmts
        scopes.append(Scope(k, test, Block(stmts, p.body.line)))
    return UnrolledProgram(tuple(scopes), p)


def render_unrolled(u: UnrolledProgram, body_of=None) -> str:
    """C-like text of the unrolled program (optionally with instrumented
    bodies supplied by ``body_of(scope)``)."""
    lines = []
    for s in u.scopes:
        vals = ", ".join(str(v) for v in s.test.inputs)
        exp = ", ".join(str(v) for v in s.test.expected_output)
        lines.append(f"int _in{s.index}[{len(s.test.inputs)}] = {{{vals}}};")
        lines.append(f"int _expected{s.index}[{len(s.test.expected_output)}] = {{{exp}}};")
        lines.append(f"int _ioff{s.index} = 0, _ooff{s.index} = 0;")
    lines.append("int main(){")
    for s in u.scopes:
        lines.append(f"  scope_{s.index}:")
        body = body_of(s) if body_of else s.body
        lines += render_stmt(body, 1)
        lines.append(f"  goto scope_{s.index + 1};")
    lines.append(f"  scope_{len(u.scopes)}:")
    neg = " || ".join(f"!equal(_out{s.index}, _expected{s.index})" for s in u.scopes)
    lines.append(f"  assert({neg});")
    lines.append("}")
    return "\n".join(lines) + "\n"
