"""Concrete interpreter for source programs, used as a reference."""

from __future__ import annotations

from faultloc.errors import FaultlocError
from faultloc.minilang.ast import (
    Assign,
    Binary,
    Block,
    Cond,
    Decl,
    For,
    If,
    Num,
    Print,
    Program,
    Read,
    Return,
    Unary,
    Var,
    While,
)
from faultloc.minilang.bitblast import wrap


class Stuck(FaultlocError):
    """Execution left the bounded, deterministic fragment (uninitialised
    read, exhausted input, loop bound hit)."""


class _Return(Exception):
    pass


def eval_expr(e, env: dict, width: int = 16) -> int:
    if isinstance(e, Num):
        return wrap(e.value, width)
    if isinstance(e, Var):
        v = env.get(e.name)
        if v is None:
            raise Stuck(f"{e.name} read before being assigned")
        return v
    if isinstance(e, Unary):
        v = eval_expr(e.operand, env, width)
        return {"-": lambda: wrap(-v, width), "!": lambda: int(v == 0), "+": lambda: v}[e.op]()
    if isinstance(e, Binary):
        a = eval_expr(e.left, env, width)
        if e.op == "&&":
            return int(a != 0 and eval_expr(e.right, env, width) != 0)
        if e.op == "||":
            return int(a != 0 or eval_expr(e.right, env, width) != 0)
        b = eval_expr(e.right, env, width)
        if e.op == "+":
            return wrap(a + b, width)
        if e.op == "-":
            return wrap(a - b, width)
        return int({"==": a == b, "!=": a != b, "<": a < b, "<=": a <= b,
                    ">": a > b, ">=": a >= b}[e.op])
    if isinstance(e, Cond):
        c = eval_expr(e.cond, env, width)
        return eval_expr(e.then if c else e.other, env, width)
    raise TypeError(f"unexpected expression {e!r}")


def run_program(p: Program, inputs, width: int = 16, max_iterations: int = 1000) -> list:
    """Outputs of ``p`` on ``inputs``; raises :class:`Stuck` when the run
    depends on an unspecified value or exceeds ``max_iterations`` in a loop."""
    env = {}
    feed = list(inputs)
    out = []
    pos = [0]

    def stmt(s):
        if isinstance(s, Block):
            for c in s.stmts:
                stmt(c)
        elif isinstance(s, Decl):
            for n in s.names:
                env[n] = None
        elif isinstance(s, Assign):
            env[s.target] = eval_expr(s.value, env, width)
        elif isinstance(s, Read):
            for t in s.targets:
                if pos[0] >= len(feed):
                    raise Stuck("input exhausted")
                env[t] = wrap(feed[pos[0]], width)
                pos[0] += 1
        elif isinstance(s, Print):
            out.append(eval_expr(s.value, env, width))
        elif isinstance(s, Return):
            raise _Return()
        elif isinstance(s, If):
            if eval_expr(s.cond, env, width):
                stmt(s.then)
            elif s.other is not None:
                stmt(s.other)
        elif isinstance(s, (While, For)):
            if isinstance(s, For):
                for i in s.init:
                    stmt(i)
            n = 0
            while eval_expr(s.cond, env, width):
                n += 1
                if n > max_iterations:
                    raise Stuck("loop bound exceeded")
                stmt(s.body)
                if isinstance(s, For):
                    for u in s.update:
                        stmt(u)
        else:
            raise TypeError(f"unexpected statement {s!r}")

    try:
        for g in p.globals:
            stmt(g)
        stmt(p.body)
    except _Return:
        pass
    return out
