"""Symbolic execution of an instrumented program into a weighted CNF.

Each scope is executed under a path condition.  Assignments are guarded
selections ``x' = g ? e : x``, which gives SSA with the join points folded
in.  A scope's input offset and output counter are one-hot vectors; an
output at position j under guard g must equal the expected j-th value, and
the scope must end having printed exactly the expected number of values.
Together these constraints say every failing test now passes, so the hard
part is satisfiable iff the relaxed program can meet all expectations.

Variable layout: the shared relaxation variables first (in numbering order,
these are the soft units), then the constant, then each scope's variables
and gates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from faultloc.errors import FormulaError, PreconditionError
from faultloc.formula.cnf import CnfFormula, HealthVarMap, WcnfFormula
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
    RelaxRef,
    Relaxed,
    Unary,
    Var,
    While,
)
from faultloc.minilang.bitblast import Encoder
from faultloc.minilang.instrument import InstrumentedProgram, RelaxationMap

BITWIDTHS = (8, 16, 32)


@dataclass
class TraceFormula:
    wcnf: WcnfFormula
    relax: RelaxationMap
    bitwidth: int
    unwind: int
    health: HealthVarMap
    scope_ranges: list
    shared_range: tuple
    else_vars: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def problem(self):
        from faultloc.engines.problem import split_problem

        return split_problem(self.wcnf, self.scope_ranges, self.health, shared=self.shared_range,
                             kind="program", labels=self.relax.labels(), meta=dict(self.meta))

    def sidecar(self) -> dict:
        """Soft variable -> (component, line, kind, weight)."""
        out = {}
        for e in self.relax.shared():
            out[str(self.health.var(e.id))] = {"component": e.id, "line": e.line,
                                               "kind": e.kind, "weight": e.weight}
        return out


class _Value:
    """An expression value: a bit-vector, or a single Boolean literal."""

    __slots__ = ("bits", "lit")

    def __init__(self, bits=None, lit=None):
        self.bits = bits
        self.lit = lit


class _ScopeExec:
    def __init__(self, enc: Encoder, scope, width: int, unwind: int, refvar):
        self.enc = enc
        self.width = width
        self.unwind = unwind
        self.refvar = refvar  # (base, iterations) -> literal
        self.env = {}
        self.iters = {}  # loop id -> current iteration
        self.ret = enc.FALSE
        n_in = len(scope.test.inputs)
        self.inputs = [enc.const(v, width) for v in scope.test.inputs]
        # ioff[j]: next read is input j; ioff[n_in]: inputs exhausted
        self.ioff = [enc.TRUE] + [enc.FALSE] * n_in
        self.expected = [enc.const(v, width) for v in scope.test.expected_output]
        # ooff[j]: j values printed; last slot means "too many"
        self.ooff = [enc.TRUE] + [enc.FALSE] * (len(self.expected) + 1)

    # -- expressions -------------------------------------------------------------------

    def ref(self, r: RelaxRef) -> int:
        return self.refvar(r.name, tuple(self.iters[l] for l in r.loops))

    def bits(self, v: _Value) -> list:
        return v.bits if v.bits is not None else self.enc.from_bool(v.lit, self.width)

    def truth(self, v: _Value) -> int:
        return v.lit if v.lit is not None else self.enc.nonzero(v.bits)

    def expr(self, e) -> _Value:
        enc = self.enc
        if isinstance(e, Num):
            return _Value(bits=enc.const(e.value, self.width))
        if isinstance(e, Var):
            if e.name not in self.env:
                raise FormulaError(f"variable {e.name!r} used before declaration")
            return _Value(bits=self.env[e.name])
        if isinstance(e, RelaxRef):
            return _Value(lit=self.ref(e))
        if isinstance(e, Unary):
            v = self.expr(e.operand)
            if e.op == "-":
                return _Value(bits=enc.neg(self.bits(v)))
            if e.op == "!":
                return _Value(lit=-self.truth(v))
            if e.op == "+":
                return v
            raise FormulaError(f"unsupported operator {e.op!r}")
        if isinstance(e, Binary):
            a, b = self.expr(e.left), self.expr(e.right)
            op = e.op
            if op == "&&":
                return _Value(lit=enc.and_(self.truth(a), self.truth(b)))
            if op == "||":
                return _Value(lit=enc.or_(self.truth(a), self.truth(b)))
            x, y = self.bits(a), self.bits(b)
            if op == "+":
                return _Value(bits=enc.add(x, y))
            if op == "-":
                return _Value(bits=enc.sub(x, y))
            if op == "==":
                return _Value(lit=enc.eq(x, y))
            if op == "!=":
                return _Value(lit=-enc.eq(x, y))
            if op == "<":
                return _Value(lit=enc.slt(x, y))
            if op == ">":
                return _Value(lit=enc.slt(y, x))
            if op == "<=":
                return _Value(lit=-enc.slt(y, x))
            if op == ">=":
                return _Value(lit=-enc.slt(x, y))
            raise FormulaError(f"unsupported operator {op!r}")
        if isinstance(e, Cond):
            c = self.truth(self.expr(e.cond))
            a, b = self.expr(e.then), self.expr(e.other)
            if a.lit is not None and b.lit is not None:
                return _Value(lit=enc.ite(c, a.lit, b.lit))
            return _Value(bits=enc.bv_ite(c, self.bits(a), self.bits(b)))
        raise FormulaError(f"unsupported expression {e!r}")

    # -- statements --------------------------------------------------------------------

    def read(self, g: int) -> list:
        enc = self.enc
        n = len(self.inputs)
        if n == 0:
            return enc.fresh(self.width)
        extra = enc.fresh(self.width)  # value of a read past the provided inputs
        val = []
        for i in range(self.width):
            bit = enc.and_(self.ioff[n], extra[i])
            for j in range(n):
                bit = enc.or_(bit, enc.and_(self.ioff[j], self.inputs[j][i]))
            val.append(bit)
        shifted = [enc.FALSE] + self.ioff[:-1]
        shifted[n] = enc.or_(self.ioff[n - 1], self.ioff[n])
        self.ioff = [enc.ite(g, s, o) for s, o in zip(shifted, self.ioff)]
        return val

    def output(self, g: int, bits: list):
        enc = self.enc
        for j, exp in enumerate(self.expected):
            enc.add_clause([-g, -self.ooff[j], enc.eq(bits, exp)])
        e = len(self.expected)
        shifted = [enc.FALSE] + self.ooff[:-1]
        shifted[e + 1] = enc.or_(self.ooff[e], self.ooff[e + 1])
        self.ooff = [enc.ite(g, s, o) for s, o in zip(shifted, self.ooff)]

    def assign(self, name: str, bits: list, g: int):
        self.env[name] = self.enc.bv_ite(g, bits, self.env[name])

    def active(self, path: int) -> int:
        return self.enc.and_(path, -self.ret)

    def block(self, b: Block, path: int):
        for s in b.stmts:
            self.stmt(s, path)

    def stmt(self, s, path: int):
        enc = self.enc
        if isinstance(s, Block):
            self.block(s, path)
        elif isinstance(s, Decl):
            for n in s.names:
                self.env[n] = enc.fresh(self.width)
        elif isinstance(s, Relaxed):
            self.stmt(s.stmt, enc.and_(path, self.ref(s.rv)))
        elif isinstance(s, Assign):
            g = self.active(path)
            if s.target not in self.env:
                raise FormulaError(f"variable {s.target!r} assigned before declaration")
            if isinstance(s.value, InputAt):
                bits = self.read(g)
            else:
                bits = self.bits(self.expr(s.value))
            self.assign(s.target, bits, g)
        elif isinstance(s, Output):
            self.output(self.active(path), self.bits(self.expr(s.value)))
        elif isinstance(s, Exit):
            self.ret = enc.or_(self.ret, self.active(path))
        elif isinstance(s, If):
            c = self.truth(self.expr(s.cond))
            self.block(s.then, enc.and_(path, c))
            if s.other is not None:
                self.block(s.other, enc.and_(path, -c))
        elif isinstance(s, (While, For)):
            self.loop(s, path)
        else:
            raise FormulaError(f"unsupported statement {s!r}")

    def loop(self, s, path: int):
        enc = self.enc
        if isinstance(s, For):
            for i in s.init:
                self.stmt(i, path)
        lid = s.loop_id
        for it in range(self.unwind + 1):
            self.iters[lid] = it
            c = self.truth(self.expr(s.cond))
            if it == self.unwind:
                # unwinding assertion: the loop has exited by now
                enc.add_clause([-self.active(path), -c])
                break
            path = enc.and_(path, c)
            self.block(s.body, path)
            if isinstance(s, For):
                for u in s.update:
                    self.stmt(u, path)
        del self.iters[lid]

    def finish(self):
        """Exactly the expected number of values were printed."""
        self.enc.add_clause([self.ooff[len(self.expected)]])


def compile_trace_formula(p: InstrumentedProgram, r: RelaxationMap, unwind: int | None = None,
                          bitwidth: int = 16) -> TraceFormula:
    if bitwidth not in BITWIDTHS:
        raise PreconditionError(f"bitwidth must be one of {BITWIDTHS}, got {bitwidth}")
    unwind = p.unwind if unwind is None else unwind
    if unwind != p.unwind or unwind != r.unwind:
        raise PreconditionError("unwind bound differs from the one used for instrumentation")
    shared = r.shared()
    health = HealthVarMap((e.id, i + 1) for i, e in enumerate(shared))
    enc = Encoder(start_var=len(shared))
    shared_range = (0, len(enc.clauses))
    else_vars = {}

    def refvar(base, its):
        rid = base + "".join(f"[{i}]" for i in its)
        if base.startswith("rv"):
            return health.var(rid)
        if rid not in else_vars:
            else_vars[rid] = enc.new_var()
        return else_vars[rid]

    ranges = []
    for scope in p.scopes:
        enc.reset_cache()
        start = len(enc.clauses)
        ex = _ScopeExec(enc, scope, bitwidth, unwind, refvar)
        ex.block(scope.body, enc.TRUE)
        ex.finish()
        ranges.append((start, len(enc.clauses)))
    hard = CnfFormula(enc.nvars, enc.clauses)
    soft = [((i + 1,), e.weight) for i, e in enumerate(shared)]
    meta = {"scopes": len(p.scopes), "unwind": unwind, "bitwidth": bitwidth}
    return TraceFormula(WcnfFormula(hard, soft), r, bitwidth, unwind, health, ranges,
                        shared_range, else_vars, meta)
