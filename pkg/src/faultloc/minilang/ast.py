"""Syntax tree of the mini language, before and after unrolling and
instrumentation, plus a C-like pretty printer.

Nodes are immutable.  Every statement carries the source line it came from,
which doubles as its component label in diagnoses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

# -- expressions -----------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-", "!"
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # + - < <= > >= == != && ||
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Cond:
    cond: "Expr"
    then: "Expr"
    other: "Expr"


@dataclass(frozen=True)
class InputAt:
    """Next element of scope ``scope``'s input array (post-increments the
    scope's input offset)."""

    scope: int


@dataclass(frozen=True)
class RelaxRef:
    """A relaxation (``rv``) or else (``ev``) variable, indexed by the
    current iteration of each enclosing loop in ``loops``."""

    name: str
    loops: tuple = ()


Expr = Union[Num, Var, Unary, Binary, Cond, InputAt, RelaxRef]

# -- statements ------------------------------------------------------------------


@dataclass(frozen=True)
class Decl:
    names: tuple
    line: int
    is_global: bool = False


@dataclass(frozen=True)
class Assign:
    target: str
    value: Expr
    line: int
    io: bool = False  # reads from the input stream


@dataclass(frozen=True)
class Read:
    targets: tuple
    line: int


@dataclass(frozen=True)
class Print:
    value: Expr
    line: int


@dataclass(frozen=True)
class Output:
    """Append ``value`` to scope ``scope``'s output sequence."""

    scope: int
    value: Expr
    line: int


@dataclass(frozen=True)
class Block:
    stmts: tuple = ()
    line: int = 0
    scoped: bool = True  # False for a declaration split into several statements


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Block
    other: Optional[Block]
    line: int


@dataclass(frozen=True)
class While:
    cond: Expr
    body: Block
    line: int
    loop_id: int = 0


@dataclass(frozen=True)
class For:
    init: tuple  # of Assign (or Relaxed once instrumented)
    cond: Expr
    update: tuple
    body: Block
    line: int
    loop_id: int = 0


@dataclass(frozen=True)
class Return:
    value: Optional[Expr]
    line: int


@dataclass(frozen=True)
class Exit:
    """Leave the current scope and continue with the next one."""

    scope: int
    line: int


@dataclass(frozen=True)
class Relaxed:
    """``if (rv) stmt``; inside a for header it renders as ``rv ? stmt : 1``."""

    rv: RelaxRef
    stmt: "Stmt"

    @property
    def line(self) -> int:
        return self.stmt.line


Stmt = Union[Decl, Assign, Read, Print, Output, Block, If, While, For, Return, Exit, Relaxed]


@dataclass(frozen=True)
class Program:
    globals: tuple  # Decl / Assign statements at file scope
    body: Block
    has_main: bool = True

    def statements(self):
        """All statements, depth first, in source order."""
        return list(walk(Block(self.globals + self.body.stmts)))


def children(s) -> list:
    if isinstance(s, Block):
        return list(s.stmts)
    if isinstance(s, If):
        return [s.then] + ([s.other] if s.other is not None else [])
    if isinstance(s, While):
        return [s.body]
    if isinstance(s, For):
        return list(s.init) + [s.body] + list(s.update)
    if isinstance(s, Relaxed):
        return [s.stmt]
    return []


def walk(s):
    yield s
    for c in children(s):
        yield from walk(c)


# -- pretty printer ----------------------------------------------------------------

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4, "+": 5, "-": 5}


def c_name(name: str) -> str:
    return name.replace("@", "_").replace("~", "_s")


def render_ref(r: RelaxRef) -> str:
    return "_" + c_name(r.name) + "".join(f"[_lo{l}]" for l in r.loops)


def render_expr(e, prec: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return c_name(e.name)
    if isinstance(e, RelaxRef):
        return render_ref(e)
    if isinstance(e, InputAt):
        return f"_in{e.scope}[_ioff{e.scope}++]"
    if isinstance(e, Unary):
        return e.op + render_expr(e.operand, 6)
    if isinstance(e, Binary):
        p = _PREC[e.op]
        s = f"{render_expr(e.left, p)} {e.op} {render_expr(e.right, p + 1)}"
        return f"({s})" if p < prec else s
    if isinstance(e, Cond):
        s = f"{render_expr(e.cond, 1)} ? {render_expr(e.then, 1)} : {render_expr(e.other, 0)}"
        return f"({s})" if prec > 0 else s
    raise TypeError(f"not an expression: {e!r}")


def _header_item(s) -> str:
    if isinstance(s, Relaxed):
        return f"{render_ref(s.rv)} ? ({_header_item(s.stmt)}) : 1"
    if isinstance(s, Assign):
        return f"{c_name(s.target)} = {render_expr(s.value)}"
    raise TypeError(f"not a header item: {s!r}")


def render_stmt(s, indent: int = 0) -> list:
    pad = "  " * indent
    if isinstance(s, Block) and not s.scoped:
        return [line for c in s.stmts for line in render_stmt(c, indent)]
    if isinstance(s, Block):
        out = [pad + "{"]
        for c in s.stmts:
            out += render_stmt(c, indent + 1)
        return out + [pad + "}"]
    if isinstance(s, Decl):
        return [pad + "int " + ", ".join(c_name(n) for n in s.names) + ";"]
    if isinstance(s, Assign):
        return [pad + _header_item(s) + ";"]
    if isinstance(s, Read):
        return [pad + "read(" + ", ".join(c_name(n) for n in s.targets) + ");"]
    if isinstance(s, Print):
        return [pad + f"print({render_expr(s.value)});"]
    if isinstance(s, Output):
        return [pad + f"_ooff{s.scope} = print_int(_out{s.scope}, _ooff{s.scope}, "
                f"{render_expr(s.value)});"]
    if isinstance(s, Return):
        v = "" if s.value is None else " " + render_expr(s.value)
        return [pad + f"return{v};"]
    if isinstance(s, Exit):
        return [pad + f"goto scope_{s.scope + 1};"]
    if isinstance(s, Relaxed):
        inner = render_stmt(s.stmt, indent + 1)
        return [pad + f"if ({render_ref(s.rv)})"] + inner
    if isinstance(s, If):
        out = [pad + f"if ({render_expr(s.cond)})"] + render_stmt(s.then, indent)
        if s.other is not None:
            out += [pad + "else"] + render_stmt(s.other, indent)
        return out
    if isinstance(s, While):
        return [pad + f"while ({render_expr(s.cond)})"] + render_stmt(s.body, indent)
    if isinstance(s, For):
        init = ", ".join(_header_item(i) for i in s.init)
        upd = ", ".join(_header_item(i) for i in s.update)
        return [pad + f"for ({init}; {render_expr(s.cond)}; {upd})"] + render_stmt(s.body, indent)
    raise TypeError(f"not a statement: {s!r}")


def render_program(p: Program) -> str:
    lines = []
    for g in p.globals:
        lines += render_stmt(g)
    lines.append("int main()")
    lines += render_stmt(p.body)
    return "\n".join(lines) + "\n"
