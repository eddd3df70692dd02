"""Lexer and recursive-descent parser for the mini language.

The grammar is documented in ``docs/minilang.md``.  Every variable use is
resolved to its declaration here; a shadowing declaration gets a distinct
internal name (``x~1``) so later passes never see two variables with the
same name.
"""

from __future__ import annotations

import re

from faultloc.errors import ParseError
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

KEYWORDS = {"int", "if", "else", "while", "for", "return", "read", "print", "void", "main"}
# recognised only to report them as unsupported
UNSUPPORTED_WORDS = {"char", "float", "double", "long", "short", "unsigned", "struct", "bool",
                     "break", "continue", "goto", "do", "switch", "case", "sizeof"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<pp>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\+\+|--|\+=|-=|<=|>=|==|!=|&&|\|\||[-+<>=!?:;,(){}*/%&\[\]|^~."])
    """,
    re.VERBOSE | re.DOTALL,
)

_UNSUPPORTED_OPS = {"*": "pointer or multiplication", "/": "division", "%": "modulo",
                    "&": "address-of or bitwise and", "[": "array access", "]": "array access",
                    "|": "bitwise or", "^": "bitwise xor", "~": "bitwise not", ".": "member access",
                    '"': "string literal"}


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


def tokenize(text: str, source: str | None = None) -> list:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1,
                             source=source)
        kind = m.lastgroup
        tok = m.group()
        col = pos - line_start + 1
        if kind == "num":
            toks.append(Token("num", tok, line, col))
        elif kind == "id":
            toks.append(Token("kw" if tok in KEYWORDS else "id", tok, line, col))
        elif kind == "op":
            toks.append(Token("op", tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = m.start() + tok.rindex("\n") + 1
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


class _Scopes:
    def __init__(self):
        self.stack = [{}]
        self.count = {}

    def push(self):
        self.stack.append({})

    def pop(self):
        self.stack.pop()

    def declare(self, name, tok, source):
        if name in self.stack[-1]:
            raise ParseError(f"variable {name!r} declared twice in the same block", tok.line,
                             tok.col, kind="duplicate", source=source)
        n = self.count.get(name, 0)
        self.count[name] = n + 1
        internal = name if n == 0 else f"{name}~{n}"
        self.stack[-1][name] = internal
        return internal

    def lookup(self, name):
        for frame in reversed(self.stack):
            if name in frame:
                return frame[name]
        return None


class Parser:
    def __init__(self, text: str, source: str | None = None):
        self.source = source
        self.toks = tokenize(text, source)
        self.i = 0
        self.scopes = _Scopes()
        self.loops = 0

    # -- token helpers -----------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None, kind="syntax"):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col, kind=kind, source=self.source)

    def check_unsupported(self, tok=None):
        tok = tok or self.tok
        if tok.kind == "op" and tok.text in _UNSUPPORTED_OPS:
            raise self.error(f"unsupported construct: {_UNSUPPORTED_OPS[tok.text]} ({tok.text!r})",
                             tok, kind="unsupported")
        if tok.kind == "id" and tok.text in UNSUPPORTED_WORDS:
            raise self.error(f"unsupported construct: {tok.text!r}", tok, kind="unsupported")

    def at(self, text) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def accept(self, text) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text) -> Token:
        if not self.at(text):
            self.check_unsupported()
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Token:
        if self.tok.kind != "id":
            self.check_unsupported()
            raise self.error(f"expected an identifier, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def use(self, tok: Token) -> str:
        name = self.scopes.lookup(tok.text)
        if name is None:
            raise self.error(f"variable {tok.text!r} used before declaration", tok,
                             kind="undeclared")
        return name

    # -- program -------------------------------------------------------------------

    def program(self) -> Program:
        globals_ = []
        body = None
        loose = []
        while self.tok.kind != "eof":
            if (self.at("int") or self.at("void")) and self.peek().text == "main":
                if body is not None:
                    raise self.error("main defined twice", kind="duplicate")
                self.i += 2
                self.expect("(")
                self.accept("void")
                self.expect(")")
                body = self.block(new_scope=True)
            elif body is None and not loose and self.at("int"):
                globals_.extend(self.declaration(is_global=True))
            else:
                if body is not None:
                    raise self.error("statements after main are not supported", kind="unsupported")
                loose.append(self.statement())
        if body is not None and loose:
            raise self.error("statements outside main are not supported", kind="unsupported")
        if body is None:
            # a bare statement list: file-scope declarations become locals
            stmts = [Decl(g.names, g.line) if isinstance(g, Decl) else g for g in globals_]
            return Program((), Block(tuple(stmts + loose), 1), has_main=False)
        return Program(tuple(globals_), body, has_main=True)

    def block(self, new_scope=True) -> Block:
        start = self.expect("{")
        if new_scope:
            self.scopes.push()
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated block", start)
            stmts.append(self.statement())
        self.expect("}")
        if new_scope:
            self.scopes.pop()
        return Block(tuple(stmts), start.line)

    def declaration(self, is_global=False) -> list:
        kw = self.expect("int")
        names = []
        inits = []
        while True:
            t = self.ident()
            if self.at("["):
                self.check_unsupported()
            if self.at("("):
                raise self.error("function declarations are not supported", kind="unsupported")
            init = None
            if self.accept("="):
                if self.accept("read"):
                    self.expect("(")
                    self.expect(")")
                    init = "read"
                else:
                    init = self.expr()
            name = self.scopes.declare(t.text, t, self.source)
            names.append(name)
            if init is not None:
                inits.append((name, init))
            if not self.accept(","):
                break
        self.expect(";")
        out = [Decl(tuple(names), kw.line, is_global)]
        for name, init in inits:
            out.append(Read((name,), kw.line) if init == "read" else Assign(name, init, kw.line))
        return out

    def statement(self):
        t = self.tok
        if self.at("{"):
            return self.block()
        if self.at("int"):
            stmts = self.declaration()
            return stmts[0] if len(stmts) == 1 else Block(tuple(stmts), t.line, scoped=False)
        if self.accept(";"):
            return Block((), t.line)
        if self.at("if"):
            return self.if_stmt()
        if self.at("while"):
            return self.while_stmt()
        if self.at("for"):
            return self.for_stmt()
        if self.accept("return"):
            value = None if self.at(";") else self.expr()
            self.expect(";")
            return Return(value, t.line)
        if self.accept("read"):
            self.expect("(")
            targets = [self.use(self.ident())]
            while self.accept(","):
                targets.append(self.use(self.ident()))
            self.expect(")")
            self.expect(";")
            return Read(tuple(targets), t.line)
        if self.accept("print"):
            self.expect("(")
            value = self.expr()
            self.expect(")")
            self.expect(";")
            return Print(value, t.line)
        s = self.simple()
        self.expect(";")
        return s

    def simple(self):
        """Assignment-like statement usable in a for header."""
        self.check_unsupported()
        t = self.ident()
        if self.at("("):
            raise self.error(f"function call {t.text!r} is not supported", t, kind="unsupported")
        self.check_unsupported()
        name = self.use(t)
        if self.accept("++"):
            return Assign(name, Binary("+", Var(name), Num(1)), t.line)
        if self.accept("--"):
            return Assign(name, Binary("-", Var(name), Num(1)), t.line)
        if self.accept("+="):
            return Assign(name, Binary("+", Var(name), self.expr()), t.line)
        if self.accept("-="):
            return Assign(name, Binary("-", Var(name), self.expr()), t.line)
        self.expect("=")
        if self.at("read"):
            self.i += 1
            self.expect("(")
            self.expect(")")
            return Read((name,), t.line)
        return Assign(name, self.expr(), t.line)

    def if_stmt(self):
        t = self.expect("if")
        self.expect("(")
        cond = self.expr()
        self.expect(")")
        then = self.as_block(self.statement())
        other = None
        if self.accept("else"):
            other = self.as_block(self.statement())
        return If(cond, then, other, t.line)

    def while_stmt(self):
        t = self.expect("while")
        self.loops += 1
        loop_id = self.loops
        self.expect("(")
        cond = self.expr()
        self.expect(")")
        body = self.as_block(self.statement())
        return While(cond, body, t.line, loop_id)

    def for_stmt(self):
        t = self.expect("for")
        self.loops += 1
        loop_id = self.loops
        self.expect("(")
        self.scopes.push()
        decls = []
        init = []
        if self.at("int"):
            for s in self.declaration():
                (decls if isinstance(s, Decl) else init).append(s)
        else:
            if not self.at(";"):
                init.append(self.simple())
                while self.accept(","):
                    init.append(self.simple())
            self.expect(";")
        cond = Num(1) if self.at(";") else self.expr()
        self.expect(";")
        update = []
        if not self.at(")"):
            update.append(self.simple())
            while self.accept(","):
                update.append(self.simple())
        self.expect(")")
        body = self.as_block(self.statement())
        self.scopes.pop()
        for s in init + update:
            if isinstance(s, Read):
                raise self.error("read() inside a for header is not supported", t,
                                 kind="unsupported")
        loop = For(tuple(init), cond, tuple(update), body, t.line, loop_id)
        if decls:
            return Block(tuple(decls) + (loop,), t.line, scoped=False)
        return loop

    @staticmethod
    def as_block(s) -> Block:
        return s if isinstance(s, Block) else Block((s,), s.line)

    # -- expressions -----------------------------------------------------------------

    def expr(self):
        return self.ternary()

    def ternary(self):
        c = self.binary(1)
        if self.accept("?"):
            a = self.expr()
            self.expect(":")
            b = self.ternary()
            return Cond(c, a, b)
        return c

    _LEVELS = {1: ("||",), 2: ("&&",), 3: ("==", "!="), 4: ("<", "<=", ">", ">="), 5: ("+", "-")}

    def binary(self, level):
        if level > 5:
            return self.unary()
        left = self.binary(level + 1)
        while self.tok.kind == "op" and self.tok.text in self._LEVELS[level]:
            op = self.tok.text
            self.i += 1
            left = Binary(op, left, self.binary(level + 1))
        self.check_unsupported_binary()
        return left

    def check_unsupported_binary(self):
        if self.tok.kind == "op" and self.tok.text in ("*", "/", "%", "&", "|", "^", "[", "."):
            self.check_unsupported()

    def unary(self):
        if self.accept("-"):
            return Unary("-", self.unary())
        if self.accept("!"):
            return Unary("!", self.unary())
        if self.accept("+"):
            return self.unary()
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "kw" and t.text == "read":
            raise self.error("read() is only allowed as a statement or initialiser", t,
                             kind="unsupported")
        if t.kind == "id":
            self.check_unsupported(t)
            self.i += 1
            if self.at("("):
                raise self.error(f"function call {t.text!r} is not supported", t,
                                 kind="unsupported")
            if self.at("["):
                self.check_unsupported()
            if self.at("++") or self.at("--"):
                raise self.error("increment inside an expression is not supported", self.tok,
                                 kind="unsupported")
            return Var(self.use(t))
        self.check_unsupported(t)
        raise self.error(f"expected an expression, found {t.text or 'end of input'!r}")


def parse_program(text: str, source: str | None = None) -> Program:
    return Parser(text, source).program()


def read_program(path) -> Program:
    with open(path) as fh:
        return parse_program(fh.read(), source=str(path))
