"""Gate-level encoder with constant folding and structural hashing, and
fixed-width two's-complement bit-vector operations on top of it.

Bit-vectors are lists of literals, least significant bit first.  Every gate
is fully defined (both implication directions), and recorded so that a
formula can also be evaluated forwards from an assignment of its free
variables.
"""

from __future__ import annotations


class Encoder:
    def __init__(self, start_var: int = 0):
        self.nvars = start_var
        self.clauses = []
        self.gates = []  # (out, op, ins) in creation order
        self.cache = {}
        self.TRUE = self.new_var()
        self.FALSE = -self.TRUE
        self.clauses.append((self.TRUE,))

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def fresh(self, width: int) -> list:
        return [self.new_var() for _ in range(width)]

    def reset_cache(self):
        """Forget hashed gates, so later clauses never reuse earlier ones."""
        self.cache = {}

    def _gate(self, op, ins, defn):
        key = (op,) + tuple(ins)
        o = self.cache.get(key)
        if o is None:
            o = self.new_var()
            self.cache[key] = o
            self.gates.append((o, op, tuple(ins)))
            self.clauses.extend(defn(o))
        return o

    # -- Boolean gates ---------------------------------------------------------------

    def and_(self, a: int, b: int) -> int:
        T, F = self.TRUE, self.FALSE
        if a == F or b == F or a == -b:
            return F
        if a == T or a == b:
            return b
        if b == T:
            return a
        a, b = min(a, b), max(a, b)
        return self._gate("and", (a, b), lambda o: [(-o, a), (-o, b), (o, -a, -b)])

    def or_(self, a: int, b: int) -> int:
        return -self.and_(-a, -b)

    def and_all(self, lits) -> int:
        out = self.TRUE
        for l in lits:
            out = self.and_(out, l)
        return out

    def or_all(self, lits) -> int:
        out = self.FALSE
        for l in lits:
            out = self.or_(out, l)
        return out

    def xor(self, a: int, b: int) -> int:
        T, F = self.TRUE, self.FALSE
        if a == F:
            return b
        if b == F:
            return a
        if a == T:
            return -b
        if b == T:
            return -a
        if a == b:
            return F
        if a == -b:
            return T
        # normalise polarity so x^y, -x^y, ... share one gate
        neg = (a < 0) != (b < 0)
        a, b = sorted((abs(a), abs(b)))
        o = self._gate("xor", (a, b), lambda o: [(-o, a, b), (-o, -a, -b), (o, -a, b), (o, a, -b)])
        return -o if neg else o

    def ite(self, c: int, a: int, b: int) -> int:
        T, F = self.TRUE, self.FALSE
        if c == T or a == b:
            return a
        if c == F:
            return b
        if a == T or a == c:
            return self.or_(c, b)
        if a == F or a == -c:
            return self.and_(-c, b)
        if b == F or b == -c:
            return self.and_(c, a)
        if b == T or b == c:
            return self.or_(-c, a)
        if c < 0:
            c, a, b = -c, b, a
        return self._gate("ite", (c, a, b), lambda o: [
            (-c, -a, o), (-c, a, -o), (c, -b, o), (c, b, -o), (-a, -b, o), (a, b, -o)])

    def implies(self, a: int, b: int) -> int:
        return self.or_(-a, b)

    def add_clause(self, lits):
        lits = [l for l in lits if l != self.FALSE]
        if self.TRUE in lits:
            return
        self.clauses.append(tuple(lits))

    # -- bit-vectors -------------------------------------------------------------------

    def const(self, value: int, width: int) -> list:
        value &= (1 << width) - 1
        return [self.TRUE if (value >> i) & 1 else self.FALSE for i in range(width)]

    def from_bool(self, b: int, width: int) -> list:
        return [b] + [self.FALSE] * (width - 1)

    def nonzero(self, a: list) -> int:
        return self.or_all(a)

    def bv_not(self, a: list) -> list:
        return [-x for x in a]

    def add(self, a: list, b: list, carry: int | None = None) -> list:
        c = self.FALSE if carry is None else carry
        out = []
        for x, y in zip(a, b):
            t = self.xor(x, y)
            out.append(self.xor(t, c))
            c = self.or_(self.and_(x, y), self.and_(c, t))
        return out

    def sub(self, a: list, b: list) -> list:
        return self.add(a, self.bv_not(b), self.TRUE)

    def neg(self, a: list) -> list:
        return self.add(self.bv_not(a), self.const(0, len(a)), self.TRUE)

    def eq(self, a: list, b: list) -> int:
        return self.and_all(-self.xor(x, y) for x, y in zip(a, b))

    def ult(self, a: list, b: list) -> int:
        lt = self.FALSE
        for x, y in zip(a, b):
            # a more significant bit overrides everything below it
            lt = self.ite(self.xor(x, y), y, lt)
        return lt

    def slt(self, a: list, b: list) -> int:
        return self.ult(a[:-1] + [-a[-1]], b[:-1] + [-b[-1]])

    def bv_ite(self, c: int, a: list, b: list) -> list:
        return [self.ite(c, x, y) for x, y in zip(a, b)]

    # -- evaluation --------------------------------------------------------------------

    def evaluate(self, assignment: dict) -> dict:
        """Extend ``assignment`` (var -> bool, free variables) over all gates."""
        val = dict(assignment)
        val[self.TRUE] = True

        def lv(l):
            return val[l] if l > 0 else not val[-l]

        for o, op, ins in self.gates:
            if op == "and":
                val[o] = lv(ins[0]) and lv(ins[1])
            elif op == "xor":
                val[o] = lv(ins[0]) != lv(ins[1])
            else:
                val[o] = lv(ins[1]) if lv(ins[0]) else lv(ins[2])
        return val


def lit_value(val: dict, lit: int) -> bool:
    return val[lit] if lit > 0 else not val[-lit]


def bv_value(val: dict, bits: list, signed: bool = True) -> int:
    v = sum(1 << i for i, b in enumerate(bits) if lit_value(val, b))
    if signed and bits and v >> (len(bits) - 1):
        v -= 1 << len(bits)
    return v


def wrap(value: int, width: int) -> int:
    """Two's-complement wrap-around of ``value`` to ``width`` bits."""
    value &= (1 << width) - 1
    return value - (1 << width) if value >> (width - 1) else value
