"""Clause databases and the DIMACS CNF / WCNF text formats.

Literals follow the DIMACS convention: a non-zero int whose absolute value is
the variable index and whose sign is the polarity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from faultloc.errors import FormulaError

Clause = tuple


def lit_var(lit: int) -> int:
    return lit if lit > 0 else -lit


def lit_sign(lit: int) -> bool:
    """True for a negated literal."""
    return lit < 0


def normalize_clause(lits: Iterable[int]) -> Clause | None:
    """Drop duplicate literals, keeping first-occurrence order.

    Returns ``None`` for a tautology.
    """
    seen = set()
    out = []
    for lit in lits:
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


@dataclass
class CnfFormula:
    num_vars: int = 0
    clauses: list = field(default_factory=list)

    def __post_init__(self):
        self.clauses = [tuple(c) for c in self.clauses]

    def add(self, lits: Iterable[int]) -> None:
        cl = tuple(lits)
        for lit in cl:
            if lit_var(lit) > self.num_vars:
                self.num_vars = lit_var(lit)
        self.clauses.append(cl)

    def extend(self, clauses: Iterable[Iterable[int]]) -> None:
        for cl in clauses:
            self.add(cl)

    def validate(self) -> None:
        for i, cl in enumerate(self.clauses):
            for lit in cl:
                if lit == 0 or not isinstance(lit, int):
                    raise FormulaError(f"clause {i}: invalid literal {lit!r}")
                if lit_var(lit) > self.num_vars:
                    raise FormulaError(
                        f"clause {i}: variable {lit_var(lit)} exceeds num_vars={self.num_vars}"
                    )

    def copy(self) -> "CnfFormula":
        return CnfFormula(self.num_vars, list(self.clauses))

    def __len__(self):
        return len(self.clauses)


@dataclass
class WcnfFormula:
    """Weighted partial MaxSAT formula: hard CNF plus weighted soft clauses."""

    hard: CnfFormula = field(default_factory=CnfFormula)
    soft: list = field(default_factory=list)

    def __post_init__(self):
        self.soft = [(tuple(cl), int(w)) for cl, w in self.soft]
        for cl, _ in self.soft:
            for lit in cl:
                if lit_var(lit) > self.hard.num_vars:
                    self.hard.num_vars = lit_var(lit)

    @property
    def num_vars(self) -> int:
        return self.hard.num_vars

    def add_soft(self, lits: Iterable[int], weight: int = 1) -> None:
        cl = tuple(lits)
        for lit in cl:
            if lit_var(lit) > self.hard.num_vars:
                self.hard.num_vars = lit_var(lit)
        self.soft.append((cl, int(weight)))

    def validate(self) -> None:
        self.hard.validate()
        for i, (cl, w) in enumerate(self.soft):
            if w < 1:
                raise FormulaError(f"soft clause {i}: weight {w} < 1")
            if not cl:
                raise FormulaError(f"soft clause {i}: empty")
            for lit in cl:
                if lit == 0 or lit_var(lit) > self.num_vars:
                    raise FormulaError(f"soft clause {i}: invalid literal {lit}")

    def soft_cost(self, model: Sequence[int]) -> int:
        """Total weight of soft clauses falsified by a DIMACS-style model."""
        return sum(self.soft[i][1] for i in self.falsified(model))

    def falsified(self, model: Sequence[int]) -> frozenset:
        """Indices of soft clauses falsified by ``model``."""
        true = model_true_set(model)
        return frozenset(
            i for i, (cl, _) in enumerate(self.soft) if not any(lit in true for lit in cl)
        )

    def copy(self) -> "WcnfFormula":
        return WcnfFormula(self.hard.copy(), list(self.soft))


def model_true_set(model: Sequence[int]) -> set:
    return {lit for lit in model if lit}


def satisfies(clauses: Iterable[Sequence[int]], model: Sequence[int]) -> bool:
    true = model_true_set(model)
    return all(any(lit in true for lit in cl) for cl in clauses)


class HealthVarMap:
    """Bijection between component identifiers and health-variable indices."""

    def __init__(self, pairs: Iterable[tuple] = ()):
        self._var = {}
        self._comp = {}
        for comp, var in pairs:
            self.register(comp, var)

    def register(self, comp, var: int) -> None:
        if comp in self._var or var in self._comp:
            raise FormulaError(f"health map already binds {comp!r} or variable {var}")
        self._var[comp] = var
        self._comp[var] = comp

    def var(self, comp) -> int:
        return self._var[comp]

    def comp(self, var: int):
        return self._comp[var]

    def has_var(self, var: int) -> bool:
        return var in self._comp

    @property
    def components(self) -> list:
        return list(self._var)

    def items(self):
        return self._var.items()

    def __len__(self):
        return len(self._var)

    def __contains__(self, comp):
        return comp in self._var

    def __eq__(self, other):
        return isinstance(other, HealthVarMap) and self._var == other._var

    def __repr__(self):
        return f"HealthVarMap({self._var!r})"


# -- DIMACS text ---------------------------------------------------------------

def _clause_line(cl: Sequence[int]) -> str:
    return " ".join(str(lit) for lit in (*cl, 0))


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines.extend(_clause_line(cl) for cl in f.clauses)
    return "\n".join(lines) + "\n"


def _int_tokens(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        yield line


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    clauses = []
    pending = []
    for line in _int_tokens(text):
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    if num_vars is None:
        num_vars = max((lit_var(l) for cl in clauses for l in cl), default=0)
    f = CnfFormula(num_vars, clauses)
    f.validate()
    return f


WCNF_VARS_TAG = "c vars "


def to_wcnf(w: WcnfFormula) -> str:
    """Render in the post-2022 WCNF format (``h`` prefix for hard clauses).

    A leading ``c vars N`` comment preserves the declared variable count,
    which the format itself does not carry.
    """
    lines = [f"{WCNF_VARS_TAG}{w.num_vars}"]
    lines.extend("h " + _clause_line(cl) for cl in w.hard.clauses)
    lines.extend(f"{wt} " + _clause_line(cl) for cl, wt in w.soft)
    return "\n".join(lines) + "\n"


def parse_wcnf(text: str) -> WcnfFormula:
    """Parse WCNF text; accepts both the ``h``-prefixed format and the legacy
    ``p wcnf nv nc top`` format."""
    num_vars = 0
    top = None
    hard = []
    soft = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith(WCNF_VARS_TAG):
            num_vars = max(num_vars, int(line[len(WCNF_VARS_TAG):]))
            continue
        if line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) < 4 or parts[1] != "wcnf":
                raise FormulaError(f"bad WCNF header: {line!r}")
            num_vars = max(num_vars, int(parts[2]))
            top = int(parts[4]) if len(parts) > 4 else None
            continue
        if parts[-1] != "0":
            raise FormulaError(f"clause line not terminated by 0: {line!r}")
        lits = tuple(int(t) for t in parts[1:-1])
        if parts[0] == "h":
            hard.append(lits)
            continue
        weight = int(parts[0])
        if top is not None and weight >= top:
            hard.append(lits)
        elif weight < 1:
            raise FormulaError(f"soft weight must be positive: {line!r}")
        else:
            soft.append((lits, weight))
    used = max((lit_var(l) for cl in hard for l in cl), default=0)
    used = max([used] + [lit_var(l) for cl, _ in soft for l in cl])
    w = WcnfFormula(CnfFormula(max(num_vars, used), hard), soft)
    w.validate()
    return w
