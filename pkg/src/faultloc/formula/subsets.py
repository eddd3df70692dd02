"""Unsatisfiable cores, MUS extraction, MCS enumeration and minimum hitting
sets over unit soft clauses."""

from __future__ import annotations

from typing import Hashable, Iterable, Optional, Sequence

from faultloc.errors import NoDiagnosisError, PreconditionError
from faultloc.formula.cnf import CnfFormula, WcnfFormula
from faultloc.formula.maxsat import RC2
from faultloc.formula.solver import Budget, Oracle


def _unit_lit(c) -> int:
    if isinstance(c, int):
        return c
    if len(c) != 1:
        raise ValueError(f"expected a unit clause, got {c!r}")
    return c[0]


def extract_unsat_core(f: CnfFormula, candidates: Sequence, *, budget: Budget | None = None,
                       backend: str | None = None) -> list:
    """Subset of the unit ``candidates`` that is inconsistent with ``f``,
    read off the solver's assumption core."""
    f.validate()
    lits = [_unit_lit(c) for c in candidates]
    o = Oracle(f.clauses, f.num_vars, budget=budget, backend=backend)
    if o.solve(lits):
        raise PreconditionError("formula plus candidates is satisfiable; there is no core")
    core = set(o.core())
    return [c for c, lit in zip(candidates, lits) if lit in core]


def minimize_core(f: CnfFormula, core: Sequence, *, budget: Budget | None = None,
                  backend: str | None = None) -> list:
    """Deletion-based MUS extraction in the given order.

    Each successful deletion also drops whatever the solver's core says is
    not needed (clause-set refinement).
    """
    f.validate()
    lits = [_unit_lit(c) for c in core]
    o = Oracle(f.clauses, f.num_vars, budget=budget, backend=backend)
    if o.solve(lits):
        raise PreconditionError("formula plus core is satisfiable; nothing to minimise")
    first = set(o.core())
    mus = set(shrink_assumptions(o, [l for l in dict.fromkeys(lits) if l in first]))
    out, seen = [], set()
    for c, lit in zip(core, lits):
        if lit in mus and lit not in seen:
            seen.add(lit)
            out.append(c)
    return out


def shrink_assumptions(o: Oracle, lits: Sequence[int]) -> list:
    """Deletion-based reduction of an inconsistent assumption list on an
    existing oracle.  Returns a subset-minimal inconsistent sublist."""
    needed = []
    todo = list(lits)
    while todo:
        lit = todo.pop(0)
        if o.solve(needed + todo):
            needed.append(lit)
        else:
            refined = set(o.core())
            todo = [l for l in todo if l in refined]
    return needed


def enumerate_mcses(hard: CnfFormula, soft: Sequence, *, budget: Budget | None = None,
                    backend: str | None = None, limit: int | None = None,
                    stats: dict | None = None) -> list:
    """All minimal correction subsets of the unit ``soft`` clauses, by
    increasing size.

    Each MCS is a frozenset of the soft items (as passed in).  An empty list
    means hard and soft are jointly consistent.
    """
    lits = [_unit_lit(c) for c in soft]
    w = WcnfFormula(hard.copy(), [((l,), 1) for l in lits])
    s = RC2(w, budget=budget, backend=backend)
    out = []
    while True:
        model = s.compute()
        if model is None:
            if not out:
                raise NoDiagnosisError("hard clauses are unsatisfiable")
            break
        delta = w.falsified(model[: w.num_vars])
        if not delta:
            if out:
                raise AssertionError("empty correction set after a non-empty one")
            break
        out.append(frozenset(soft[i] for i in delta))
        if limit is not None and len(out) >= limit:
            break
        s.add_clause(tuple(sorted({lits[i] for i in delta})))
    if stats is not None:
        stats["cores"] = stats.get("cores", 0) + s.cores
    return out


class HittingSetSolver:
    """Incremental minimum-cost hitting sets over a fixed universe.

    Sets to hit become positive clauses over pick variables; each blocked set
    becomes a clause forbidding all its supersets.
    """

    def __init__(self, universe: Iterable[Hashable], weights: dict | None = None, *,
                 budget: Budget | None = None, backend: str | None = None):
        self.universe = list(dict.fromkeys(universe))
        self.var = {e: i + 1 for i, e in enumerate(self.universe)}
        weights = weights or {}
        soft = [((-self.var[e],), int(weights.get(e, 1))) for e in self.universe]
        self._w = WcnfFormula(CnfFormula(len(self.universe), []), soft)
        self._rc2 = RC2(self._w, budget=budget, backend=backend)
        self.exhausted = False

    def _pick(self, e) -> int:
        try:
            return self.var[e]
        except KeyError:
            raise ValueError(f"element {e!r} is not in the hitting-set universe") from None

    def add_set(self, s: Iterable[Hashable]) -> None:
        self._rc2.add_clause(tuple(self._pick(e) for e in s))

    def block(self, s: Iterable[Hashable]) -> None:
        self._rc2.add_clause(tuple(-self._pick(e) for e in s))

    def feasible(self) -> bool:
        """Plain SAT check: does any admissible hitting set remain?"""
        if not self.exhausted and not self._rc2.oracle.solve():
            self.exhausted = True
        return not self.exhausted

    def solve(self) -> Optional[frozenset]:
        if self.exhausted:
            return None
        model = self._rc2.compute()
        if model is None:
            self.exhausted = True
            return None
        true = set(model)
        return frozenset(e for e in self.universe if self.var[e] in true)


def minimum_hitting_set(sets: Iterable[Iterable[Hashable]], blocked: Iterable[Iterable[Hashable]] = (),
                        weights: dict | None = None, **kw) -> Optional[frozenset]:
    """Minimum-cost set hitting every member of ``sets`` and containing no
    member of ``blocked``; None when no such set exists."""
    sets = [list(s) for s in sets]
    blocked = [list(b) for b in blocked]
    universe = [e for s in sets + blocked for e in s]
    hs = HittingSetSolver(universe, weights, **kw)
    for s in sets:
        hs.add_set(s)
    for b in blocked:
        hs.block(b)
    return hs.solve()
