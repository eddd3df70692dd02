"""Weighted partial MaxSAT.

``RC2`` is a stratified core-guided solver (relax-and-bound with totalizers
over each core).  It is incremental: hard clauses may be added after a
``compute()`` and the next call continues from the current lower bound,
which is what the enumeration loops rely on.  ``lsu_solve`` is a plain
model-improving linear search kept as an alternative and as a cross-check.
"""

from __future__ import annotations

from typing import Optional

from faultloc.errors import NoDiagnosisError
from faultloc.formula.card import GeneralizedTotalizer, Totalizer
from faultloc.formula.cnf import WcnfFormula
from faultloc.formula.solver import Budget, Oracle


class RC2:
    def __init__(self, w: WcnfFormula, budget: Budget | None = None,
                 backend: str | None = None, stratify: bool = True, trim: int = 3):
        w.validate()
        self.formula = w
        self.budget = budget if budget is not None else Budget()
        self.oracle = Oracle(w.hard.clauses, w.num_vars, budget=self.budget, backend=backend)
        self.stratify = stratify
        self.trim = trim
        self.cost = 0
        self.cores = 0
        self.model: Optional[list] = None
        self.unsat = False
        # assumption literal -> remaining weight
        self.wt: dict = {}
        # sum assumption -> (totalizer, bound index)
        self.sums: dict = {}
        for cl, weight in w.soft:
            if len(cl) == 1:
                a = cl[0]
            else:
                a = self.oracle.new_var()
                self.oracle.add_clause(tuple(cl) + (-a,))
            self.wt[a] = self.wt.get(a, 0) + weight

    def add_clause(self, lits) -> None:
        self.oracle.add_clause(lits)

    def _weights_below(self, thr):
        lower = [x for x in self.wt.values() if 0 < x < thr]
        return max(lower) if lower else None

    def _shrink(self, core):
        for _ in range(self.trim):
            if len(core) <= 1 or self.oracle.solve(core):
                break
            smaller = self.oracle.core()
            if len(smaller) >= len(core):
                break
            core = smaller
        return core

    def _process_core(self, core) -> None:
        self.cores += 1
        minw = min(self.wt[a] for a in core)
        self.cost += minw
        for a in core:
            self.wt[a] -= minw
            if self.wt[a] == 0:
                del self.wt[a]
        for a in core:
            if a in self.sums:
                tot, b = self.sums[a]
                if a not in self.wt:
                    del self.sums[a]
                if b + 1 < len(tot.rhs):
                    nxt = -tot.rhs[b + 1]
                    self.sums.setdefault(nxt, (tot, b + 1))
                    self.wt[nxt] = self.wt.get(nxt, 0) + minw
        if len(core) == 1:
            self.oracle.add_clause((-core[0],))
            return
        tot = Totalizer([-a for a in core], self.oracle.new_var)
        for cl in tot.clauses:
            self.oracle.add_clause(cl)
        a = -tot.rhs[1]
        self.sums[a] = (tot, 1)
        self.wt[a] = self.wt.get(a, 0) + minw

    def compute(self) -> Optional[list]:
        """Return an optimal model, or None once the hard part is UNSAT."""
        if self.unsat:
            return None
        thr = max(self.wt.values(), default=0) if self.stratify else 1
        while True:
            assumps = [a for a, x in self.wt.items() if x >= thr]
            if self.oracle.solve(assumps):
                lower = self._weights_below(thr) if self.stratify else None
                if lower is not None:
                    thr = lower
                    continue
                self.model = self.oracle.model()
                return self.model
            core = self.oracle.core()
            if not core:
                self.unsat = True
                return None
            core = self._shrink(core)
            if not core:  # trimming showed the hard part alone is UNSAT
                self.unsat = True
                return None
            self._process_core(core)

    def soft_cost(self, model=None) -> int:
        return self.formula.soft_cost(model if model is not None else self.model)


def maxsat_solve(w: WcnfFormula, *, algorithm: str = "rc2", budget: Budget | None = None,
                 backend: str | None = None):
    """Return ``(model, cost)`` of an optimum; raise ``NoDiagnosisError`` if
    the hard clauses are unsatisfiable."""
    if algorithm == "lsu":
        return lsu_solve(w, budget=budget, backend=backend)
    if algorithm != "rc2":
        raise ValueError(f"unknown MaxSAT algorithm {algorithm!r}")
    s = RC2(w, budget=budget, backend=backend)
    model = s.compute()
    if model is None:
        raise NoDiagnosisError("hard clauses are unsatisfiable")
    model = model[: w.num_vars]
    cost = w.soft_cost(model)
    assert cost == s.cost, (cost, s.cost)
    return model, cost


def lsu_solve(w: WcnfFormula, *, budget: Budget | None = None, backend: str | None = None):
    """Linear SAT-UNSAT search bounding the falsified weight with a
    generalized totalizer."""
    w.validate()
    budget = budget if budget is not None else Budget()
    o = Oracle(w.hard.clauses, w.num_vars, budget=budget, backend=backend)
    blocks = []
    for cl, weight in w.soft:
        b = o.new_var()
        o.add_clause(tuple(cl) + (b,))
        blocks.append((b, weight))
    if not o.solve():
        raise NoDiagnosisError("hard clauses are unsatisfiable")
    best = o.model()
    ub = w.soft_cost(best[: w.num_vars])
    if ub == 0:
        return best[: w.num_vars], 0
    gt = GeneralizedTotalizer(blocks, ub, o.new_var)
    for cl in gt.clauses:
        o.add_clause(cl)
    while ub > 0:
        for cl in gt.at_most(ub - 1):
            o.add_clause(cl)
        if not o.solve():
            break
        best = o.model()
        ub = w.soft_cost(best[: w.num_vars])
    return best[: w.num_vars], ub


def enumerate_optimal_solutions(w: WcnfFormula, *, budget: Budget | None = None,
                                backend: str | None = None, limit: int | None = None,
                                stats: dict | None = None) -> list:
    """Every distinct set of falsified soft-clause indices that attains the
    optimum, in discovery order.

    After each solution the hard clause "one of these falsified softs is now
    satisfied" is added; enumeration stops once the optimum is exceeded.
    """
    s = RC2(w, budget=budget, backend=backend)
    out = []
    opt = None
    while True:
        model = s.compute()
        if model is None:
            if opt is None:
                raise NoDiagnosisError("hard clauses are unsatisfiable")
            break
        delta = w.falsified(model[: w.num_vars])
        cost = sum(w.soft[i][1] for i in delta)
        if opt is None:
            opt = cost
        elif cost > opt:
            break
        out.append(delta)
        if not delta or (limit is not None and len(out) >= limit):
            break
        s.add_clause(tuple(sorted({lit for i in delta for lit in w.soft[i][0]})))
    if stats is not None:
        stats["cores"] = stats.get("cores", 0) + s.cores
        stats["optimum"] = opt
    return out
