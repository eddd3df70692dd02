"""Cardinality and pseudo-Boolean encodings used by the MaxSAT solvers.

Only upward implications are emitted (inputs force outputs), which is all
that "at most" bounds need: asserting ``-rhs[k]`` forbids k+1 or more true
inputs.
"""

from __future__ import annotations

from typing import Callable, Sequence


class Totalizer:
    """Unary counter over ``lits``; ``rhs[k]`` is implied by "at least k+1 of
    the inputs are true"."""

    def __init__(self, lits: Sequence[int], new_var: Callable[[], int]):
        self.lits = list(lits)
        self.clauses: list = []
        self._new_var = new_var
        self.rhs = self._build(self.lits)

    def _build(self, lits):
        if len(lits) == 1:
            return [lits[0]]
        mid = len(lits) // 2
        left = self._build(lits[:mid])
        right = self._build(lits[mid:])
        out = [self._new_var() for _ in range(len(left) + len(right))]
        for i in range(len(left) + 1):
            for j in range(len(right) + 1):
                if i + j == 0:
                    continue
                cl = []
                if i:
                    cl.append(-left[i - 1])
                if j:
                    cl.append(-right[j - 1])
                cl.append(out[i + j - 1])
                self.clauses.append(tuple(cl))
        return out


class GeneralizedTotalizer:
    """Weighted sum counter: ``outputs[v]`` is implied whenever the total
    weight of true inputs reaches ``v``.  Sums at or above ``cap`` collapse
    into the single output ``cap``."""

    def __init__(self, weighted: Sequence[tuple], cap: int, new_var: Callable[[], int]):
        self.cap = cap
        self.clauses: list = []
        self._new_var = new_var
        self.outputs = self._build(list(weighted)) if weighted else {}

    def _build(self, items):
        if len(items) == 1:
            lit, w = items[0]
            return {min(w, self.cap): lit}
        mid = len(items) // 2
        left = self._build(items[:mid])
        right = self._build(items[mid:])
        sums = set(left) | set(right)
        sums |= {min(a + b, self.cap) for a in left for b in right}
        out = {s: self._new_var() for s in sorted(sums)}
        for a, la in left.items():
            self.clauses.append((-la, out[a]))
        for b, lb in right.items():
            self.clauses.append((-lb, out[b]))
        for a, la in left.items():
            for b, lb in right.items():
                self.clauses.append((-la, -lb, out[min(a + b, self.cap)]))
        return out

    def at_most(self, bound: int) -> list:
        """Unit clauses forbidding any weighted sum above ``bound``."""
        return [(-lit,) for v, lit in self.outputs.items() if v > bound]
