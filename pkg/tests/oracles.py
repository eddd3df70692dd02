"""Exhaustive reference procedures for small formulas."""

from itertools import combinations, product


def models(clauses, n):
    for bits in product((False, True), repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in clauses):
            yield bits


def is_sat(clauses, n, units=()):
    return next(models(list(clauses) + [(u,) for u in units], n), None) is not None


def maxsat_optimum(hard, soft, n):
    best = None
    for bits in models(hard, n):
        cost = sum(w for cl, w in soft if not any(bits[abs(l) - 1] == (l > 0) for l in cl))
        best = cost if best is None else min(best, cost)
    return best


def optimal_falsified_sets(hard, soft, n):
    """Distinct index sets of falsified softs over all optimal models."""
    opt = maxsat_optimum(hard, soft, n)
    out = set()
    for bits in models(hard, n):
        fal = frozenset(i for i, (cl, _) in enumerate(soft)
                        if not any(bits[abs(l) - 1] == (l > 0) for l in cl))
        if sum(soft[i][1] for i in fal) == opt:
            out.add(fal)
    return opt, out


def all_mcses(hard, units, n):
    """Minimal index sets whose removal from the unit softs restores SAT."""
    idx = range(len(units))
    found = []
    for k in range(len(units) + 1):
        for sub in combinations(idx, k):
            s = frozenset(sub)
            if any(f <= s for f in found):
                continue
            if is_sat(hard, n, [units[i] for i in idx if i not in s]):
                found.append(s)
    return set(found)


def all_muses(hard, units, n):
    idx = range(len(units))
    found = []
    for k in range(1, len(units) + 1):
        for sub in combinations(idx, k):
            s = frozenset(sub)
            if any(f <= s for f in found):
                continue
            if not is_sat(hard, n, [units[i] for i in s]):
                found.append(s)
    return set(found)


def minimal_hitting_sets(sets, universe):
    found = []
    for k in range(len(universe) + 1):
        for sub in combinations(sorted(universe), k):
            s = frozenset(sub)
            if any(f <= s for f in found):
                continue
            if all(s & t for t in sets):
                found.append(s)
    return set(found)
