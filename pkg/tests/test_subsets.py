import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faultloc.errors import NoDiagnosisError
from faultloc.formula.cnf import CnfFormula
from faultloc.formula.subsets import (
    HittingSetSolver,
    enumerate_mcses,
    extract_unsat_core,
    minimize_core,
    minimum_hitting_set,
)

import oracles
from strategies import cnfs

# hard (x1 v x2), (x2 v -x3), (-x2 v x3); soft (-x1), (-x2), (-x3)
HARD = CnfFormula(3, [(1, 2), (2, -3), (-2, 3)])
SOFT = [(-1,), (-2,), (-3,)]


def test_mcs_example():
    assert set(enumerate_mcses(HARD, SOFT)) == {frozenset({(-1,)}), frozenset({(-2,), (-3,)})}


def test_mus_example():
    mus = minimize_core(HARD, SOFT)
    assert frozenset(mus) in {frozenset({(-1,), (-2,)}), frozenset({(-1,), (-3,)})}


def test_core_then_mus(backend):
    core = extract_unsat_core(HARD, SOFT, backend=backend)
    assert not oracles.is_sat(HARD.clauses, 3, [c[0] for c in core])
    mus = minimize_core(HARD, core, backend=backend)
    assert set(mus) <= set(core)


def test_mcses_of_consistent_formula_is_empty():
    assert enumerate_mcses(CnfFormula(2, [(1, 2)]), [(1,)]) == []


def test_mcses_of_inconsistent_hard_part():
    with pytest.raises(NoDiagnosisError):
        enumerate_mcses(CnfFormula(1, [(1,), (-1,)]), [(1,)])


@st.composite
def soft_instances(draw):
    n, hard = draw(cnfs(max_vars=6, max_clauses=10, max_len=3))
    lits = draw(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v))),
                         min_size=1, max_size=min(2 * n, 10), unique=True))
    return n, hard, lits


@settings(max_examples=100, deadline=None)
@given(soft_instances())
def test_mcses_match_enumeration(inst):
    n, hard, lits = inst
    if not oracles.is_sat(hard, n):
        return
    expect = {frozenset(lits[i] for i in s) for s in oracles.all_mcses(hard, lits, n)}
    got = {frozenset(c[0] for c in m) for m in enumerate_mcses(CnfFormula(n, hard),
                                                              [(l,) for l in lits])}
    if expect == {frozenset()}:
        assert got == set()
    else:
        assert got == expect


@settings(max_examples=100, deadline=None)
@given(soft_instances(), st.randoms(use_true_random=False))
def test_minimize_core_returns_a_mus(inst, rnd):
    n, hard, lits = inst
    if oracles.is_sat(hard, n, lits) or not oracles.is_sat(hard, n):
        return
    order = list(lits)
    rnd.shuffle(order)
    mus = [c[0] for c in minimize_core(CnfFormula(n, hard), [(l,) for l in order])]
    assert not oracles.is_sat(hard, n, mus)
    for i in range(len(mus)):
        assert oracles.is_sat(hard, n, mus[:i] + mus[i + 1:])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 6), min_size=1, max_size=4), max_size=6),
       st.dictionaries(st.integers(0, 6), st.integers(1, 5)))
def test_minimum_hitting_set_matches_enumeration(sets, weights):
    universe = set().union(*sets) if sets else set()
    best = min((sum(weights.get(e, 1) for e in h)
                for h in oracles.minimal_hitting_sets(sets, universe)), default=0)
    hs = minimum_hitting_set(sets, weights=weights)
    assert hs is not None and all(hs & s for s in sets)
    assert sum(weights.get(e, 1) for e in hs) == best


def test_hitting_set_solver_blocks_supersets():
    hs = HittingSetSolver("abc")
    hs.add_set("ab")
    first = hs.solve()
    hs.block(first)
    second = hs.solve()
    assert second != first and not first <= second
    hs.block(second)
    assert hs.solve() is None and not hs.feasible()
