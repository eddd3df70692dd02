import os
import subprocess
import sys
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faultloc.errors import FormulaError, NoDiagnosisError, PreconditionError, TimeoutExceeded
from faultloc.formula.card import GeneralizedTotalizer, Totalizer
from faultloc.formula.cnf import (
    CnfFormula,
    HealthVarMap,
    WcnfFormula,
    normalize_clause,
    parse_dimacs,
    parse_wcnf,
    satisfies,
    to_dimacs,
    to_wcnf,
)
from faultloc.formula.maxsat import RC2, enumerate_optimal_solutions, maxsat_solve
from faultloc.formula.solver import Budget, ExternalSolver, Oracle, sat_solve, solver_class

import oracles
from strategies import cnfs, wcnfs


# -- CNF containers and text formats ----------------------------------------------

def test_normalize_clause_drops_duplicates_and_tautologies():
    assert normalize_clause([1, -2, 1]) == (1, -2)
    assert normalize_clause([3, -3]) is None


def test_validate_rejects_bad_literals():
    with pytest.raises(FormulaError):
        CnfFormula(2, [(1, 3)]).validate()
    with pytest.raises(FormulaError):
        WcnfFormula(CnfFormula(2, []), [((1,), 0)]).validate()


def test_health_map_is_a_bijection():
    h = HealthVarMap([("a", 1), ("b", 2)])
    assert h.var("b") == 2 and h.comp(1) == "a" and h.components == ["a", "b"]
    with pytest.raises(FormulaError):
        h.register("c", 2)


@given(cnfs())
def test_dimacs_round_trip(f):
    n, clauses = f
    cnf = CnfFormula(n, clauses)
    back = parse_dimacs(to_dimacs(cnf))
    assert back.num_vars == n and back.clauses == cnf.clauses


@given(wcnfs())
def test_wcnf_round_trip(f):
    n, hard, soft = f
    w = WcnfFormula(CnfFormula(n, hard), soft)
    back = parse_wcnf(to_wcnf(w))
    assert back.num_vars == n
    assert back.hard.clauses == w.hard.clauses and back.soft == w.soft


def test_legacy_wcnf_header():
    w = parse_wcnf("p wcnf 3 3 10\n10 1 2 0\n3 -1 0\n1 -3 0\n")
    assert w.hard.clauses == [(1, 2)] and w.soft == [((-1,), 3), ((-3,), 1)]


# -- SAT oracle ------------------------------------------------------------------

def _check_outcome(n, clauses, assumptions, out):
    expect = oracles.is_sat(clauses, n, assumptions)
    assert out.sat == expect
    if out.sat:
        assert satisfies(clauses, out.model)
        assert all(a in out.model for a in assumptions)
    else:
        assert set(out.core) <= set(assumptions)
        assert not oracles.is_sat(clauses, n, out.core)


@settings(max_examples=150, deadline=None)
@given(cnfs(), st.data())
def test_sat_matches_enumeration(f, data):
    n, clauses = f
    assumptions = data.draw(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v))),
                                     max_size=4, unique_by=abs))
    for backend in ("python", None):
        _check_outcome(n, clauses, assumptions, sat_solve(CnfFormula(n, clauses), assumptions,
                                                          backend=backend))


def test_incremental_solving_keeps_learnt_state(backend):
    o = Oracle([(1, 2), (-1, 3), (-2, 3)], 3, backend=backend)
    assert o.solve([-3]) is False
    assert set(o.core()) == {-3}
    assert o.solve([1]) and 3 in o.model()
    o.add_clause((-3,))
    assert o.solve() is False


def test_pigeonhole_is_unsat(backend):
    # 6 pigeons, 5 holes: hard enough to exercise learning and restarts
    p, h = 6, 5
    var = lambda i, j: i * h + j + 1  # noqa: E731
    clauses = [tuple(var(i, j) for j in range(h)) for i in range(p)]
    clauses += [(-var(i, j), -var(k, j)) for j in range(h) for i in range(p) for k in range(i)]
    assert not sat_solve(CnfFormula(p * h, clauses), backend=backend).sat


def test_deadline_interrupts_search(backend):
    p, h = 10, 9
    var = lambda i, j: i * h + j + 1  # noqa: E731
    clauses = [tuple(var(i, j) for j in range(h)) for i in range(p)]
    clauses += [(-var(i, j), -var(k, j)) for j in range(h) for i in range(p) for k in range(i)]
    o = Oracle(clauses, p * h, budget=Budget(deadline=time.monotonic() + 0.05), backend=backend)
    t0 = time.monotonic()
    with pytest.raises(TimeoutExceeded):
        o.solve()
    assert time.monotonic() - t0 < 5


def test_unknown_backend():
    with pytest.raises(ValueError):
        solver_class("minisat")


def test_external_solver_subprocess(tmp_path):
    ext = ExternalSolver([sys.executable, "-m", "faultloc.formula.solver"])
    f = CnfFormula(3, [(1, 2), (-1, 3), (-2, -3)])
    out = ext.solve(f, [1])
    assert out.sat and satisfies(f.clauses, out.model) and 1 in out.model
    assert not ext.solve(f, [1, -3]).sat


def test_solver_module_exit_codes(tmp_path):
    path = tmp_path / "u.cnf"
    path.write_text("p cnf 1 2\n1 0\n-1 0\n")
    r = subprocess.run([sys.executable, "-m", "faultloc.formula.solver", str(path)],
                       capture_output=True, text=True, env=dict(os.environ))
    assert r.returncode == 20 and "UNSATISFIABLE" in r.stdout


# -- cardinality encodings ---------------------------------------------------------
# the SAT oracle itself is checked against enumeration above

@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 6))
def test_totalizer_bounds(n, k):
    nxt = [n]

    def new_var():
        nxt[0] += 1
        return nxt[0]

    t = Totalizer(list(range(1, n + 1)), new_var)
    clauses = list(t.clauses)
    if k < n:
        clauses.append((-t.rhs[k],))
    # exactly the assignments with at most k true inputs survive
    for count in range(n + 1):
        units = list(range(1, count + 1)) + [-v for v in range(count + 1, n + 1)]
        assert sat_solve(CnfFormula(nxt[0], clauses), units).sat == (count <= k)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=5), st.integers(0, 12))
def test_generalized_totalizer_bounds(weights, bound):
    n = len(weights)
    nxt = [n]

    def new_var():
        nxt[0] += 1
        return nxt[0]

    gt = GeneralizedTotalizer(list(zip(range(1, n + 1), weights)), bound + 1, new_var)
    clauses = gt.clauses + gt.at_most(bound)
    for mask in range(1 << n):
        units = [v if (mask >> (v - 1)) & 1 else -v for v in range(1, n + 1)]
        total = sum(w for v, w in zip(range(1, n + 1), weights) if (mask >> (v - 1)) & 1)
        assert sat_solve(CnfFormula(nxt[0], clauses), units).sat == (total <= bound)


# -- MaxSAT ----------------------------------------------------------------------

def test_small_maxsat_example():
    # hard (x1 v x2), (-x2 v x3); soft (-x1), (-x3): one soft must go
    w = WcnfFormula(CnfFormula(3, [(1, 2), (-2, 3)]), [((-1,), 1), ((-3,), 1)])
    for alg in ("rc2", "lsu"):
        model, cost = maxsat_solve(w, algorithm=alg)
        assert cost == 1 and satisfies(w.hard.clauses, model)


@settings(max_examples=120, deadline=None)
@given(wcnfs())
def test_maxsat_optimum_matches_enumeration(f):
    n, hard, soft = f
    w = WcnfFormula(CnfFormula(n, hard), soft)
    opt = oracles.maxsat_optimum(hard, soft, n)
    for alg in ("rc2", "lsu"):
        if opt is None:
            with pytest.raises(NoDiagnosisError):
                maxsat_solve(w, algorithm=alg)
            continue
        model, cost = maxsat_solve(w, algorithm=alg)
        assert cost == opt
        assert satisfies(hard, model) and w.soft_cost(model) == opt


@settings(max_examples=60, deadline=None)
@given(wcnfs(max_vars=5, max_soft=6))
def test_rc2_without_stratification(f):
    n, hard, soft = f
    opt = oracles.maxsat_optimum(hard, soft, n)
    s = RC2(WcnfFormula(CnfFormula(n, hard), soft), stratify=False)
    model = s.compute()
    assert (model is None) == (opt is None)
    if model is not None:
        assert s.cost == opt


@settings(max_examples=80, deadline=None)
@given(wcnfs(max_vars=5, max_soft=6))
def test_enumerate_optimal_solutions_is_complete(f):
    n, hard, soft = f
    # blocking treats every soft as its own component, so make them units
    soft = [((cl[0],), wt) for cl, wt in soft]
    opt, expected = oracles.optimal_falsified_sets(hard, soft, n)
    w = WcnfFormula(CnfFormula(n, hard), soft)
    if opt is None:
        with pytest.raises(NoDiagnosisError):
            enumerate_optimal_solutions(w)
        return
    stats = {}
    got = enumerate_optimal_solutions(w, stats=stats)
    assert stats["optimum"] == opt
    assert len(got) == len(set(got))
    if opt == 0:
        assert got == [frozenset()]
        return
    # each solution is optimal; the set of distinct literal sets matches
    lits = lambda d: frozenset(soft[i][0][0] for i in d)  # noqa: E731
    assert {lits(d) for d in got} == {lits(d) for d in expected}


def test_maxsat_budget_timeout():
    w = WcnfFormula(CnfFormula(2, [(1, 2)]), [((-1,), 1), ((-2,), 1)])
    with pytest.raises(TimeoutExceeded):
        maxsat_solve(w, budget=Budget(deadline=time.monotonic() - 1))


def test_maxsat_unknown_algorithm():
    w = WcnfFormula(CnfFormula(1, []), [((1,), 1)])
    with pytest.raises(ValueError):
        maxsat_solve(w, algorithm="wbo")


def test_precondition_error_on_consistent_core():
    from faultloc.formula.subsets import extract_unsat_core
    with pytest.raises(PreconditionError):
        extract_unsat_core(CnfFormula(2, [(1, 2)]), [(1,)])
