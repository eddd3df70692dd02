import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faultloc.circuit import inject_faults, observations_from_json, parse_bench, read_bench
from faultloc.circuit import generate_observations
from faultloc.engines import (
    ENGINES,
    brute_force_diagnoses,
    localize,
    problem_from_circuit,
    rank_mcses,
    set_combine,
    validate_diagnosis,
)
from faultloc.engines.problem import problem_from_wcnf, problem_sidecar
from faultloc.errors import EnumerationBudgetExceeded, ExhaustedRankingError
from faultloc.formula.cnf import parse_wcnf, to_wcnf
from instances import brute_min_cardinality, instance_suite, random_instance

FIXTURES = Path(__file__).parent / "fixtures"
DATA = Path(__file__).parents[1] / "src" / "faultloc" / "data"


def load_witnesses():
    doc = json.loads((FIXTURES / "witnesses.json").read_text())
    out = []
    for inst in doc["instances"]:
        c = parse_bench(inst["bench"], inst["name"])
        obs = observations_from_json(json.dumps(inst["observations"]), c)
        out.append((inst, problem_from_circuit(c, obs)))
    return out


@pytest.fixture(scope="module")
def suite():
    return instance_suite(60)


def test_cfaults_matches_brute_force(suite):
    for seed, _, _, p in suite:
        bf = {d.components for d in brute_force_diagnoses(p)}
        assert localize(p, "cfaults").component_sets() == brute_min_cardinality(bf), seed


@pytest.mark.parametrize("engine", ["hsd", "hsd-cm"])
def test_hsd_matches_brute_force(suite, engine):
    for seed, _, _, p in suite:
        bf = {d.components for d in brute_force_diagnoses(p)}
        assert localize(p, engine).component_sets() == bf, seed


def test_cost_agreement(suite):
    for seed, _, _, p in suite:
        opt = localize(p, "cfaults").min_cost
        sn = localize(p, "sniper")
        assert sn.min_cost == opt, seed
        assert sn.selected.cost == opt, seed
        assert localize(p, "hsd").min_cost == opt, seed


def test_every_reported_diagnosis_is_valid(suite):
    for seed, _, _, p in suite[:20]:
        for engine in ("cfaults", "hsd", "hsd-cm", "sniper"):
            for d in localize(p, engine).diagnoses:
                assert validate_diagnosis(p, d), (seed, engine)


def test_injected_faults_form_a_diagnosis(suite):
    for seed, _, faults, p in suite:
        assert validate_diagnosis(p, {f.gate for f in faults}), seed
        # so the optimum never exceeds the injected count
        assert localize(p, "cfaults").min_cost <= len(faults)


def test_bugassist_selection_is_valid_when_found(suite):
    exhausted = 0
    for seed, _, _, p in suite:
        try:
            r = localize(p, "bugassist")
        except ExhaustedRankingError:
            exhausted += 1
            continue
        assert validate_diagnosis(p, r.selected), seed
        assert r.selected.cost >= localize(p, "cfaults").min_cost
    assert exhausted < len(suite)


def test_witness_fixture_agrees_with_brute_force():
    for inst, p in load_witnesses():
        bf = sorted(sorted(d.components) for d in brute_force_diagnoses(p))
        assert bf == inst["minimal"]
        assert localize(p, "cfaults").min_cost == inst["optimum"]


def test_sniper_redundancy_witness():
    found = False
    for inst, p in load_witnesses():
        if inst["phenomenon"] != "sniper-redundant":
            continue
        sn = [d.components for d in localize(p, "sniper").diagnoses]
        cf = [d.components for d in localize(p, "cfaults").diagnoses]
        if any(a < b for a in sn for b in sn) and not any(a < b for a in cf for b in cf):
            found = True
    assert found


def test_bugassist_non_minimal_witness():
    found = False
    for inst, p in load_witnesses():
        if inst["phenomenon"] != "bugassist-non-minimal":
            continue
        if localize(p, "bugassist").selected.cost > localize(p, "cfaults").min_cost:
            found = True
    assert found


def test_c17_end_to_end():
    golden = read_bench(DATA / "c17.bench")
    faulty, faults = inject_faults(golden, 1, seed=3)
    obs = generate_observations(golden, faulty, 10, seed=3)
    assert obs
    p = problem_from_circuit(faulty, obs)
    opt = localize(p, "cfaults")
    assert any(faults[0].gate in d.components for d in opt.diagnoses)
    for engine in ENGINES:
        r = localize(p, engine)
        assert validate_diagnosis(p, r.selected), engine


def test_rank_mcses_order():
    a, b, c = frozenset({"x"}), frozenset({"y", "z"}), frozenset({"w"})
    ranked = rank_mcses([[a, b], [b, c], [b]])
    assert [m for m, _ in ranked] == [b, a, c]
    assert [v for _, v in ranked] == [3, 1, 1]


def test_set_combine_unions_and_budget():
    per = [[frozenset({1}), frozenset({2})], [frozenset({1}), frozenset({3})]]
    got = set(set_combine(per))
    assert got == {frozenset({1}), frozenset({1, 3}), frozenset({1, 2}), frozenset({2, 3})}
    with pytest.raises(EnumerationBudgetExceeded) as ei:
        set_combine(per, cap=2)
    assert ei.value.stats["peak_enumeration"] == 3


def test_sniper_enum_budget():
    _, f, _, obs = random_instance(0)
    p = problem_from_circuit(f, obs)
    with pytest.raises(EnumerationBudgetExceeded):
        localize(p, "sniper", enum_budget=1)


def test_unknown_engine():
    _, f, _, obs = random_instance(0)
    with pytest.raises(ValueError):
        localize(problem_from_circuit(f, obs), "nope")


def test_report_json_shape():
    _, f, _, obs = random_instance(1)
    p = problem_from_circuit(f, obs)
    for engine in ENGINES:
        try:
            r = localize(p, engine)
        except ExhaustedRankingError:
            continue
        doc = json.loads(r.dumps(p, timing=True))
        assert doc["engine"] == engine
        assert {"selected", "diagnoses", "stats"} <= doc.keys()
        assert doc["stats"]["num_diagnoses"] == len(doc["diagnoses"])
        assert "oracle_calls" in doc["stats"]


def test_sidecar_round_trip():
    _, f, _, obs = random_instance(5)
    p = problem_from_circuit(f, obs)
    text = to_wcnf(p.unified)
    q = problem_from_wcnf(parse_wcnf(text), json.loads(json.dumps(problem_sidecar(p))))
    assert q.num_observations == p.num_observations
    assert localize(q, "cfaults").component_sets() == localize(p, "cfaults").component_sets()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_soft_count_independent_of_observations(seed):
    golden, faulty, _, obs = random_instance(seed)
    if not obs:
        return
    full = problem_from_circuit(faulty, obs)
    one = problem_from_circuit(faulty, obs[:1])
    assert len(full.unified.soft) == len(one.unified.soft) == len(faulty.gates)


def test_cfaults_enumeration_runs_to_exhaustion():
    # blocking earlier optima can make the hard part alone unsatisfiable
    # while a core is being trimmed
    for seed in range(400):
        _, f, _, obs = random_instance(seed)
        if obs:
            r = localize(problem_from_circuit(f, obs), "cfaults")
            assert len({d.cost for d in r.diagnoses}) == 1, seed
