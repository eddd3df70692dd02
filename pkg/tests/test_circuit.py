import itertools
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faultloc.circuit import (
    CircuitObservation,
    encode_instrumented,
    generate_observations,
    inject_faults,
    observations_from_json,
    observations_to_json,
    parse_bench,
    random_circuit,
    render_bench,
    simulate,
)
from faultloc.circuit.sim import all_signals, compatible_kinds
from faultloc.errors import ParseError, PreconditionError
from faultloc.formula.cnf import satisfies
from faultloc.formula.maxsat import maxsat_solve
from faultloc.formula.solver import sat_solve

C17 = resources.files("faultloc.data").joinpath("c17.bench").read_text()
NOT1 = "INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n"


def c17():
    return parse_bench(C17, name="c17")


def nand(*xs):
    return int(not all(xs))


def c17_reference(i1, i2, i3, i6, i7):
    g10, g11 = nand(i1, i3), nand(i3, i6)
    g16, g19 = nand(i2, g11), nand(g11, i7)
    return nand(g10, g16), nand(g16, g19)


# -- parsing ----------------------------------------------------------------------

def test_c17_shape():
    c = c17()
    assert len(c.gates) == 6 and len(c.inputs) == 5 and len(c.outputs) == 2
    assert {g.kind for g in c.gates} == {"NAND"}


def test_single_not_gate():
    c = parse_bench(NOT1)
    assert [g.id for g in c.gates] == ["y"] and c.gate("y").kind == "NOT"


@pytest.mark.parametrize("text, kind", [
    ("INPUT(a)\nOUTPUT(y)\ny = AND(a, b)\n", "undefined"),
    ("INPUT(a)\nOUTPUT(y)\ny = FOO(a, a)\n", "unknown-gate"),
    ("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\ny = BUFF(a)\n", "duplicate"),
    ("INPUT(a)\nOUTPUT(y)\nx = AND(a, y)\ny = NOT(x)\n", "cyclic"),
    ("INPUT(a)\nOUTPUT(y)\ny = NOT(a, a)\n", "arity"),
    ("INPUT(a)\nOUTPUT(y)\ny = AND(a)\n", "arity"),
    ("INPUT(a\n", "syntax"),
])
def test_parse_errors(text, kind):
    with pytest.raises(ParseError) as err:
        parse_bench(text, source="t.bench")
    assert err.value.kind == kind
    assert "t.bench" in str(err.value)


def test_out_of_order_definitions_are_sorted():
    c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = OR(y, b)\ny = AND(a, b)\n")
    assert c.gate_ids == ["y", "z"]


@settings(max_examples=50)
@given(st.integers(1, 5), st.integers(1, 20), st.integers(0, 10**6))
def test_render_parse_round_trip(n_in, n_gates, seed):
    c = random_circuit(n_in, n_gates, seed)
    back = parse_bench(render_bench(c), name=c.name)
    assert back == c


# -- simulation -------------------------------------------------------------------

def test_simulate_small_gates():
    assert simulate(parse_bench(NOT1), (0,)) == (1,)
    xor = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n")
    assert simulate(xor, (1, 1)) == (0,)


def test_c17_matches_hand_evaluation():
    c = c17()
    for bits in itertools.product((0, 1), repeat=5):
        assert simulate(c, bits) == c17_reference(*bits)
    # hand evaluation of the all-zero vector: inner gates are all 1, outputs 0
    assert simulate(c, (0, 0, 0, 0, 0)) == (0, 0)


def test_simulate_arity_mismatch():
    with pytest.raises(PreconditionError):
        simulate(c17(), (0, 1))


# -- fault injection and observations -----------------------------------------------

def test_not_to_buff_differs_everywhere():
    c = parse_bench(NOT1)
    f, faults = inject_faults(c, 1, 0)
    assert faults[0].new_kind == "BUFF"
    assert all(simulate(c, (b,)) != simulate(f, (b,)) for b in (0, 1))


def test_injection_is_deterministic_and_checked():
    c = c17()
    assert inject_faults(c, 1, 42) == inject_faults(c, 1, 42)
    with pytest.raises(PreconditionError):
        inject_faults(c, 7, 0)
    with pytest.raises(PreconditionError):
        inject_faults(c, 0, 0)


@settings(max_examples=50)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_injected_faults_keep_arity(seed, n):
    c = c17()
    f, faults = inject_faults(c, n, seed)
    assert len({x.gate for x in faults}) == n
    for x in faults:
        assert x.new_kind != x.old_kind and x.new_kind in compatible_kinds(x.old_kind)
        assert f.gate(x.gate).kind == x.new_kind


def test_observations_for_not_vs_buff():
    c = parse_bench(NOT1)
    f = c.replace_kinds({"y": "BUFF"})
    obs = generate_observations(c, f, 2, 0)
    assert sorted(o.input_bits for o in obs) == [(0,), (1,)]
    assert all(o.output_bits == simulate(c, o.input_bits) for o in obs)


def test_equivalent_circuits_give_no_observations():
    assert generate_observations(c17(), c17(), 5, 0) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_c17_observations_all_fail(seed):
    c = c17()
    f, _ = inject_faults(c, 1, seed)
    obs = generate_observations(c, f, 10, seed)
    assert len({o.input_bits for o in obs}) == len(obs)
    for o in obs:
        assert simulate(c, o.input_bits) == o.output_bits != simulate(f, o.input_bits)


def test_observation_json_round_trip():
    c = c17()
    f, _ = inject_faults(c, 1, 3)
    obs = generate_observations(c, f, 4, 3)
    text = observations_to_json(f, obs)
    assert '"in": "' in text
    assert observations_from_json(text, f) == obs
    # list form is accepted as well
    assert observations_from_json('{"observations":[{"in":[0,1,0,1,1],"out":[1,0]}]}', c) == \
        [CircuitObservation((0, 1, 0, 1, 1), (1, 0))]
    with pytest.raises(PreconditionError):
        observations_from_json('{"observations":[{"in":"01","out":"1"}]}', c)


# -- instrumented encoding -----------------------------------------------------------

def test_one_gate_encoding_has_one_soft_clause():
    c = parse_bench(NOT1)
    one = encode_instrumented(c, [((0,), (1,))])
    three = encode_instrumented(c, [((0,), (1,)), ((1,), (0,)), ((0,), (1,))])
    assert len(one.wcnf.soft) == len(three.wcnf.soft) == 1
    assert len(three.wcnf.hard.clauses) == 3 * len(one.wcnf.hard.clauses)


def test_empty_observations_rejected():
    with pytest.raises(PreconditionError):
        encode_instrumented(c17(), [])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 15), st.integers(0, 10**6), st.data())
def test_healthy_encoding_agrees_with_simulation(n_in, n_gates, seed, data):
    c = random_circuit(n_in, n_gates, seed)
    bits = tuple(data.draw(st.lists(st.integers(0, 1), min_size=n_in, max_size=n_in)))
    out = simulate(c, bits)
    enc = encode_instrumented(c, [(bits, out)])
    healthy = [enc.health.var(g) for g in c.gate_ids]
    res = sat_solve(enc.wcnf.hard, healthy)
    assert res.sat
    signals = all_signals(c, bits)
    for s in c.signals():
        v = enc.signal_var(0, s)
        assert (v in res.model) == bool(signals[s])
    # a wrong output is inconsistent with an all-healthy circuit
    wrong = (1 - out[0],) + out[1:]
    bad = encode_instrumented(c, [(bits, wrong)])
    assert not sat_solve(bad.wcnf.hard, healthy).sat


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(1, 12), st.integers(0, 10**6))
def test_consistent_observations_cost_zero(n_in, n_gates, seed):
    c = random_circuit(n_in, n_gates, seed)
    obs = [(b, simulate(c, b)) for b in itertools.islice(itertools.product((0, 1), repeat=n_in), 4)]
    enc = encode_instrumented(c, obs)
    model, cost = maxsat_solve(enc.wcnf)
    assert cost == 0 and satisfies(enc.wcnf.hard.clauses, model)
