import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faultloc.circuit import observations_from_json, read_bench, simulate
from faultloc.engines import localize, validate_diagnosis
from faultloc.errors import PreconditionError
from faultloc.harness import (
    CSV_COLUMNS,
    STATUSES,
    CampaignConfig,
    InstanceResult,
    bundled_circuits,
    generate_campaign,
    list_instances,
    load_instance,
    parse_results,
    render_cactus,
    render_results,
    render_scatter,
    resolve_circuit,
    run_campaign,
    run_instance,
    run_isolated,
)


@pytest.fixture(scope="module")
def mini(tmp_path_factory):
    root = tmp_path_factory.mktemp("mini")
    cfg = CampaignConfig(["c17"], [1, 2], [5, 10], [0, 1, 2], time_budget=30,
                         engines=["cfaults", "hsd"])
    generate_campaign(cfg, root)
    results = run_campaign(root, cfg, out_dir=root / "out")
    return root, cfg, results


def test_c17_seed7_has_ten_failing_observations(tmp_path):
    cfg = CampaignConfig(["c17"], [1], [10], [7])
    (man,) = generate_campaign(cfg, tmp_path)
    assert man["observations"] == 10 and not man["skipped"]
    d = tmp_path / "instances" / man["name"]
    golden = resolve_circuit("c17")
    faulty = read_bench(d / "circuit.bench")
    obs = observations_from_json((d / "obs.json").read_text(), faulty)
    assert len(obs) == 10
    for o in obs:
        assert simulate(golden, o.input_bits) == o.output_bits
        assert simulate(faulty, o.input_bits) != o.output_bits


@pytest.mark.parametrize("kw", [
    {"fault_counts": [0]},
    {"observation_counts": [0]},
    {"time_budget": 0},
    {"enum_budget": 0},
    {"engines": ["magic"]},
    {"weights": "heavy"},
    {"seeds": []},
])
def test_config_errors(kw):
    with pytest.raises(PreconditionError):
        CampaignConfig(["c17"], **kw)


def test_config_json_round_trip():
    cfg = CampaignConfig(["c17", "random:4:10:3"], [1, 2], [5], [0, 1], time_budget=2.5)
    assert CampaignConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(PreconditionError):
        CampaignConfig.from_json('{"circuits": ["c17"], "colour": 1}')


def test_seeds_vary_and_repeat(tmp_path):
    cfg = CampaignConfig(["c17"], [2], [5], [0, 1])
    a = generate_campaign(cfg, tmp_path / "a")
    b = generate_campaign(cfg, tmp_path / "b")
    assert a == b
    assert a[0]["faults"] != a[1]["faults"]
    for m in a:
        name = m["name"]
        assert (tmp_path / "a/instances" / name / "obs.json").read_text() == \
            (tmp_path / "b/instances" / name / "obs.json").read_text()


def test_resolve_circuit_forms(tmp_path):
    assert "c17" in bundled_circuits()
    assert len(resolve_circuit("c17").gates) == 6
    r = resolve_circuit("random:3:7:1")
    assert len(r.inputs) == 3 and len(r.gates) == 7
    with pytest.raises(PreconditionError):
        resolve_circuit(str(tmp_path / "nope.bench"))


def test_mini_campaign_rows(mini):
    root, cfg, results = mini
    insts = list_instances(root)
    assert len(results) == len(insts) * len(cfg.engines) == 24
    for r in results:
        if r.engine == "cfaults":
            assert r.status == "valid-diagnosis", r


def test_mini_campaign_ground_truth(mini):
    root, _, results = mini
    for d in list_instances(root):
        p, man = load_instance(d)
        injected = {f["gate"] for f in man["faults"]}
        assert validate_diagnosis(p, injected)
        rep = localize(p, "cfaults")
        assert any(x.components <= injected for x in rep.diagnoses), d.name
    for r in results:
        if r.solved:
            man = json.loads((root / "instances" / r.instance / "manifest.json").read_text())
            assert r.cost <= len(man["faults"])


def test_mini_campaign_csv_files(mini):
    root, cfg, results = mini
    out = root / "out"
    text = (out / "results.csv").read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert parse_results(text) == results
    cactus = (out / "cactus.csv").read_text().splitlines()
    assert cactus[0] == "engine,solved,time_s,cumulative_s"
    assert len(cactus) - 1 == sum(r.solved for r in results)
    scatter = (out / "scatter.csv").read_text().splitlines()
    assert len(scatter) - 1 == len(results) // 2


def test_empty_instance_dir_gives_header_only(tmp_path):
    (tmp_path / "instances").mkdir()
    cfg = CampaignConfig(["c17"])
    assert run_campaign(tmp_path, cfg, out_dir=tmp_path / "out") == []
    assert (tmp_path / "out/results.csv").read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_missing_instance_files(tmp_path):
    (tmp_path / "instances" / "broken").mkdir(parents=True)
    with pytest.raises(PreconditionError):
        run_instance(tmp_path / "instances" / "broken", "cfaults", 5)
    with pytest.raises(PreconditionError):
        list_instances(tmp_path / "absent")


def test_one_instance_two_engines(tmp_path):
    cfg = CampaignConfig(["c17"], [1], [3], [4], engines=["cfaults", "sniper"])
    generate_campaign(cfg, tmp_path)
    assert len(run_campaign(tmp_path, cfg)) == 2


def test_unobservable_instance_is_skipped(tmp_path):
    # more faults than gates cannot be injected
    cfg = CampaignConfig(["c17"], [7], [3], [0])
    (man,) = generate_campaign(cfg, tmp_path)
    assert man["skipped"]
    r = run_instance(tmp_path / "instances" / man["name"], "cfaults", 5)
    assert r.status == "no-observations"


def test_enumeration_budget_status(tmp_path):
    cfg = CampaignConfig(["c17"], [2], [10], [1], enum_budget=1, engines=["sniper"])
    generate_campaign(cfg, tmp_path)
    (r,) = run_campaign(tmp_path, cfg)
    assert r.status == "budget"


def test_isolated_run_matches_in_process(tmp_path):
    cfg = CampaignConfig(["c17"], [1], [4], [2])
    (man,) = generate_campaign(cfg, tmp_path)
    d = tmp_path / "instances" / man["name"]
    a = run_instance(d, "cfaults", 10)
    b = run_isolated(d, "cfaults", 10)
    assert (a.status, a.cost, a.num_diagnoses) == (b.status, b.cost, b.num_diagnoses)


def test_parallel_workers(tmp_path):
    cfg = CampaignConfig(["c17"], [1], [4], [0, 1], engines=["cfaults", "hsd"], workers=2)
    generate_campaign(cfg, tmp_path)
    par = run_campaign(tmp_path, cfg)
    seq = run_campaign(tmp_path, CampaignConfig(**{**cfg.__dict__, "workers": 1}))
    assert [(r.instance, r.engine, r.status, r.cost) for r in par] == \
        [(r.instance, r.engine, r.status, r.cost) for r in seq]


results_st = st.lists(st.builds(
    InstanceResult,
    st.text(st.characters(blacklist_categories=("Cs", "Cc")), min_size=1),
    st.sampled_from(["cfaults", "hsd", "sniper"]),
    st.sampled_from(STATUSES),
    st.floats(0, 1e4, allow_nan=False),
    st.none() | st.integers(0, 10**6),
    st.none() | st.integers(0, 10**6),
    st.none() | st.integers(0, 10**6),
), max_size=8)


@settings(max_examples=100, deadline=None)
@given(results_st)
def test_csv_round_trip(results):
    assert parse_results(render_results(results)) == results


@settings(max_examples=30, deadline=None)
@given(results_st)
def test_cactus_and_scatter_render(results):
    cactus = render_cactus(results).splitlines()
    assert len(cactus) - 1 == sum(r.solved for r in results)
    assert render_scatter(results, 10.0).splitlines()[0].startswith("instance,")
