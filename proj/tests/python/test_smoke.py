import json
import math

import pytest

import dynaraft


def test_presets_listed():
    assert dynaraft.preset_names() == [
        "stable-election",
        "gradual-rtt",
        "radical-rtt",
        "loss-sweep",
        "tuning-demo",
    ]


def test_preset_round_trips_through_validate():
    for name in dynaraft.preset_names():
        assert dynaraft.validate(dynaraft.preset_json(name)) == []


def test_validate_reports_paths():
    doc = dynaraft.preset("stable-election")
    doc["cluster"]["n"] = 0
    errors = dynaraft.validate(json.dumps(doc))
    assert any(e.startswith("cluster.n") for e in errors)


def test_required_heartbeats():
    assert dynaraft.required_heartbeats(0.0) == 1
    # ceil(log(0.001) / log(0.1)) = 3
    assert dynaraft.required_heartbeats(0.1) == 3
    assert dynaraft.required_heartbeats(0.5) == math.ceil(math.log(0.001) / math.log(0.5))


def test_election_timeout_matches_numpy():
    np = pytest.importorskip("numpy")
    rtts = [50.0 + (i % 7) for i in range(40)]
    expected = np.mean(rtts) + 2 * np.std(rtts)
    assert dynaraft.election_timeout_ms(rtts) == pytest.approx(expected, abs=0.001)


def test_tune_cold_window_falls_back():
    out = dynaraft.tune([50.0] * 3, [1, 2, 3])
    assert not out["warm"]
    assert out["et_ms"] == 1000.0
    assert out["h_ms"] == 100.0


def test_tune_warm_window():
    out = dynaraft.tune([100.0] * 20, list(range(1, 21)))
    assert out["warm"]
    assert out["k"] == 1
    assert out["et_ms"] == pytest.approx(100.0)
    assert dynaraft.heartbeat_interval_ms(out["et_ms"], 4) == 25.0


def test_run_is_deterministic():
    a = dynaraft.run("stable-election", reps=4, seed=7, threads=2)
    b = dynaraft.run("stable-election", reps=4, seed=7, threads=1)
    assert a == b
    names = [v["name"] for v in a["variants"]]
    assert names == ["dynatune", "raft"]
    assert all(v["detected"] == 4 for v in a["variants"])


def test_run_rejects_bad_scenario():
    with pytest.raises(ValueError):
        dynaraft.run({"cluster": {"n": -1}})
