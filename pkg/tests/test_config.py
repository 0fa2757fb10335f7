import json

import pytest

from gridfuse.config import ScenarioConfig, builtin_names, load, load_builtin
from gridfuse.errors import ConfigError, InputError, MissingReading, NonDivisible


def base(**over):
    d = {
        "name": "t",
        "seed": 3,
        "topology": {"n": 8, "d0": 4, "row_links": True},
        "fusion": {"name": "max"},
        "readings": {"source": "random", "low": "0", "high": "10", "denominator": 4},
    }
    d.update(over)
    return d


def test_builtins_listed():
    assert builtin_names() == ["fig4", "fig5a", "fig5b", "fig6a", "fig6b"]


@pytest.mark.parametrize("name", ["fig4", "fig5a", "fig5b", "fig6a", "fig6b"])
def test_builtin_round_trip(name):
    cfg = load_builtin(name)
    again = ScenarioConfig.from_dict(json.loads(cfg.to_json()))
    assert again == cfg and again.to_json() == cfg.to_json()


def test_round_trip_variants(tmp_path):
    variants = [
        base(),
        base(fusion={"name": "weighted_energy", "weights": ["1", "1/2"] * 4, "cost": 2}),
        base(fusion={"name": "prf", "prf": "max2"}, readings={"source": "planted_max", "m": 2}),
        base(faults={"iid_node_failure": 0.2, "rng_seed": 9, "node_failure": "reading"}),
        base(analysis={"kind": "montecarlo", "trials": 10, "m": 1, "p_f": ["0.1", "1/2"]}),
        base(topology={"hierarchy": {"clusters": [{"n": 4, "d0": 2}] * 2, "top": {"n": 2, "d0": 1}}}),
    ]
    for d in variants:
        cfg = ScenarioConfig.from_dict(d)
        path = tmp_path / "c.json"
        path.write_text(cfg.to_json())
        assert load(path) == cfg


def test_random_readings_are_seeded():
    cfg = ScenarioConfig.from_dict(base())
    assert cfg.build_readings() == cfg.build_readings()
    assert cfg.build_readings() != cfg.with_seed(4).build_readings()
    assert all(0 <= v <= 10 and (v * 4).denominator == 1 for v in cfg.build_readings().values())


def test_validation_errors():
    with pytest.raises(NonDivisible):
        ScenarioConfig.from_dict(base(topology={"n": 10, "d0": 4}))
    with pytest.raises(MissingReading):
        ScenarioConfig.from_dict(base(readings={"source": "explicit", "values": []}))
    with pytest.raises(ConfigError):
        ScenarioConfig.from_dict(base(readings={"source": "planted_max", "m": 9}))
    with pytest.raises(ConfigError):
        ScenarioConfig.from_dict(base(analysis={"kind": "montecarlo", "trials": 0, "m": 1, "p_f": [0.1]}))
    with pytest.raises(ConfigError):
        ScenarioConfig.from_dict(base(colour="blue"))
    with pytest.raises(InputError):
        ScenarioConfig.from_dict(base(fusion={"name": "weighted_mean"}))


def test_unreadable_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ConfigError):
        load(bad)
    with pytest.raises(ConfigError):
        load(tmp_path / "missing.json")
