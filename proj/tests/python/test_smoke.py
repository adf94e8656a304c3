import math
import os
from pathlib import Path

import pytest

import iterplan

CONFIGS = Path(os.environ.get("ITERPLAN_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def test_builtins_synthesize_and_verify():
    assert "fire_patrol" in iterplan.builtin_names()
    r = iterplan.synthesize(builtin="fire_patrol")
    assert r["realizable"] and r["verified"]
    assert r["controller_states"] > 0
    again = iterplan.synthesize(builtin="fire_patrol")
    assert again["controller"] == r["controller"]


def test_unrealizable_spec():
    text = (
        "controlled a\nuncontrolled u\n"
        "process P = states 1 ; init 0 ; 0 -a-> 0 ; 0 -u-> 0\n"
        "plant P\ngoal safety always (not u)\n"
    )
    r = iterplan.synthesize(text=text)
    assert not r["realizable"]
    assert "controller" not in r


def test_spec_round_trip_and_errors():
    text = iterplan.canonical_spec("controlled a\nprocess P = states 1 ; init 0 ; 0 -a-> 0\nplant P\n")
    assert iterplan.canonical_spec(text) == text
    with pytest.raises(iterplan._core.IterplanError):
        iterplan.canonical_spec("controlled a\nprocess P = states 1 ; init 0 ; 0 -a 0\n")
    with pytest.raises(ValueError):
        iterplan.synthesize()


def test_run_config_is_deterministic():
    text = (CONFIGS / "fire_patrol_7x7.toml").read_text()
    a = iterplan.run_config(text)
    b = iterplan.run_config(text)
    assert a["overhead"] >= 0
    assert a["log"] == b["log"]
    assert a["csv_row"].rsplit(",", 1)[0] == b["csv_row"].rsplit(",", 1)[0]
    assert iterplan.run_config(text, seed=9)["seed"] == 9


def test_scenarios():
    patrol = iterplan.ordered_patrol_scenario(1000, "last", 1)
    assert patrol["sim_s"] > patrol["ideal_s"] > 0
    assert len(patrol["loop_durations"]) == 2
    cover = iterplan.cover_scenario(713, 30, "distance", 2)
    assert cover["targets"] == 30 and cover["stop_reason"] == "complete"


def test_sort_order_distance_puts_nearest_first():
    cells = list(range(100))
    order = iterplan.sort_order(10, 10, 50.0, (25.0, 25.0, 0.0), cells)
    assert sorted(order) == cells
    assert order[0] == 0
    last = iterplan.sort_order(10, 10, 50.0, (25.0, 25.0, 0.0), cells, sorter="last", interesting=[5, 7])
    assert last[-2:] == [5, 7]


def test_plan_trajectory():
    t = iterplan.plan_trajectory((0.0, 0.0, 0.0), (500.0, 0.0))
    assert t["length"] == pytest.approx(500.0)
    assert t["duration"] == pytest.approx(500.0 / 17.0)
    turn = iterplan.plan_trajectory((0.0, 0.0, 0.0), (0.0, 300.0), arrival_axis=math.pi / 2)
    assert turn["length"] > 300.0
    x, y, _ = turn["end"]
    assert math.hypot(x, y - 300.0) < 1e-6


def test_cells_and_plot():
    assert iterplan.name_of(7, 7, 0) == "A1"
    assert iterplan.id_of(7, 7, "B3") == 9
    assert iterplan.plot_csv("").startswith("<svg")
    row = iterplan.ordered_patrol_scenario(400, "distance", 1)["csv_row"]
    svg = iterplan.plot_csv(iterplan.csv_header() + "\n" + row + "\n", "scatter")
    assert 'data-sorter="distance"' in svg
