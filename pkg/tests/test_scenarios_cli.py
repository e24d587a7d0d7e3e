import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from attractorlab import scenarios
from attractorlab.cli import main
from attractorlab.errors import ScenarioError

DATA = Path(__file__).resolve().parent.parent / "src" / "attractorlab" / "data"


# ---------------------------------------------------------------------------
# canonical JSON

def test_canonical_json_sorts_keys_and_formats_floats():
    text = scenarios.dumps({"b": 1.0, "a": [0.5, 2], "c": None, "d": True})
    doc = json.loads(text)
    assert doc == {"a": [0.5, 2], "b": 1.0, "c": None, "d": True}
    assert text.index('"a"') < text.index('"b"')
    assert "1.0" in text and "0.5" in text


def test_canonical_json_17_digit_floats():
    x = 0.1 + 0.2
    text = scenarios.dumps({"x": x})
    assert float(json.loads(text)["x"]) == x


def test_canonical_json_rejects_non_finite():
    with pytest.raises(ValueError):
        scenarios.dumps({"x": float("nan")})


def test_canonical_json_is_stable_under_reparse():
    doc = {"z": [1.5, -2.25, 3], "a": {"k": 0.1}, "m": "text"}
    once = scenarios.dumps(doc)
    assert scenarios.dumps(json.loads(once)) == once


# ---------------------------------------------------------------------------
# scenario parsing

def test_shipped_scenarios_round_trip_byte_identical():
    for n in (1, 2, 3, 4):
        path = DATA / f"example{n}.json"
        text = path.read_text(encoding="utf-8")
        scenario = scenarios.parse_scenario(text)
        assert scenario.serialize() == text


def test_load_example_ids():
    assert scenarios.load_example(1).id == "example1"
    with pytest.raises(ScenarioError):
        scenarios.load_example(9)


def test_parse_scenario_error_diagnostics():
    with pytest.raises(ScenarioError):
        scenarios.parse_scenario("not json")
    with pytest.raises(ScenarioError) as exc:
        scenarios.parse_scenario('{"schema_version": 1, "dim": 2}')
    assert exc.value.key == "id"
    base = {"schema_version": 1, "id": "t", "dim": 2, "generators": [
        {"name": "g", "matrix": [[1.0, 0.0], [0.0, 2.0]],
         "translation": [0.0, 0.0]}]}
    bad = dict(base)
    bad["generators"] = [{"name": "g", "matrix": [[1.0]],
                          "translation": [0.0]}]
    with pytest.raises(ScenarioError) as exc:
        scenarios.parse_scenario(json.dumps(bad))
    assert "generators[0]" in str(exc.value)
    bad = dict(base)
    bad["suspension"] = {"base": {"kind": "torus", "size": 1},
                         "assignment": {}}
    with pytest.raises(ScenarioError) as exc:
        scenarios.parse_scenario(json.dumps(bad))
    assert exc.value.key == "suspension.base.kind"


def test_parse_scenario_rejects_bad_assignment():
    doc = {"schema_version": 1, "id": "t", "dim": 2, "generators": [
        {"name": "g", "matrix": [[0.5, 0.0], [0.0, 0.5]],
         "translation": [0.0, 0.0]}],
        "suspension": {"base": {"kind": "free", "size": 1},
                       "assignment": {"g1": "nope"}}}
    with pytest.raises(ScenarioError) as exc:
        scenarios.parse_scenario(json.dumps(doc))
    assert exc.value.key == "suspension.assignment"


def test_detection_params_from_scenario():
    s = scenarios.load_example(4)
    params = s.detection_params()
    assert params.net_window == ((-2.0, 0.0), (0.0, 0.0))
    assert params.seed == 0
    assert s.detection_params(7).seed == 7


def test_outcome_tags():
    assert scenarios.outcome_tag(None) == "no-attractor"


# ---------------------------------------------------------------------------
# CLI

EX1 = str(DATA / "example1.json")
EX2 = str(DATA / "example2.json")
EX3 = str(DATA / "example3.json")
EX4 = str(DATA / "example4.json")


def run(args, **kwargs):
    return CliRunner().invoke(main, args, **kwargs)


def test_cli_orbit_csv():
    r = run(["orbit", "--scenario", EX1, "--base", "1,1", "--max-len", "2"])
    assert r.exit_code == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "x1,x2,word,len"
    assert lines[1] == "1.0,1.0,e,0"
    assert len(lines) == 6   # identity + 2 per length in rank 1
    lens = [int(line.rsplit(",", 1)[1]) for line in lines[1:]]
    assert lens == sorted(lens)


def test_cli_orbit_rejects_bad_base():
    r = run(["orbit", "--scenario", EX1, "--base", "x,y"])
    assert r.exit_code == 2
    r = run(["orbit", "--scenario", EX1, "--base", "1,2,3"])
    assert r.exit_code == 2


def test_cli_missing_scenario_is_parse_error():
    r = run(["certify", "--scenario", "/nonexistent.json"])
    assert r.exit_code == 2


def test_cli_certify_exit_codes():
    r = run(["certify", "--scenario", EX3])
    assert r.exit_code == 0
    doc = json.loads(r.stdout)
    assert doc["outcome"] == "certificate"
    assert doc["certificate"]["word"] == "g1^-1"
    r = run(["certify", "--scenario", EX1])
    assert r.exit_code == 1
    assert json.loads(r.stdout)["outcome"] == "no-certificate"


def test_cli_detect_reports_outcome():
    r = run(["detect", "--scenario", EX3])
    assert r.exit_code == 0
    doc = json.loads(r.stdout)
    assert doc["outcome"] == "attractor-point-global-minimal"
    assert doc["attractor"]["subspace"]["dim"] == 0
    assert doc["timing_seconds"] is None


def test_cli_detect_timing_flag():
    r = run(["detect", "--scenario", EX3, "--timing"])
    assert r.exit_code == 0
    assert json.loads(r.stdout)["timing_seconds"] > 0


def test_cli_example_matches_expectation():
    r = run(["example", "3"])
    assert r.exit_code == 0
    doc = json.loads(r.stdout)
    assert doc["matches_expected"] is True
    assert doc["expected"] == "attractor-point-global-minimal"


def test_cli_example_rejects_unknown_id():
    r = run(["example", "9"])
    assert r.exit_code == 2


def test_cli_classify(tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("0.0,0.0\n1.0,1.0\n", encoding="utf-8")
    r = run(["classify", "--scenario", EX1, "--points", str(pts),
             "--max-len", "15"])
    assert r.exit_code == 0
    table = json.loads(r.stdout)["leaf_classes"]
    assert [row["class"] for row in table] == ["periodic", "closed_discrete"]


def test_cli_classify_requires_suspension():
    r = run(["classify", "--scenario", EX3, "--points", "/dev/null"])
    assert r.exit_code == 2


def test_cli_plot(tmp_path):
    csv_in = tmp_path / "orbit.csv"
    svg_out = tmp_path / "orbit.svg"
    r = run(["orbit", "--scenario", EX1, "--base", "1,1", "--max-len", "3",
             "--out", str(csv_in)])
    assert r.exit_code == 0
    r = run(["plot", str(csv_in), str(svg_out)])
    assert r.exit_code == 0
    svg = svg_out.read_text(encoding="utf-8")
    assert svg.startswith("<svg")
    assert svg.count("<circle") == 7


def test_cli_plot_empty_csv_gives_axes_only(tmp_path):
    csv_in = tmp_path / "empty.csv"
    csv_in.write_text("", encoding="utf-8")
    svg_out = tmp_path / "empty.svg"
    r = run(["plot", str(csv_in), str(svg_out)])
    assert r.exit_code == 0
    svg = svg_out.read_text(encoding="utf-8")
    assert "<circle" not in svg
    assert "<line" in svg


def test_cli_plot_requires_two_coordinates(tmp_path):
    csv_in = tmp_path / "one.csv"
    csv_in.write_text("x1,word,len\n1.0,e,0\n", encoding="utf-8")
    r = run(["plot", str(csv_in), str(tmp_path / "out.svg")])
    assert r.exit_code == 2


@pytest.mark.parametrize("args", [
    ["orbit", "--scenario", EX2, "--base", "0.25,0.5", "--max-len", "4"],
    ["certify", "--scenario", EX4],
    ["detect", "--scenario", EX3],
    ["example", "3"],
])
def test_cli_byte_determinism_across_threads(args):
    one = run(args + ["--threads", "1"])
    eight = run(args + ["--threads", "8"])
    again = run(args + ["--threads", "1"])
    assert one.stdout == eight.stdout == again.stdout
    assert one.exit_code == eight.exit_code


def test_cli_seed_override_changes_samples_not_outcome():
    a = json.loads(run(["detect", "--scenario", EX3, "--seed", "1"]).stdout)
    b = json.loads(run(["detect", "--scenario", EX3, "--seed", "2"]).stdout)
    assert a["outcome"] == b["outcome"] == "attractor-point-global-minimal"
    assert a["seed"] == 1 and b["seed"] == 2


def test_run_report_shape():
    s = scenarios.load_example(3)
    doc = scenarios.run_report("certify", s, 0, outcome="x")
    assert doc["schema_version"] == 1
    assert doc["engine_version"] == scenarios.ENGINE_VERSION
    assert doc["scenario_id"] == "example3"
    assert doc["timing_seconds"] is None
