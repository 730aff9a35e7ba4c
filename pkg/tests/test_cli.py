import json

import pytest

from detour.cli import main
from detour.routes import serialize_route


@pytest.fixture
def toy_path(data_dir):
    return str(data_dir / "networks" / "net-toy.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_network_validate(capsys, toy_path):
    code, _, err = run(capsys, "network", "validate", toy_path)
    assert code == 0 and "5 stations, 2 lines" in err


def test_network_validate_invalid(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"stations": 3}')
    code, _, err = run(capsys, "network", "validate", str(bad))
    assert code == 1 and "SchemaError" in err


def test_import_gtfs_writes_document(capsys, data_dir, tmp_path):
    out = tmp_path / "net.json"
    code, _, _ = run(capsys, "network", "import-gtfs", str(data_dir / "gtfs" / "minimal"), "--out", str(out))
    assert code == 0
    assert run(capsys, "network", "validate", str(out))[0] == 0


def test_plan(capsys, toy_path):
    code, out, err = run(capsys, "--network", toy_path, "plan", "A", "D")
    assert code == 0
    assert out.strip() == '{"legs":[{"mode":"subway","line":"G","from":"A","to":"D"}]}'
    assert "cost=360s" in err


def test_plan_avoid_and_trivial(capsys, toy_path):
    _, out, _ = run(capsys, "--network", toy_path, "plan", "A", "D", "--avoid-station", "E")
    assert json.loads(out)["legs"][0]["line"] == "R"
    _, out, _ = run(capsys, "--network", toy_path, "plan", "A", "A")
    assert out.strip() == '{"legs":[]}'


def test_plan_no_route_exit_2(capsys, toy_path, tmp_path):
    spec = tmp_path / "d.json"
    spec.write_text(json.dumps({"avoided_stations": ["C"], "disabled_lines": ["G"]}))
    code, out, err = run(capsys, "--network", toy_path, "plan", "A", "D", "--disruption", str(spec))
    assert code == 2 and out == "" and "NoRoute" in err


def test_plan_zone_flag(capsys, toy_path):
    _, out, _ = run(capsys, "--network", toy_path, "plan", "A", "D", "--zone", "40.711,-74.009,40.713,-74.007")
    assert json.loads(out)["legs"][0]["line"] == "R"
    code, _, _ = run(capsys, "--network", toy_path, "plan", "A", "D", "--zone", "1,2,3")
    assert code == 1


def test_plan_needs_network(capsys):
    assert run(capsys, "plan", "A", "D")[0] == 1


def test_evaluate(capsys, data_dir, tmp_path):
    scenario = data_dir / "scenarios" / "s4.json"
    _, route, _ = run(capsys, "--network", str(data_dir / "networks" / "nyc.json"), "plan",
                      "Grand Central-42 St", "Cathedral Parkway", "--avoid-station", "42 St-Port Authority Bus Terminal")
    route_file = tmp_path / "route.json"
    route_file.write_text(route)
    code, out, _ = run(capsys, "evaluate", str(route_file), str(scenario))
    doc = json.loads(out)
    assert code == 0 and doc["connected"] and doc["avoided"] and doc["valid"]

    route_file.write_text("Take the 7 to Times Sq, then the 1 uptown.")
    _, out, _ = run(capsys, "evaluate", str(route_file), str(scenario))
    doc = json.loads(out)
    assert doc["format_violation"] and doc["normalized_time"] == 1.0

    assert run(capsys, "evaluate", str(route_file), str(tmp_path / "none.json"))[0] == 1


def test_llm_run_replay_all(capsys, tmp_path, monkeypatch):
    import httpx

    def no_network(*a, **k):
        raise AssertionError("network used")

    monkeypatch.setattr(httpx, "post", no_network)
    out = tmp_path / "r.json"
    code, _, err = run(capsys, "llm", "run", "--io", "replay", "--providers", "all", "--out", str(out))
    assert code == 0 and "27 cells, 0 errors" in err
    assert len(json.loads(out.read_text())["cells"]) == 27


def test_llm_run_live_without_token(capsys, monkeypatch, tmp_path):
    import httpx

    for var in ("OPENAI_API_KEY", "GEMINI_API_KEY", "ANTHROPIC_API_KEY"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setattr(httpx, "post", lambda *a, **k: pytest.fail("request sent"))
    code, _, err = run(capsys, "llm", "run", "--io", "live", "--out", str(tmp_path / "r.json"))
    assert code == 3 and "AuthError" in err


def test_llm_run_missing_cassettes_exit_3(capsys, tmp_path):
    code, _, err = run(capsys, "--cassettes", str(tmp_path / "empty"), "llm", "run", "--providers", "GPT",
                       "--out", str(tmp_path / "r.json"))
    assert code == 3 and "9 errors" in err


def test_report_layouts(capsys, tmp_path):
    results = tmp_path / "r.json"
    for pipeline, maps in [("two-stage", "with"), ("two-stage", "without"), ("single-stage", "with")]:
        run(capsys, "llm", "run", "--pipeline", pipeline, "--maps", maps, "--out", str(results), "--append")
    code, out, _ = run(capsys, "--out-dir", str(tmp_path), "report", str(results), "--layout", "models")
    assert code == 0 and [c.strip() for c in out.splitlines()[0].split("|")[1:]] == ["GPT", "Gemini", "Claude"]
    assert (tmp_path / "report-models.csv").read_text().startswith("metric,GPT,Gemini,Claude")
    code, out, _ = run(capsys, "--out-dir", str(tmp_path), "report", str(results), "--layout", "summary-ablation")
    assert code == 0 and "Violations of format" in out
    assert "0.11" in [c.strip() for c in out.splitlines()[-1].split("|")]


def test_report_empty_results(capsys, tmp_path):
    empty = tmp_path / "r.json"
    empty.write_text('{"cells": [], "prompt_version": "x"}')
    code, _, err = run(capsys, "--out-dir", str(tmp_path), "report", str(empty))
    assert code == 1 and "EmptyGroup" in err
