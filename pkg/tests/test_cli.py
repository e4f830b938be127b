import json

import pytest

from reqplan.cli import run_cli
from reqplan.project_io import fixture_path

EARLY = str(fixture_path("early_re.json"))
BASIC = str(fixture_path("basic_planning.json"))
RELEASE = str(fixture_path("release_planning.json"))
KEYWORDS = str(fixture_path("keyword_match.json"))
SPARSE = str(fixture_path("sparse_ratings.json"))


def _run(capsys, *argv):
    code = run_cli(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_prioritize_json(capsys):
    code, out = _run(capsys, "prioritize", "--project", BASIC)
    assert code == 0
    payload = json.loads(out)
    assert payload["order"] == ["req2", "req5", "req3", "req1", "req4"]
    assert payload["overall"]["req4"] == 2.9375


def test_assign_table_renders_similarities(capsys):
    code, out = _run(capsys, "assign", "--project", KEYWORDS, "--format", "table")
    assert code == 0
    assert "0.40" in out and "1.00" in out and "0.80" in out


def test_assign_json_matches_expected(capsys):
    code, out = _run(capsys, "assign", "--project", KEYWORDS)
    payload = json.loads(out)
    assert payload["similarity"]["req3"]["user3"] == pytest.approx(1.0)
    assert payload["similarity"]["req2"]["user2"] == pytest.approx(2 / 3)


def test_conflicts_lists_two_singletons(capsys):
    code, out = _run(capsys, "conflicts", "--project", RELEASE)
    assert code == 0
    payload = json.loads(out)
    texts = sorted(c["constraints"][0]["text"] for c in payload["conflicts"])
    assert texts == ["user1: req3.rel <= 2", "user1: req5.rel >= 2"]
    assert all(len(c["constraints"]) == 1 for c in payload["conflicts"])


def test_conflicts_no_background_three_pairs(capsys):
    code, out = _run(capsys, "conflicts", "--project", RELEASE, "--no-background")
    payload = json.loads(out)
    assert payload["count"] == 3
    assert all(len(c["constraints"]) == 2 for c in payload["conflicts"])


def test_diagnose_names_user1(capsys):
    code, out = _run(capsys, "diagnose", "--project", RELEASE)
    payload = json.loads(out)
    assert [d["stakeholder"] for d in payload["diagnosis"]] == ["user1", "user1"]


def test_mvp_selects_req2_req5(capsys):
    code, out = _run(capsys, "mvp", "--project", BASIC)
    payload = json.loads(out)
    assert payload["selected"] == ["req2", "req5"]
    assert payload["total_time"] == 9


def test_consensus_plan(capsys):
    code, out = _run(capsys, "consensus", "--project", BASIC)
    payload = json.loads(out)
    assert payload["plan"] == {"req1": 1, "req2": 2, "req3": 3, "req4": 2, "req5": 1}


def test_plan_soft_unsat_still_exits_zero(capsys):
    code, out = _run(capsys, "plan", "--project", RELEASE)
    assert code == 0
    assert json.loads(out)["status"] == "SOFT_UNSAT"


def test_complete_fills_all_cells(capsys):
    code, out = _run(capsys, "complete", "--project", SPARSE, "--seed", "3")
    payload = json.loads(out)
    assert payload["matrix"]["req2"]["user1"] == 10.0
    assert len(payload["matrix"]) == 5
    assert all(len(row) == 4 for row in payload["matrix"].values())


def test_json_output_is_byte_stable(capsys, tmp_path):
    code1, out1 = _run(capsys, "complete", "--project", SPARSE, "--seed", "3")
    code2, out2 = _run(capsys, "complete", "--project", SPARSE, "--seed", "3")
    assert out1 == out2


def test_env_seed_overrides_flag(capsys, monkeypatch):
    _, with_flag = _run(capsys, "complete", "--project", SPARSE, "--seed", "3")
    monkeypatch.setenv("REQPLAN_SEED", "3")
    _, with_env = _run(capsys, "complete", "--project", SPARSE, "--seed", "99")
    assert with_env == with_flag


def test_missing_project_file_exits_two(capsys):
    code = run_cli(["prioritize", "--project", "/nope.json"])
    assert code == 2


def test_usage_error_exits_two(capsys):
    code = run_cli(["prioritize"])  # --project is required
    assert code == 2


def test_mvp_without_budget_exits_two(capsys):
    code = run_cli(["mvp", "--project", EARLY])
    assert code == 2


def test_plan_hard_unsat_exits_one(tmp_path, capsys):
    raw = json.loads(fixture_path("release_planning.json").read_text())
    raw["hard_constraints"].append(
        {"kind": "BEFORE", "req_a": "req3", "req_b": "req1"})
    bad = tmp_path / "unsat.json"
    bad.write_text(json.dumps(raw))
    code, out = _run(capsys, "plan", "--project", str(bad))
    assert code == 1
    assert json.loads(out)["status"] == "UNSAT"


def test_conflicts_with_unsat_background_exits_one(tmp_path, capsys):
    raw = json.loads(fixture_path("release_planning.json").read_text())
    raw["hard_constraints"].append(
        {"kind": "BEFORE", "req_a": "req3", "req_b": "req1"})
    bad = tmp_path / "unsat.json"
    bad.write_text(json.dumps(raw))
    code = run_cli(["conflicts", "--project", str(bad)])
    assert code == 1


def test_out_writes_file(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    code = run_cli(["assign", "--project", KEYWORDS, "--out", str(out_file)])
    assert code == 0
    assert json.loads(out_file.read_text())["kind"] == "assign"


def test_import_csv_roundtrip(tmp_path, capsys):
    csv_file = tmp_path / "relevance.csv"
    csv_file.write_text(",user1,user2,user3,user4\nreq1,4,?,?,?\n")
    out_file = tmp_path / "updated.json"
    code = run_cli(["import-csv", "--project", EARLY, "--csv", str(csv_file),
                    "--dimension", "relevance", "--out", str(out_file)])
    assert code == 0
    updated = json.loads(out_file.read_text())
    assert updated["evaluations"]["relevance"] == {"req1": {"user1": 4.0}}
    # risk column untouched
    assert updated["evaluations"]["risk"]["req1"]["user1"] == 2
