import json

import pytest

from reqplan.errors import ParseError, ValidationError
from reqplan.project_io import (FIXTURE_NAMES, apply_csv_dimension,
                                document_to_json, dumps_document, fixture_path,
                                load_document, load_fixture, parse_document,
                                read_csv_dimension, save_document)


def test_early_re_fixture_shape(early_doc):
    p = early_doc.project
    assert len(p.requirements) == 5
    assert len(p.stakeholders) == 4
    assert [d.name for d in p.dimensions] == ["relevance", "risk"]
    assert p.evaluations.get("user1", "req2", "relevance") == 10.0


def test_all_fixtures_load_cleanly():
    for name in FIXTURE_NAMES:
        doc = load_fixture(name)
        assert doc.project.requirements


def test_round_trip_is_identity(tmp_path):
    for name in FIXTURE_NAMES:
        doc = load_fixture(name)
        out = tmp_path / name
        save_document(doc, out)
        again = load_document(out)
        assert document_to_json(again) == document_to_json(doc)
        # saving once more produces byte-identical output
        assert dumps_document(again) == dumps_document(doc)


def test_malformed_json_names_location(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"requirements": [}')
    with pytest.raises(ParseError) as err:
        load_document(bad)
    assert "line 1" in str(err.value)


def test_missing_file():
    with pytest.raises(ParseError):
        load_document("/nonexistent/project.json")


def test_rating_out_of_range_fails_validation(tmp_path):
    raw = json.loads(fixture_path("early_re.json").read_text())
    raw["evaluations"]["relevance"]["req1"]["user1"] = 12
    out = tmp_path / "p.json"
    out.write_text(json.dumps(raw))
    with pytest.raises(ValidationError) as err:
        load_document(out)
    assert "rating" in str(err.value)


def test_unknown_top_level_key_rejected():
    with pytest.raises(ParseError) as err:
        parse_document({"requirements": [], "surprise": 1})
    assert "surprise" in str(err.value)


def test_unknown_nested_key_rejected():
    with pytest.raises(ParseError):
        parse_document({"requirements": [{"id": "r", "color": "red"}]})


def test_unknown_constraint_kind_rejected():
    with pytest.raises(ParseError) as err:
        parse_document({"requirements": [{"id": "r"}],
                        "hard_constraints": [{"kind": "SOMETIME", "req_a": "r"}]})
    assert "SOMETIME" in str(err.value)


def test_wrong_type_names_path():
    with pytest.raises(ParseError) as err:
        parse_document({"requirements": [{"id": 5}]})
    assert "requirements[0].id" in str(err.value)


def test_strict_preference_ops_normalize():
    doc = parse_document({
        "requirements": [{"id": "r1"}],
        "stakeholders": [{"id": "u1"}],
        "release_horizon": 3,
        "preferences": {"constraints": [
            {"stakeholder": "u1", "requirement": "r1", "op": "<", "value": 3},
            {"stakeholder": "u1", "requirement": "r1", "op": ">", "value": 1},
        ]},
    })
    ops = [(c.kind.value, c.value) for c in doc.project.preferences.constraints]
    assert ops == [("AT_MOST", 2), ("AT_LEAST", 2)]


def test_excludes_one_gets_sentinel():
    doc = parse_document({
        "requirements": [{"id": "r1"}, {"id": "r2"}],
        "release_horizon": 3,
        "hard_constraints": [{"kind": "EXCLUDES_ONE", "req_a": "r1", "req_b": "r2"}],
    })
    assert doc.project.hard_constraints[0].value == 4


def test_preference_order_is_preserved(release_doc):
    owners = [c.owner for c in release_doc.project.preferences.constraints]
    assert owners == sorted(owners)  # stakeholder-major input order
    user1 = [c.req_a for c in release_doc.project.preferences.constraints
             if c.owner == "user1"]
    assert user1 == sorted(user1)  # requirement-minor within a stakeholder


def test_csv_import(tmp_path):
    csv_file = tmp_path / "relevance.csv"
    csv_file.write_text(
        ",user1,user2,user3,user4\n"
        "req1,?,?,5,?\n"
        "req2,10,?,1,?\n"
        "req3,?,6,?,2\n"
        "req4,?,?,3,?\n"
        "req5,?,?,?,5\n")
    table = read_csv_dimension(csv_file)
    assert table["req2"] == {"user1": 10.0, "user3": 1.0}
    assert table["req1"] == {"user3": 5.0}

    doc = load_fixture("early_re.json")
    updated = apply_csv_dimension(doc, "relevance", table)
    m = updated.project.evaluations
    assert m.get("user1", "req2", "relevance") == 10.0
    assert m.get("user2", "req2", "relevance") is None
    # the other dimension is untouched
    assert m.get("user1", "req1", "risk") == 2.0


def test_csv_bad_cell(tmp_path):
    csv_file = tmp_path / "bad.csv"
    csv_file.write_text(",user1\nreq1,abc\n")
    with pytest.raises(ParseError) as err:
        read_csv_dimension(csv_file)
    assert "line 2" in str(err.value)


def test_mvp_section_parsed(basic_doc):
    assert basic_doc.mvp_maxtime == 9


def test_config_parsed(basic_doc, sparse_doc):
    assert basic_doc.config.utility.normalization_mode.value == "WEIGHTED_SUM"
    assert sparse_doc.config.factorization.seed == 7
