"""Project document format (JSON), bundled fixtures, and CSV evaluation import.

A project file carries the model plus per-module configuration and the MVP
time budget. Unknown keys are rejected so typos fail loudly; every parse error
names the offending location. Saving a loaded document and reloading it yields
the same document (relational preference operators are normalized to
=, <= and >= on load, which is a fixed point).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from . import constraints as cs
from .consensus import ChangeMetric, ConsensusConfig, FairnessForm, Objective
from .errors import ParseError, ValidationError
from .factorization import TrainConfig
from .model import (EvaluationMatrix, InterestDimension, PreferenceSet,
                    ProjectModel, ReleaseHorizon, Requirement, Stakeholder,
                    validate_project)
from .utility import MissingValuePolicy, NormalizationMode, UtilityConfig

_TOP_KEYS = {"requirements", "stakeholders", "dimensions", "evaluations",
             "release_horizon", "hard_constraints", "preferences", "mvp", "config"}

_KIND_FIELDS = {
    cs.ConstraintKind.ASSIGN: ("req_a", "value"),
    cs.ConstraintKind.BEFORE: ("req_a", "req_b"),
    cs.ConstraintKind.NOT_BEFORE: ("req_a", "req_b"),
    cs.ConstraintKind.DIFFERENT: ("req_a", "req_b"),
    cs.ConstraintKind.AT_MOST: ("req_a", "value"),
    cs.ConstraintKind.AT_LEAST: ("req_a", "value"),
    cs.ConstraintKind.EXCLUDES_ONE: ("req_a", "req_b"),
    cs.ConstraintKind.TIMELY: ("req_a", "req_b", "value"),
    cs.ConstraintKind.CAPACITY: ("release", "value"),
    cs.ConstraintKind.EFFORT: ("release", "value"),
}

_OP_TO_KIND = {"=": cs.ConstraintKind.ASSIGN, "<=": cs.ConstraintKind.AT_MOST,
               ">=": cs.ConstraintKind.AT_LEAST}
_KIND_TO_OP = {v: k for k, v in _OP_TO_KIND.items()}


@dataclass(frozen=True)
class EngineConfig:
    utility: UtilityConfig = field(default_factory=UtilityConfig)
    factorization: TrainConfig = field(default_factory=TrainConfig)
    consensus: ConsensusConfig = field(default_factory=ConsensusConfig)


@dataclass(frozen=True)
class ProjectDocument:
    project: ProjectModel
    mvp_maxtime: Optional[int] = None
    config: EngineConfig = field(default_factory=EngineConfig)


def load_project(path) -> ProjectModel:
    """Parsed and validated model from a project file."""
    return load_document(path).project


def load_document(path) -> ProjectDocument:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ParseError(f"{path}: file not found")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    document = parse_document(raw, source=str(path))
    issues = validate_project(document.project)
    if issues:
        raise ValidationError(issues)
    return document


def parse_document(raw, source: str = "<document>") -> ProjectDocument:
    obj = _expect_map(raw, source)
    unknown = set(obj) - _TOP_KEYS
    if unknown:
        raise ParseError(f"{source}: unknown keys {sorted(unknown)}")

    requirements = tuple(
        _parse_requirement(item, f"{source}: requirements[{i}]")
        for i, item in enumerate(_expect_list(obj.get("requirements", []),
                                              f"{source}: requirements")))
    stakeholders = tuple(
        _parse_stakeholder(item, f"{source}: stakeholders[{i}]")
        for i, item in enumerate(_expect_list(obj.get("stakeholders", []),
                                              f"{source}: stakeholders")))
    dimensions = tuple(
        _parse_dimension(item, f"{source}: dimensions[{i}]")
        for i, item in enumerate(_expect_list(obj.get("dimensions", []),
                                              f"{source}: dimensions")))
    evaluations = _parse_evaluations(obj.get("evaluations", {}),
                                     f"{source}: evaluations")
    horizon = ReleaseHorizon(_expect_int(obj.get("release_horizon", 1),
                                         f"{source}: release_horizon"))
    sentinel = horizon.release_count + 1
    hard = tuple(
        _parse_constraint(item, sentinel, f"{source}: hard_constraints[{i}]")
        for i, item in enumerate(_expect_list(obj.get("hard_constraints", []),
                                              f"{source}: hard_constraints")))
    preferences = _parse_preferences(obj.get("preferences", {}),
                                     f"{source}: preferences")
    mvp_maxtime = None
    if "mvp" in obj:
        mvp = _expect_map(obj["mvp"], f"{source}: mvp")
        extra = set(mvp) - {"maxtime"}
        if extra:
            raise ParseError(f"{source}: mvp: unknown keys {sorted(extra)}")
        mvp_maxtime = _expect_int(mvp.get("maxtime", 0), f"{source}: mvp.maxtime")
    config = _parse_config(obj.get("config", {}), f"{source}: config")

    project = ProjectModel(requirements=requirements, stakeholders=stakeholders,
                           dimensions=dimensions, evaluations=evaluations,
                           horizon=horizon, hard_constraints=hard,
                           preferences=preferences)
    return ProjectDocument(project=project, mvp_maxtime=mvp_maxtime, config=config)


def _parse_requirement(item, path) -> Requirement:
    obj = _expect_map(item, path)
    _reject_unknown(obj, {"id", "title", "description", "keywords", "time_estimate"}, path)
    return Requirement(
        id=_expect_str(obj.get("id"), f"{path}.id"),
        title=_expect_str(obj.get("title", ""), f"{path}.title"),
        description=_expect_str(obj.get("description", ""), f"{path}.description"),
        keywords=frozenset(_expect_str(k, f"{path}.keywords")
                           for k in _expect_list(obj.get("keywords", []),
                                                 f"{path}.keywords")),
        time_estimate=_expect_int(obj.get("time_estimate", 0), f"{path}.time_estimate"),
    )


def _parse_stakeholder(item, path) -> Stakeholder:
    obj = _expect_map(item, path)
    _reject_unknown(obj, {"id", "name", "expertise_keywords"}, path)
    return Stakeholder(
        id=_expect_str(obj.get("id"), f"{path}.id"),
        name=_expect_str(obj.get("name", ""), f"{path}.name"),
        expertise_keywords=frozenset(
            _expect_str(k, f"{path}.expertise_keywords")
            for k in _expect_list(obj.get("expertise_keywords", []),
                                  f"{path}.expertise_keywords")),
    )


def _parse_dimension(item, path) -> InterestDimension:
    obj = _expect_map(item, path)
    _reject_unknown(obj, {"name", "weight", "polarity_note"}, path)
    return InterestDimension(
        name=_expect_str(obj.get("name"), f"{path}.name"),
        weight=_expect_number(obj.get("weight", 1.0), f"{path}.weight"),
        polarity_note=_expect_str(obj.get("polarity_note", ""), f"{path}.polarity_note"),
    )


def _parse_evaluations(raw, path) -> EvaluationMatrix:
    obj = _expect_map(raw, path)
    entries = {}
    for dim, by_req in obj.items():
        for rid, by_user in _expect_map(by_req, f"{path}.{dim}").items():
            for sid, rating in _expect_map(by_user, f"{path}.{dim}.{rid}").items():
                entries[(sid, rid, dim)] = _expect_number(
                    rating, f"{path}.{dim}.{rid}.{sid}")
    return EvaluationMatrix(entries=entries)


def _parse_constraint(item, sentinel, path) -> cs.ReleaseConstraint:
    obj = _expect_map(item, path)
    kind_name = _expect_str(obj.get("kind"), f"{path}.kind")
    try:
        kind = cs.ConstraintKind(kind_name)
    except ValueError:
        raise ParseError(f"{path}.kind: unknown constraint kind {kind_name!r}")
    fields = _KIND_FIELDS[kind]
    _reject_unknown(obj, {"kind", "hardness", "owner", *fields}, path)
    missing = [f for f in fields if f not in obj]
    if missing:
        raise ParseError(f"{path}: {kind_name} requires fields {missing}")
    hardness = _parse_hardness(obj.get("hardness", "HARD"), f"{path}.hardness")
    kwargs = {"hardness": hardness, "owner": obj.get("owner")}
    for f in fields:
        if f in ("req_a", "req_b"):
            kwargs[f] = _expect_str(obj[f], f"{path}.{f}")
        else:
            kwargs[f] = _expect_int(obj[f], f"{path}.{f}")
    if kind is cs.ConstraintKind.EXCLUDES_ONE:
        kwargs["value"] = sentinel  # "not planned" maps onto the extra release
    return cs.ReleaseConstraint(kind, **kwargs)


def _parse_hardness(raw, path) -> cs.Hardness:
    try:
        return cs.Hardness(_expect_str(raw, path))
    except ValueError:
        raise ParseError(f"{path}: hardness must be HARD or SOFT, got {raw!r}")


def _parse_preferences(raw, path) -> PreferenceSet:
    obj = _expect_map(raw, path)
    _reject_unknown(obj, {"assignments", "constraints"}, path)
    assignments = {}
    for sid, by_req in _expect_map(obj.get("assignments", {}),
                                   f"{path}.assignments").items():
        assignments[sid] = {
            rid: _expect_int(rel, f"{path}.assignments.{sid}.{rid}")
            for rid, rel in _expect_map(by_req, f"{path}.assignments.{sid}").items()
        }
    constraint_prefs = []
    for i, item in enumerate(_expect_list(obj.get("constraints", []),
                                          f"{path}.constraints")):
        constraint_prefs.append(_parse_preference_constraint(
            item, f"{path}.constraints[{i}]"))
    return PreferenceSet(assignments=assignments, constraints=tuple(constraint_prefs))


def _parse_preference_constraint(item, path) -> cs.ReleaseConstraint:
    obj = _expect_map(item, path)
    _reject_unknown(obj, {"stakeholder", "requirement", "op", "value", "hardness"}, path)
    sid = _expect_str(obj.get("stakeholder"), f"{path}.stakeholder")
    rid = _expect_str(obj.get("requirement"), f"{path}.requirement")
    op = _expect_str(obj.get("op"), f"{path}.op")
    value = _expect_int(obj.get("value"), f"{path}.value")
    hardness = _parse_hardness(obj.get("hardness", "SOFT"), f"{path}.hardness")
    # the preference grammar is a relation against a constant; strict forms
    # normalize onto the closed ones
    if op == "<":
        op, value = "<=", value - 1
    elif op == ">":
        op, value = ">=", value + 1
    if op not in _OP_TO_KIND:
        raise ParseError(f"{path}.op: expected one of =, <, >, <=, >=, got {op!r}")
    return cs.ReleaseConstraint(_OP_TO_KIND[op], req_a=rid, value=value,
                                hardness=hardness, owner=sid)


def _parse_config(raw, path) -> EngineConfig:
    obj = _expect_map(raw, path)
    _reject_unknown(obj, {"utility", "factorization", "consensus"}, path)
    ucfg = UtilityConfig()
    if "utility" in obj:
        u = _expect_map(obj["utility"], f"{path}.utility")
        _reject_unknown(u, {"normalization_mode", "missing_value_policy"},
                        f"{path}.utility")
        ucfg = UtilityConfig(
            normalization_mode=_parse_enum(NormalizationMode,
                                           u.get("normalization_mode", "DIVIDE_BY_DIMS"),
                                           f"{path}.utility.normalization_mode"),
            missing_value_policy=_parse_enum(MissingValuePolicy,
                                             u.get("missing_value_policy", "SKIP"),
                                             f"{path}.utility.missing_value_policy"),
        )
    tcfg = TrainConfig()
    if "factorization" in obj:
        f = _expect_map(obj["factorization"], f"{path}.factorization")
        _reject_unknown(f, {"k", "learning_rate", "regularization", "max_epochs",
                            "seed", "convergence_tolerance"}, f"{path}.factorization")
        try:
            tcfg = TrainConfig(
                k=_expect_int(f.get("k", 3), f"{path}.factorization.k"),
                learning_rate=_expect_number(f.get("learning_rate", 0.01),
                                             f"{path}.factorization.learning_rate"),
                regularization=_expect_number(f.get("regularization", 0.02),
                                              f"{path}.factorization.regularization"),
                max_epochs=_expect_int(f.get("max_epochs", 5000),
                                       f"{path}.factorization.max_epochs"),
                seed=_expect_int(f.get("seed", 0), f"{path}.factorization.seed"),
                convergence_tolerance=_expect_number(
                    f.get("convergence_tolerance", 1e-6),
                    f"{path}.factorization.convergence_tolerance"),
            )
        except ValueError as exc:
            raise ParseError(f"{path}.factorization: {exc}")
    ccfg = ConsensusConfig()
    if "consensus" in obj:
        c = _expect_map(obj["consensus"], f"{path}.consensus")
        _reject_unknown(c, {"change_metric", "fairness_form", "objective"},
                        f"{path}.consensus")
        ccfg = ConsensusConfig(
            change_metric=_parse_enum(ChangeMetric, c.get("change_metric", "INDICATOR"),
                                      f"{path}.consensus.change_metric"),
            fairness_form=_parse_enum(FairnessForm, c.get("fairness_form", "ALL_PAIRS"),
                                      f"{path}.consensus.fairness_form"),
            objective=_parse_enum(Objective,
                                  c.get("objective", "LEX_TOTAL_THEN_FAIRNESS"),
                                  f"{path}.consensus.objective"),
        )
    return EngineConfig(utility=ucfg, factorization=tcfg, consensus=ccfg)


def _parse_enum(enum_cls, raw, path):
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ParseError(f"{path}: expected one of {allowed}, got {raw!r}")


# --- serialization -----------------------------------------------------------

def document_to_json(doc: ProjectDocument) -> dict:
    p = doc.project
    payload = {
        "requirements": [_requirement_to_json(r) for r in p.requirements],
        "stakeholders": [_stakeholder_to_json(s) for s in p.stakeholders],
        "dimensions": [
            {"name": d.name, "weight": d.weight, "polarity_note": d.polarity_note}
            for d in p.dimensions
        ],
        "evaluations": _evaluations_to_json(p.evaluations),
        "release_horizon": p.horizon.release_count,
        "hard_constraints": [constraint_to_json(c) for c in p.hard_constraints],
        "preferences": {
            "assignments": {sid: dict(sorted(by_req.items()))
                            for sid, by_req in sorted(p.preferences.assignments.items())},
            "constraints": [preference_to_json(c) for c in p.preferences.constraints],
        },
        "config": {
            "utility": {
                "normalization_mode": doc.config.utility.normalization_mode.value,
                "missing_value_policy": doc.config.utility.missing_value_policy.value,
            },
            "factorization": {
                "k": doc.config.factorization.k,
                "learning_rate": doc.config.factorization.learning_rate,
                "regularization": doc.config.factorization.regularization,
                "max_epochs": doc.config.factorization.max_epochs,
                "seed": doc.config.factorization.seed,
                "convergence_tolerance": doc.config.factorization.convergence_tolerance,
            },
            "consensus": {
                "change_metric": doc.config.consensus.change_metric.value,
                "fairness_form": doc.config.consensus.fairness_form.value,
                "objective": doc.config.consensus.objective.value,
            },
        },
    }
    if doc.mvp_maxtime is not None:
        payload["mvp"] = {"maxtime": doc.mvp_maxtime}
    return payload


def _requirement_to_json(r: Requirement) -> dict:
    return {"id": r.id, "title": r.title, "description": r.description,
            "keywords": sorted(r.keywords), "time_estimate": r.time_estimate}


def _stakeholder_to_json(s: Stakeholder) -> dict:
    return {"id": s.id, "name": s.name,
            "expertise_keywords": sorted(s.expertise_keywords)}


def _evaluations_to_json(m: EvaluationMatrix) -> dict:
    out: dict = {}
    for (sid, rid, dim), rating in sorted(m.entries.items()):
        out.setdefault(dim, {}).setdefault(rid, {})[sid] = rating
    return out


def constraint_to_json(c: cs.ReleaseConstraint) -> dict:
    out = {"kind": c.kind.value}
    for f in _KIND_FIELDS[c.kind]:
        out[f] = getattr(c, f)
    if c.hardness is not cs.Hardness.HARD:
        out["hardness"] = c.hardness.value
    if c.owner is not None:
        out["owner"] = c.owner
    return out


def preference_to_json(c: cs.ReleaseConstraint) -> dict:
    out = {"stakeholder": c.owner, "requirement": c.req_a,
           "op": _KIND_TO_OP[c.kind], "value": c.value}
    if c.hardness is not cs.Hardness.SOFT:
        out["hardness"] = c.hardness.value
    return out


def dumps_document(doc: ProjectDocument) -> str:
    return json.dumps(document_to_json(doc), indent=2, sort_keys=True) + "\n"


def save_document(doc: ProjectDocument, path) -> None:
    Path(path).write_text(dumps_document(doc))


# --- fixtures ----------------------------------------------------------------

FIXTURE_NAMES = ("early_re.json", "sparse_ratings.json", "basic_planning.json",
                 "release_planning.json", "keyword_match.json")


def fixture_path(name: str) -> Path:
    p = resources.files("reqplan").joinpath("fixtures") / name
    return Path(str(p))


def load_fixture(name: str) -> ProjectDocument:
    return load_document(fixture_path(name))


# --- CSV import --------------------------------------------------------------

def read_csv_dimension(path) -> dict[str, dict[str, float]]:
    """Rows = requirements, columns = stakeholders, "?" marks a missing rating."""
    path = Path(path)
    with path.open(newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows or len(rows[0]) < 2:
        raise ParseError(f"{path}: expected a header row with stakeholder ids")
    header = [h.strip() for h in rows[0][1:]]
    table: dict[str, dict[str, float]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not row[0].strip():
            continue
        rid = row[0].strip()
        cells = {}
        for sid, cell in zip(header, row[1:]):
            cell = cell.strip()
            if cell == "?" or cell == "":
                continue
            try:
                cells[sid] = float(cell)
            except ValueError:
                raise ParseError(f"{path}: line {lineno}: bad rating {cell!r}")
        table[rid] = cells
    return table


def apply_csv_dimension(doc: ProjectDocument, dimension: str,
                        table: dict[str, dict[str, float]]) -> ProjectDocument:
    """New document with one dimension's evaluations replaced by the CSV table."""
    entries = {key: rating for key, rating in doc.project.evaluations.entries.items()
               if key[2] != dimension}
    for rid, cells in table.items():
        for sid, rating in cells.items():
            entries[(sid, rid, dimension)] = rating
    project = ProjectModel(
        requirements=doc.project.requirements,
        stakeholders=doc.project.stakeholders,
        dimensions=doc.project.dimensions,
        evaluations=EvaluationMatrix(entries=entries),
        horizon=doc.project.horizon,
        hard_constraints=doc.project.hard_constraints,
        preferences=doc.project.preferences,
    )
    return ProjectDocument(project=project, mvp_maxtime=doc.mvp_maxtime,
                           config=doc.config)


# --- shared type guards ------------------------------------------------------

def _expect_map(raw, path) -> dict:
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: expected an object, got {type(raw).__name__}")
    return raw


def _expect_list(raw, path) -> list:
    if not isinstance(raw, list):
        raise ParseError(f"{path}: expected a list, got {type(raw).__name__}")
    return raw


def _expect_str(raw, path) -> str:
    if not isinstance(raw, str):
        raise ParseError(f"{path}: expected a string, got {raw!r}")
    return raw


def _expect_int(raw, path) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError(f"{path}: expected an integer, got {raw!r}")
    return raw


def _expect_number(raw, path) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ParseError(f"{path}: expected a number, got {raw!r}")
    return float(raw)


def _reject_unknown(obj, allowed, path):
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ParseError(f"{path}: unknown keys {sorted(unknown)}")
