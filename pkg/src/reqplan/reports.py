"""Analysis payload builders shared by the CLI and the HTTP service.

Each builder runs one engine operation on a project document and returns a
JSON-compatible dict; `render_table` turns any payload into a plain-text view.
Payloads are deterministic for a given document and seed.
"""

from __future__ import annotations

import dataclasses
from typing import Optional, Sequence

from . import constraints as cs
from .consensus import AssignmentPreferences, plan_consensus
from .errors import ReqPlanError
from .factorization import complete_matrix
from .keywords import similarity_matrix
from .model import ProjectModel
from .mvp import MvpItem, MvpProblem, select_mvp
from .project_io import ProjectDocument
from .utility import rank


def prioritize_payload(doc: ProjectDocument) -> dict:
    report = rank(doc.project, doc.config.utility)
    per_dimension: dict = {}
    for (rid, dim), value in sorted(report.per_dimension.items()):
        per_dimension.setdefault(dim, {})[rid] = value
    order = sorted(report.priority, key=report.priority.get)
    return {
        "kind": "prioritize",
        "per_dimension": per_dimension,
        "overall": dict(sorted(report.overall.items())),
        "priority": dict(sorted(report.priority.items())),
        "order": order,
    }


def complete_payload(doc: ProjectDocument, dimension: Optional[str] = None,
                     seed: Optional[int] = None) -> dict:
    project = doc.project
    if dimension is None:
        if not project.dimensions:
            raise ReqPlanError("project has no interest dimensions to complete")
        dimension = project.dimensions[0].name
    if dimension not in project.dimension_names():
        raise ReqPlanError(f"unknown dimension {dimension!r}")
    cfg = doc.config.factorization
    if seed is not None:
        cfg = dataclasses.replace(cfg, seed=seed)
    completed = complete_matrix(project, dimension, cfg)
    observed = sorted(
        [rid, sid] for (sid, rid, dim) in project.evaluations.entries
        if dim == dimension)
    matrix: dict = {}
    for (sid, rid, dim), value in sorted(completed.entries.items()):
        matrix.setdefault(rid, {})[sid] = value
    return {
        "kind": "complete",
        "dimension": dimension,
        "matrix": matrix,
        "observed": observed,
        "seed": cfg.seed,
    }


def mvp_payload(doc: ProjectDocument) -> dict:
    if doc.mvp_maxtime is None:
        raise ReqPlanError('project document has no "mvp" section with a maxtime')
    report = rank(doc.project, doc.config.utility)
    items = tuple(MvpItem(r.id, report.overall[r.id], r.time_estimate)
                  for r in doc.project.requirements)
    solution = select_mvp(MvpProblem(items=items, maxtime=doc.mvp_maxtime))
    return {
        "kind": "mvp",
        "maxtime": doc.mvp_maxtime,
        "utilities": dict(sorted(report.overall.items())),
        "times": {r.id: r.time_estimate for r in doc.project.requirements},
        "selected": sorted(solution.selected),
        "total_utility": solution.total_utility,
        "total_time": solution.total_time,
    }


def consensus_payload(doc: ProjectDocument) -> dict:
    assignments = doc.project.preferences.assignments
    if not assignments:
        raise ReqPlanError("project has no assignment preferences for consensus planning")
    prefs = AssignmentPreferences(
        prefs={(sid, rid): rel for sid, by_req in assignments.items()
               for rid, rel in by_req.items()},
        horizon=doc.project.horizon.release_count,
    )
    result = plan_consensus(prefs, doc.config.consensus)
    return {
        "kind": "consensus",
        "plan": dict(sorted(result.plan.items())),
        "change_counts": dict(sorted(result.change_counts.items())),
        "objective_value": result.objective_value,
        "config": {
            "change_metric": doc.config.consensus.change_metric.value,
            "fairness_form": doc.config.consensus.fairness_form.value,
            "objective": doc.config.consensus.objective.value,
        },
    }


def _project_csp(project: ProjectModel,
                 exclude: Sequence[dict] = ()) -> tuple:
    """Variables, hard list and ordered soft list for the release-planning CSP."""
    soft = [c for c in project.preferences.constraints
            if c.hardness is cs.Hardness.SOFT]
    hard = list(project.hard_constraints) + [
        c for c in project.preferences.constraints if c.hardness is cs.Hardness.HARD]
    dropped = {(e.get("stakeholder"), e.get("requirement")) for e in exclude}
    if dropped:
        soft = [c for c in soft if (c.owner, c.req_a) not in dropped]
    with_sentinel = any(c.kind is cs.ConstraintKind.EXCLUDES_ONE
                        for c in hard + soft)
    variables = cs.make_vars(project.requirement_ids(),
                             project.horizon.release_count, with_sentinel)
    return variables, hard, soft


def plan_payload(doc: ProjectDocument, exclude: Sequence[dict] = ()) -> dict:
    project = doc.project
    variables, hard, soft = _project_csp(project, exclude)
    durations = project.durations()
    csp = cs.Csp(variables=variables, hard=tuple(hard), soft=tuple(soft),
                 durations=durations)
    assignment = cs.solve(csp, include_soft=True)
    if assignment is not None:
        return {"kind": "plan", "status": "SAT", "assignment": assignment,
                "includes_preferences": True}
    hard_only = cs.solve(csp, include_soft=False)
    if hard_only is not None:
        return {"kind": "plan", "status": "SOFT_UNSAT", "assignment": hard_only,
                "includes_preferences": False,
                "hint": "preferences are inconsistent; see conflicts/diagnose"}
    return {"kind": "plan", "status": "UNSAT"}


def _conflict_to_json(conflict: Sequence[cs.ReleaseConstraint]) -> dict:
    return {"constraints": [
        {"stakeholder": c.owner, "requirement": c.req_a, "text": c.text()}
        for c in conflict]}


def conflicts_payload(doc: ProjectDocument, exclude: Sequence[dict] = (),
                      background: bool = True, limit: int = 64) -> dict:
    """Minimal conflict sets among soft preferences.

    `background=False` drops the hard constraints, leaving pure consensus
    semantics (all stakeholders constrain the same release variable).
    """
    project = doc.project
    variables, hard, soft = _project_csp(project, exclude)
    if not background:
        hard = []
    conflicts = cs.all_min_conflicts(hard, soft, variables, limit=limit,
                                     durations=project.durations())
    return {
        "kind": "conflicts",
        "background": background,
        "count": len(conflicts),
        "conflicts": [_conflict_to_json(c) for c in conflicts],
    }


def diagnose_payload(doc: ProjectDocument, exclude: Sequence[dict] = ()) -> dict:
    project = doc.project
    variables, hard, soft = _project_csp(project, exclude)
    diagnosis = cs.min_diagnosis(hard, soft, variables,
                                 durations=project.durations())
    if diagnosis is None:
        return {"kind": "diagnose", "consistent": True, "diagnosis": []}
    remaining = [c for c in soft if c not in diagnosis]
    variables2, hard2, _ = _project_csp(project, exclude)
    repaired = cs.solve(cs.Csp(variables=variables2,
                               hard=tuple(hard2) + tuple(remaining),
                               durations=project.durations()))
    return {
        "kind": "diagnose",
        "consistent": False,
        "diagnosis": [{"stakeholder": c.owner, "requirement": c.req_a,
                       "text": c.text()} for c in diagnosis],
        "repaired_plan": repaired,
    }


def assign_payload(doc: ProjectDocument, top_k: int = 3) -> dict:
    project = doc.project
    matrix = similarity_matrix(project)
    values: dict = {}
    for (rid, sid), score in sorted(matrix.values.items()):
        values.setdefault(rid, {})[sid] = score
    recommendations = {}
    for rid in project.requirement_ids():
        row = [(sid, score) for (r, sid), score in matrix.values.items()
               if r == rid and score > 0.0]
        row.sort(key=lambda pair: (-pair[1], pair[0]))
        recommendations[rid] = [{"stakeholder": sid, "score": score}
                                for sid, score in row[:top_k]]
    return {
        "kind": "assign",
        "similarity": values,
        "recommendations": recommendations,
    }


# --- plain-text rendering ----------------------------------------------------

def render_table(payload: dict) -> str:
    kind = payload.get("kind")
    if kind == "prioritize":
        rows = [(rid, f"{payload['overall'][rid]:.4f}", payload["priority"][rid])
                for rid in payload["order"]]
        return _table(["requirement", "utility", "priority"], rows)
    if kind == "complete":
        observed = {tuple(cell) for cell in payload["observed"]}
        users = sorted({sid for row in payload["matrix"].values() for sid in row})
        rows = []
        for rid, row in sorted(payload["matrix"].items()):
            cells = [f"{row[sid]:.3f}" + ("" if (rid, sid) in observed else "*")
                     for sid in users]
            rows.append((rid, *cells))
        body = _table([payload["dimension"], *users], rows)
        return body + "\n* = predicted (was missing)"
    if kind == "mvp":
        rows = [(rid, f"{payload['utilities'][rid]:.4f}", payload["times"][rid],
                 "yes" if rid in payload["selected"] else "")
                for rid in sorted(payload["utilities"])]
        body = _table(["requirement", "utility", "time", "selected"], rows)
        return (body + f"\ntotal utility {payload['total_utility']:.4f}, "
                f"time {payload['total_time']} <= maxtime {payload['maxtime']}")
    if kind == "consensus":
        rows = [(rid, rel) for rid, rel in sorted(payload["plan"].items())]
        body = _table(["requirement", "release"], rows)
        changes = ", ".join(f"{sid}: {n}" for sid, n in
                            sorted(payload["change_counts"].items()))
        return body + f"\nchanges per stakeholder: {changes}"
    if kind == "plan":
        if payload["status"] == "UNSAT":
            return "UNSAT: no release plan satisfies the hard constraints"
        rows = sorted(payload["assignment"].items())
        note = {"SAT": "plan satisfies all constraints and preferences",
                "SOFT_UNSAT": "preferences dropped (inconsistent); hard-only plan"}
        return _table(["requirement", "release"], rows) + "\n" + note[payload["status"]]
    if kind == "conflicts":
        if not payload["conflicts"]:
            return "no conflicts"
        lines = []
        for i, conflict in enumerate(payload["conflicts"], start=1):
            parts = " AND ".join(c["text"] for c in conflict["constraints"])
            lines.append(f"conflict {i}: {parts}")
        return "\n".join(lines)
    if kind == "diagnose":
        if payload["consistent"]:
            return "consistent: no diagnosis needed"
        lines = ["retract to restore consistency:"]
        lines += [f"  - {c['text']}" for c in payload["diagnosis"]]
        if payload.get("repaired_plan"):
            plan = ", ".join(f"{r}->{v}" for r, v in
                             sorted(payload["repaired_plan"].items()))
            lines.append(f"plan after repair: {plan}")
        return "\n".join(lines)
    if kind == "assign":
        users = sorted({sid for row in payload["similarity"].values() for sid in row})
        rows = []
        for rid, row in sorted(payload["similarity"].items()):
            rows.append((rid, *(f"{row[sid]:.2f}" for sid in users)))
        return _table(["", *users], rows)
    raise ReqPlanError(f"no table renderer for payload kind {kind!r}")


def _table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.insert(1, "-" * max(len(line) for line in lines))
    return "\n".join(lines)
