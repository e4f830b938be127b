"""Core domain types shared by every engine module.

All types are immutable value objects after construction; edit a project by
building a new one. Ratings live on a fixed 0..10 scale and all dimensions are
read as "higher rating = higher utility contribution" (risk tables already
encode high rating = low risk).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .constraints import ConstraintKind, ReleaseConstraint

RATING_MIN = 0.0
RATING_MAX = 10.0


@dataclass(frozen=True)
class Requirement:
    id: str
    title: str = ""
    description: str = ""
    keywords: frozenset[str] = frozenset()
    time_estimate: int = 0


@dataclass(frozen=True)
class Stakeholder:
    id: str
    name: str = ""
    expertise_keywords: frozenset[str] = frozenset()


@dataclass(frozen=True)
class InterestDimension:
    name: str
    weight: float = 1.0
    polarity_note: str = ""


@dataclass(frozen=True)
class EvaluationMatrix:
    """Sparse stakeholder x requirement x dimension ratings; absent = unrated."""

    entries: dict[tuple[str, str, str], float] = field(default_factory=dict)

    def get(self, stakeholder_id: str, requirement_id: str,
            dimension: str) -> Optional[float]:
        return self.entries.get((stakeholder_id, requirement_id, dimension))

    def ratings_for(self, requirement_id: str, dimension: str) -> dict[str, float]:
        """Stakeholder -> rating for one (requirement, dimension) cell column."""
        return {s: r for (s, rq, d), r in sorted(self.entries.items())
                if rq == requirement_id and d == dimension}


@dataclass(frozen=True)
class ReleaseHorizon:
    release_count: int = 1


@dataclass(frozen=True)
class PreferenceSet:
    """Per-stakeholder release preferences.

    `assignments` holds dense release-number tables (one release wish per
    stakeholder and requirement); `constraints` holds typed relational
    preferences in stakeholder-major, requirement-minor order.
    """

    assignments: dict[str, dict[str, int]] = field(default_factory=dict)
    constraints: tuple[ReleaseConstraint, ...] = ()


@dataclass(frozen=True)
class ProjectModel:
    requirements: tuple[Requirement, ...] = ()
    stakeholders: tuple[Stakeholder, ...] = ()
    dimensions: tuple[InterestDimension, ...] = ()
    evaluations: EvaluationMatrix = field(default_factory=EvaluationMatrix)
    horizon: ReleaseHorizon = field(default_factory=ReleaseHorizon)
    hard_constraints: tuple[ReleaseConstraint, ...] = ()
    preferences: PreferenceSet = field(default_factory=PreferenceSet)

    def requirement_ids(self) -> list[str]:
        return [r.id for r in self.requirements]

    def stakeholder_ids(self) -> list[str]:
        return [s.id for s in self.stakeholders]

    def dimension_names(self) -> list[str]:
        return [d.name for d in self.dimensions]

    def requirement(self, requirement_id: str) -> Optional[Requirement]:
        for r in self.requirements:
            if r.id == requirement_id:
                return r
        return None

    def durations(self) -> dict[str, int]:
        return {r.id: r.time_estimate for r in self.requirements}


@dataclass(frozen=True)
class ValidationIssue:
    entity: str
    rule: str
    message: str

    def __str__(self):
        return f"{self.entity}: {self.message} [{self.rule}]"


def validate_project(project: ProjectModel) -> list[ValidationIssue]:
    """Check every model invariant; an empty list means the project is well formed."""
    issues: list[ValidationIssue] = []

    def issue(entity, rule, message):
        issues.append(ValidationIssue(entity, rule, message))

    req_ids = set()
    for r in project.requirements:
        if not r.id:
            issue("requirement", "id-non-empty", "requirement id must be non-empty")
        elif r.id in req_ids:
            issue(r.id, "id-unique", f"duplicate requirement id {r.id!r}")
        req_ids.add(r.id)
        if r.time_estimate < 0:
            issue(r.id, "time-estimate-non-negative",
                  f"time_estimate {r.time_estimate} is negative")
        for kw in r.keywords:
            if kw != kw.lower():
                issue(r.id, "keywords-lowercase", f"keyword {kw!r} is not lowercase")

    stakeholder_ids = set()
    for s in project.stakeholders:
        if not s.id:
            issue("stakeholder", "id-non-empty", "stakeholder id must be non-empty")
        elif s.id in stakeholder_ids:
            issue(s.id, "id-unique", f"duplicate stakeholder id {s.id!r}")
        stakeholder_ids.add(s.id)
        for kw in s.expertise_keywords:
            if kw != kw.lower():
                issue(s.id, "keywords-lowercase", f"keyword {kw!r} is not lowercase")

    dim_names = set()
    for d in project.dimensions:
        if d.name in dim_names:
            issue(d.name, "dimension-unique", f"duplicate dimension {d.name!r}")
        dim_names.add(d.name)
        if not 0.0 <= d.weight <= 1.0:
            issue(d.name, "weight-range", f"weight {d.weight} outside [0, 1]")

    for (sid, rid, dim), rating in sorted(project.evaluations.entries.items()):
        cell = f"({sid}, {rid}, {dim})"
        if sid not in stakeholder_ids:
            issue(cell, "unknown-stakeholder-id", f"unknown stakeholder id {sid!r}")
        if rid not in req_ids:
            issue(cell, "unknown-requirement-id", f"unknown requirement id {rid!r}")
        if dim not in dim_names:
            issue(cell, "unknown-dimension", f"unknown dimension {dim!r}")
        if not RATING_MIN <= rating <= RATING_MAX:
            issue(cell, "rating-out-of-range",
                  f"rating {rating} outside [{RATING_MIN:g}, {RATING_MAX:g}]")

    n = project.horizon.release_count
    if n < 1:
        issue("horizon", "horizon-positive", f"release_count {n} must be >= 1")

    sentinel = n + 1
    for c in project.hard_constraints:
        issues.extend(_constraint_issues(c, req_ids, n, sentinel, "hard constraint"))

    for sid, prefs in sorted(project.preferences.assignments.items()):
        if sid not in stakeholder_ids:
            issue(sid, "unknown-stakeholder-id",
                  f"preference for unknown stakeholder id {sid!r}")
        for rid, release in sorted(prefs.items()):
            if rid not in req_ids:
                issue(f"{sid}/{rid}", "unknown-requirement-id",
                      f"preference references unknown requirement id {rid!r}")
            if not 1 <= release <= n:
                issue(f"{sid}/{rid}", "release-out-of-horizon",
                      f"release {release} outside 1..{n}")
    for c in project.preferences.constraints:
        issues.extend(_constraint_issues(c, req_ids, n, sentinel, "preference"))
        if c.owner is not None and c.owner not in stakeholder_ids:
            issue(c.text(), "unknown-stakeholder-id",
                  f"preference owned by unknown stakeholder id {c.owner!r}")

    return issues


def _constraint_issues(c: ReleaseConstraint, req_ids, n, sentinel, label):
    issues = []

    def issue(rule, message):
        issues.append(ValidationIssue(c.text(), rule, f"{label}: {message}"))

    for rid in (c.req_a, c.req_b):
        if rid is not None and rid not in req_ids:
            issue("unknown-requirement-id", f"unknown requirement id {rid!r}")
    if c.kind in (ConstraintKind.ASSIGN, ConstraintKind.AT_MOST, ConstraintKind.AT_LEAST):
        if not 1 <= c.value <= n:
            issue("release-out-of-horizon", f"release {c.value} outside 1..{n}")
    elif c.kind is ConstraintKind.EXCLUDES_ONE:
        if c.value != sentinel:
            issue("sentinel-mismatch",
                  f"excluded-release sentinel must be {sentinel}, got {c.value}")
    elif c.kind is ConstraintKind.TIMELY:
        if c.value < 0:
            issue("window-non-negative", f"window {c.value} is negative")
    elif c.kind in (ConstraintKind.CAPACITY, ConstraintKind.EFFORT):
        if not 1 <= c.release <= n:
            issue("release-out-of-horizon", f"release {c.release} outside 1..{n}")
        if c.value < 0:
            issue("limit-non-negative", f"limit {c.value} is negative")
    return issues
