"""Group-based multi-attribute utility analysis and requirement ranking.

A requirement's per-dimension utility is the mean of the stakeholder ratings
for that dimension; the overall utility is the weight-scaled sum over
dimensions, optionally divided by the dimension count. Both normalization
modes yield the same priority permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import MissingEvaluations, NoRatings
from .model import ProjectModel


class NormalizationMode(Enum):
    DIVIDE_BY_DIMS = "DIVIDE_BY_DIMS"
    WEIGHTED_SUM = "WEIGHTED_SUM"


class MissingValuePolicy(Enum):
    SKIP = "SKIP"
    ERROR = "ERROR"


@dataclass(frozen=True)
class UtilityConfig:
    normalization_mode: NormalizationMode = NormalizationMode.DIVIDE_BY_DIMS
    missing_value_policy: MissingValuePolicy = MissingValuePolicy.SKIP


@dataclass(frozen=True)
class UtilityReport:
    per_dimension: dict[tuple[str, str], float]  # (requirement_id, dimension) -> utility
    overall: dict[str, float]                    # requirement_id -> utility
    priority: dict[str, int]                     # requirement_id -> rank, 1 = best


def dimension_utility(project: ProjectModel, requirement_id: str, dimension: str,
                      cfg: UtilityConfig = UtilityConfig()) -> float:
    """Mean stakeholder rating of one requirement on one interest dimension."""
    ratings = []
    missing = []
    for s in project.stakeholders:
        r = project.evaluations.get(s.id, requirement_id, dimension)
        if r is None:
            missing.append(s.id)
        else:
            ratings.append(r)
    if cfg.missing_value_policy is MissingValuePolicy.ERROR and missing:
        raise MissingEvaluations(
            f"({requirement_id}, {dimension}) not rated by: {', '.join(missing)}")
    if not ratings:
        raise NoRatings(f"no stakeholder rated ({requirement_id}, {dimension})")
    return sum(ratings) / len(ratings)


def overall_utility(project: ProjectModel, requirement_id: str,
                    cfg: UtilityConfig = UtilityConfig()) -> float:
    """Weighted aggregate of the per-dimension utilities of one requirement."""
    total = sum(dimension_utility(project, requirement_id, d.name, cfg) * d.weight
                for d in project.dimensions)
    if cfg.normalization_mode is NormalizationMode.DIVIDE_BY_DIMS:
        return total / len(project.dimensions)
    return total


def rank(project: ProjectModel, cfg: UtilityConfig = UtilityConfig()) -> UtilityReport:
    """Rank all requirements by descending overall utility, ties by ascending id."""
    per_dimension = {}
    overall = {}
    for r in project.requirements:
        for d in project.dimensions:
            per_dimension[(r.id, d.name)] = dimension_utility(project, r.id, d.name, cfg)
        overall[r.id] = overall_utility(project, r.id, cfg)
    ordered = sorted(overall, key=lambda rid: (-overall[rid], rid))
    priority = {rid: i + 1 for i, rid in enumerate(ordered)}
    return UtilityReport(per_dimension=per_dimension, overall=overall, priority=priority)
