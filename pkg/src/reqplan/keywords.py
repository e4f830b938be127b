"""Content-based stakeholder recommendation from keyword profiles.

Similarity is twice the intersection size over the union size, exactly as the
planning formula is written (union in the denominator, not the size sum of
classic Dice), so values range over [0, 2] and two identical non-empty
profiles score 2.0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import UnknownRequirement
from .model import ProjectModel

_TOKEN = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class KeywordProfile:
    owner: str
    tokens: frozenset[str]


@dataclass(frozen=True)
class SimilarityMatrix:
    values: dict[tuple[str, str], float]  # (requirement_id, stakeholder_id) -> similarity


def normalize_keywords(text: str, stopwords: Iterable[str] = ()) -> frozenset[str]:
    """Lowercase, split on whitespace/punctuation, deduplicate. No stemming."""
    drop = set(stopwords)
    return frozenset(t for t in _TOKEN.findall(text.lower()) if t not in drop)


def token_similarity(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 0.0
    return 2.0 * len(a & b) / len(a | b)


def similarity(a: KeywordProfile, b: KeywordProfile) -> float:
    """Profile similarity in [0, 2]; 0 when both profiles are empty."""
    return token_similarity(a.tokens, b.tokens)


def similarity_matrix(project: ProjectModel) -> SimilarityMatrix:
    """Similarity of every requirement against every stakeholder profile."""
    values = {}
    for r in project.requirements:
        for s in project.stakeholders:
            values[(r.id, s.id)] = token_similarity(r.keywords, s.expertise_keywords)
    return SimilarityMatrix(values=values)


def recommend_validators(project: ProjectModel, requirement_id: str,
                         k: int) -> list[tuple[str, float]]:
    """Top-k stakeholders by similarity, ties by ascending id, zero scores dropped."""
    req = project.requirement(requirement_id)
    if req is None:
        raise UnknownRequirement(f"unknown requirement id {requirement_id!r}")
    scored = [(s.id, token_similarity(req.keywords, s.expertise_keywords))
              for s in project.stakeholders]
    scored = [(sid, score) for sid, score in scored if score > 0.0]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:k]
