"""Finite-domain release-planning constraints: solver, minimal conflicts, diagnosis.

Variables are requirement release slots with explicit integer domains. The
solver is chronological backtracking with forward checking, minimum-remaining-
values variable order and ascending value order, so results are deterministic.
Conflict extraction is divide-and-conquer over an ordered soft-constraint list;
diagnosis is the dual divide-and-conquer on removals.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InconsistentBackground, TooLarge


class Hardness(Enum):
    HARD = "HARD"
    SOFT = "SOFT"


class ConstraintKind(Enum):
    ASSIGN = "ASSIGN"                # rel_a = value
    BEFORE = "BEFORE"                # rel_a < rel_b
    NOT_BEFORE = "NOT_BEFORE"        # rel_a <= rel_b
    DIFFERENT = "DIFFERENT"          # rel_a != rel_b
    AT_MOST = "AT_MOST"              # rel_a <= value
    AT_LEAST = "AT_LEAST"            # rel_a >= value
    EXCLUDES_ONE = "EXCLUDES_ONE"    # rel_a = value or rel_b = value (sentinel release)
    TIMELY = "TIMELY"                # |rel_a - rel_b| <= value
    CAPACITY = "CAPACITY"            # at most value requirements in release
    EFFORT = "EFFORT"                # sum of durations in release <= value


@dataclass(frozen=True)
class ReleaseConstraint:
    kind: ConstraintKind
    req_a: Optional[str] = None
    req_b: Optional[str] = None
    release: Optional[int] = None
    value: Optional[int] = None
    hardness: Hardness = Hardness.HARD
    owner: Optional[str] = None

    def text(self) -> str:
        """Human-readable form close to the planning notation, e.g. "req3.rel <= 2"."""
        k = self.kind
        if k is ConstraintKind.ASSIGN:
            body = f"{self.req_a}.rel = {self.value}"
        elif k is ConstraintKind.BEFORE:
            body = f"{self.req_a}.rel < {self.req_b}.rel"
        elif k is ConstraintKind.NOT_BEFORE:
            body = f"{self.req_a}.rel <= {self.req_b}.rel"
        elif k is ConstraintKind.DIFFERENT:
            body = f"{self.req_a}.rel != {self.req_b}.rel"
        elif k is ConstraintKind.AT_MOST:
            body = f"{self.req_a}.rel <= {self.value}"
        elif k is ConstraintKind.AT_LEAST:
            body = f"{self.req_a}.rel >= {self.value}"
        elif k is ConstraintKind.EXCLUDES_ONE:
            body = f"{self.req_a}.rel = {self.value} or {self.req_b}.rel = {self.value}"
        elif k is ConstraintKind.TIMELY:
            body = f"|{self.req_a}.rel - {self.req_b}.rel| <= {self.value}"
        elif k is ConstraintKind.CAPACITY:
            body = f"count(rel = {self.release}) <= {self.value}"
        else:
            body = f"effort(rel = {self.release}) <= {self.value}"
        if self.owner:
            return f"{self.owner}: {body}"
        return body


def assign(req, value, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.ASSIGN, req_a=req, value=value,
                             hardness=hardness, owner=owner)


def before(req_a, req_b, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.BEFORE, req_a=req_a, req_b=req_b,
                             hardness=hardness, owner=owner)


def not_before(req_a, req_b, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.NOT_BEFORE, req_a=req_a, req_b=req_b,
                             hardness=hardness, owner=owner)


def different(req_a, req_b, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.DIFFERENT, req_a=req_a, req_b=req_b,
                             hardness=hardness, owner=owner)


def at_most(req, value, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.AT_MOST, req_a=req, value=value,
                             hardness=hardness, owner=owner)


def at_least(req, value, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.AT_LEAST, req_a=req, value=value,
                             hardness=hardness, owner=owner)


def excludes_one(req_a, req_b, sentinel, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.EXCLUDES_ONE, req_a=req_a, req_b=req_b,
                             value=sentinel, hardness=hardness, owner=owner)


def timely(req_a, req_b, k, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.TIMELY, req_a=req_a, req_b=req_b,
                             value=k, hardness=hardness, owner=owner)


def capacity(release, limit, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.CAPACITY, release=release, value=limit,
                             hardness=hardness, owner=owner)


def effort(release, limit, hardness=Hardness.HARD, owner=None):
    return ReleaseConstraint(ConstraintKind.EFFORT, release=release, value=limit,
                             hardness=hardness, owner=owner)


@dataclass(frozen=True)
class ReleaseVar:
    requirement_id: str
    domain: frozenset[int]


@dataclass(frozen=True)
class Csp:
    variables: tuple[ReleaseVar, ...]
    hard: tuple[ReleaseConstraint, ...] = ()
    soft: tuple[ReleaseConstraint, ...] = ()
    durations: Mapping[str, int] = None  # required only when EFFORT constraints exist

    def __post_init__(self):
        if self.durations is None:
            object.__setattr__(self, "durations", {})


def make_vars(requirement_ids: Iterable[str], release_count: int,
              with_sentinel: bool = False) -> tuple[ReleaseVar, ...]:
    """Build one release variable per requirement with domain 1..n (plus the
    "not planned" sentinel n+1 when EXCLUDES_ONE constraints are in play)."""
    top = release_count + 1 if with_sentinel else release_count
    dom = frozenset(range(1, top + 1))
    return tuple(ReleaseVar(rid, dom) for rid in requirement_ids)


def satisfied(constraint: ReleaseConstraint, assignment: Mapping[str, int],
              durations: Mapping[str, int] = None) -> bool:
    """Evaluate one constraint against a complete assignment."""
    c, a = constraint, assignment
    k = c.kind
    if k is ConstraintKind.ASSIGN:
        return a[c.req_a] == c.value
    if k is ConstraintKind.BEFORE:
        return a[c.req_a] < a[c.req_b]
    if k is ConstraintKind.NOT_BEFORE:
        return a[c.req_a] <= a[c.req_b]
    if k is ConstraintKind.DIFFERENT:
        return a[c.req_a] != a[c.req_b]
    if k is ConstraintKind.AT_MOST:
        return a[c.req_a] <= c.value
    if k is ConstraintKind.AT_LEAST:
        return a[c.req_a] >= c.value
    if k is ConstraintKind.EXCLUDES_ONE:
        return a[c.req_a] == c.value or a[c.req_b] == c.value
    if k is ConstraintKind.TIMELY:
        return abs(a[c.req_a] - a[c.req_b]) <= c.value
    if k is ConstraintKind.CAPACITY:
        return sum(1 for v in a.values() if v == c.release) <= c.value
    if k is ConstraintKind.EFFORT:
        durations = durations or {}
        return sum(durations.get(r, 0) for r, v in a.items() if v == c.release) <= c.value
    raise ValueError(f"unknown constraint kind {k}")


def solve(csp: Csp, include_soft: bool = False) -> Optional[dict[str, int]]:
    """Return a satisfying assignment or None (UNSAT). Complete and deterministic."""
    constraints = list(csp.hard) + (list(csp.soft) if include_soft else [])
    return _search(csp.variables, constraints, csp.durations)


def check_consistency(background: Sequence[ReleaseConstraint],
                      candidate: Sequence[ReleaseConstraint],
                      variables: Sequence[ReleaseVar],
                      durations: Mapping[str, int] = None) -> bool:
    """True iff background plus candidate admits at least one assignment."""
    return _search(variables, list(background) + list(candidate), durations or {}) is not None


def _search(variables, constraints, durations):
    domains = {v.requirement_id: sorted(v.domain) for v in variables}
    # node consistency for unary constraints
    for c in constraints:
        if c.kind is ConstraintKind.ASSIGN:
            domains[c.req_a] = [x for x in domains[c.req_a] if x == c.value]
        elif c.kind is ConstraintKind.AT_MOST:
            domains[c.req_a] = [x for x in domains[c.req_a] if x <= c.value]
        elif c.kind is ConstraintKind.AT_LEAST:
            domains[c.req_a] = [x for x in domains[c.req_a] if x >= c.value]
    if any(not d for d in domains.values()):
        return None

    binary = [c for c in constraints if c.kind in (
        ConstraintKind.BEFORE, ConstraintKind.NOT_BEFORE, ConstraintKind.DIFFERENT,
        ConstraintKind.EXCLUDES_ONE, ConstraintKind.TIMELY)]
    global_cs = [c for c in constraints if c.kind in (ConstraintKind.CAPACITY,
                                                      ConstraintKind.EFFORT)]
    assignment: dict[str, int] = {}

    def prune(var, value):
        """Forward-check after var := value; returns removals to undo, or None on wipeout."""
        removed = []

        def restrict(target, keep):
            if target in assignment:
                return keep(assignment[target])
            old = domains[target]
            new = [x for x in old if keep(x)]
            if len(new) != len(old):
                removed.append((target, old))
                domains[target] = new
            return bool(new)

        ok = True
        for c in binary:
            if c.kind is ConstraintKind.EXCLUDES_ONE:
                if var == c.req_a and value != c.value:
                    ok = restrict(c.req_b, lambda x: x == c.value)
                elif var == c.req_b and value != c.value:
                    ok = restrict(c.req_a, lambda x: x == c.value)
            elif var == c.req_a:
                if c.kind is ConstraintKind.BEFORE:
                    ok = restrict(c.req_b, lambda x: x > value)
                elif c.kind is ConstraintKind.NOT_BEFORE:
                    ok = restrict(c.req_b, lambda x: x >= value)
                elif c.kind is ConstraintKind.DIFFERENT:
                    ok = restrict(c.req_b, lambda x: x != value)
                elif c.kind is ConstraintKind.TIMELY:
                    ok = restrict(c.req_b, lambda x: abs(x - value) <= c.value)
            elif var == c.req_b:
                if c.kind is ConstraintKind.BEFORE:
                    ok = restrict(c.req_a, lambda x: x < value)
                elif c.kind is ConstraintKind.NOT_BEFORE:
                    ok = restrict(c.req_a, lambda x: x <= value)
                elif c.kind is ConstraintKind.DIFFERENT:
                    ok = restrict(c.req_a, lambda x: x != value)
                elif c.kind is ConstraintKind.TIMELY:
                    ok = restrict(c.req_a, lambda x: abs(x - value) <= c.value)
            if not ok:
                return removed, False
        for c in global_cs:
            if c.kind is ConstraintKind.CAPACITY:
                count = sum(1 for v in assignment.values() if v == c.release)
                if count > c.value:
                    return removed, False
                if count == c.value:
                    for other in domains:
                        if other not in assignment:
                            if not restrict(other, lambda x: x != c.release):
                                return removed, False
            else:  # EFFORT
                used = sum(durations.get(r, 0) for r, v in assignment.items()
                           if v == c.release)
                if used > c.value:
                    return removed, False
                for other in domains:
                    if other not in assignment:
                        slack = c.value - used - durations.get(other, 0)
                        if slack < 0:
                            if not restrict(other, lambda x: x != c.release):
                                return removed, False
        return removed, True

    def backtrack():
        if len(assignment) == len(domains):
            return True
        # minimum remaining values, ties by ascending id
        var = min((v for v in domains if v not in assignment),
                  key=lambda v: (len(domains[v]), v))
        for value in list(domains[var]):
            assignment[var] = value
            removed, ok = prune(var, value)
            if ok and backtrack():
                return True
            # a prune pass may shrink one domain several times; restore newest
            # first so the oldest snapshot wins
            for target, old in reversed(removed):
                domains[target] = old
            del assignment[var]
        return False

    if not backtrack():
        return None
    # cheap safety net: the assignment must pass the declarative evaluator
    assert all(satisfied(c, assignment, durations) for c in constraints)
    return dict(sorted(assignment.items()))


def _assert_background_consistent(background, variables, durations):
    if not check_consistency(background, [], variables, durations):
        raise InconsistentBackground("hard constraints are unsatisfiable on their own")


def min_conflict(background: Sequence[ReleaseConstraint],
                 soft: Sequence[ReleaseConstraint],
                 variables: Sequence[ReleaseVar],
                 durations: Mapping[str, int] = None) -> Optional[tuple[ReleaseConstraint, ...]]:
    """One minimal conflict among the ordered soft constraints, or None if consistent.

    Divide-and-conquer preferred-conflict extraction: the result depends on the
    soft ordering, which callers fix (stakeholder-major, requirement-minor).
    """
    durations = durations or {}
    _assert_background_consistent(background, variables, durations)
    soft = list(soft)
    if check_consistency(background, soft, variables, durations):
        return None

    def consistent_with(extra):
        return check_consistency(background, extra, variables, durations)

    def qx(base, delta, candidates):
        if delta and not consistent_with(base):
            return []
        if len(candidates) == 1:
            return list(candidates)
        half = len(candidates) // 2
        c1, c2 = candidates[:half], candidates[half:]
        d2 = qx(base + c1, c1, c2)
        d1 = qx(base + d2, d2, c1)
        return d1 + d2

    conflict = qx([], [], soft)
    return tuple(c for c in soft if c in conflict)


def all_min_conflicts(background: Sequence[ReleaseConstraint],
                      soft: Sequence[ReleaseConstraint],
                      variables: Sequence[ReleaseVar],
                      limit: int = 64,
                      durations: Mapping[str, int] = None) -> list[tuple[ReleaseConstraint, ...]]:
    """Enumerate minimal conflicts via a breadth-first hitting-set tree.

    Exhaustive at desk scale; capped at `limit` conflicts.
    """
    durations = durations or {}
    _assert_background_consistent(background, variables, durations)
    soft = list(soft)
    conflicts: list[tuple[ReleaseConstraint, ...]] = []
    seen_sets: set[frozenset] = set()
    queue = deque([frozenset()])
    explored: set[frozenset] = set()
    while queue and len(conflicts) < limit:
        removed = queue.popleft()
        if removed in explored:
            continue
        explored.add(removed)
        remaining = [c for c in soft if c not in removed]
        conflict = min_conflict(background, remaining, variables, durations)
        if conflict is None:
            continue
        key = frozenset(conflict)
        if key not in seen_sets:
            seen_sets.add(key)
            conflicts.append(conflict)
        for c in conflict:
            queue.append(removed | {c})
    return conflicts


def min_diagnosis(background: Sequence[ReleaseConstraint],
                  soft: Sequence[ReleaseConstraint],
                  variables: Sequence[ReleaseVar],
                  durations: Mapping[str, int] = None) -> Optional[tuple[ReleaseConstraint, ...]]:
    """A minimal set of soft constraints whose removal restores consistency.

    None iff background plus soft is already consistent.
    """
    durations = durations or {}
    _assert_background_consistent(background, variables, durations)
    soft = list(soft)
    if check_consistency(background, soft, variables, durations):
        return None

    def consistent_with(kept):
        return check_consistency(background, kept, variables, durations)

    def fd(last_removed, candidates, context):
        # context = soft constraints still asserted alongside the background
        if last_removed and consistent_with(context):
            return []
        if len(candidates) == 1:
            return list(candidates)
        half = len(candidates) // 2
        c1, c2 = candidates[:half], candidates[half:]
        d1 = fd(c1, c2, [c for c in context if c not in c1])
        d2 = fd(d1, c1, [c for c in context if c not in d1])
        return d1 + d2

    diagnosis = fd([], soft, soft)
    return tuple(c for c in soft if c in diagnosis)


def conflict_oracle(background: Sequence[ReleaseConstraint],
                    soft: Sequence[ReleaseConstraint],
                    variables: Sequence[ReleaseVar],
                    durations: Mapping[str, int] = None) -> list[frozenset]:
    """All inclusion-minimal conflicts by subset enumeration; |soft| <= 12."""
    durations = durations or {}
    soft = list(soft)
    if len(soft) > 12:
        raise TooLarge(f"conflict_oracle handles at most 12 soft constraints, got {len(soft)}")
    _assert_background_consistent(background, variables, durations)
    minimal: list[frozenset] = []
    for size in range(1, len(soft) + 1):
        for combo in combinations(soft, size):
            chosen = frozenset(combo)
            if any(m <= chosen for m in minimal):
                continue
            if not check_consistency(background, list(combo), variables, durations):
                minimal.append(chosen)
    return minimal
