"""Consensus release assignment: repair inconsistent per-stakeholder preferences.

Every requirement gets exactly one release; the search minimizes either the
total number of per-stakeholder changes followed by a fairness term (default),
the fairness term alone, or the fairness-times-total product. The two literal
fairness-only forms are degenerate (any plan with equal per-stakeholder change
counts scores zero, however many changes it needs), which is why the
lexicographic objective is the default; all three remain available.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

from .errors import IncompletePlan, TooLarge

ORACLE_MAX_PLANS = 100_000


class ChangeMetric(Enum):
    INDICATOR = "INDICATOR"  # count preferences that differ from the plan
    DISTANCE = "DISTANCE"    # sum absolute release distances


class FairnessForm(Enum):
    ALL_PAIRS = "ALL_PAIRS"  # sum |chn_i - chn_j| over all stakeholder pairs
    CHAIN = "CHAIN"          # sum over consecutive stakeholders in id order


class Objective(Enum):
    LEX_TOTAL_THEN_FAIRNESS = "LEX_TOTAL_THEN_FAIRNESS"
    FAIRNESS_ONLY_EQ7 = "FAIRNESS_ONLY_EQ7"
    PRODUCT_EQ8 = "PRODUCT_EQ8"


@dataclass(frozen=True)
class ConsensusConfig:
    change_metric: ChangeMetric = ChangeMetric.INDICATOR
    fairness_form: FairnessForm = FairnessForm.ALL_PAIRS
    objective: Objective = Objective.LEX_TOTAL_THEN_FAIRNESS


@dataclass(frozen=True)
class AssignmentPreferences:
    """Dense stakeholder release wishes: (stakeholder_id, requirement_id) -> release.

    Every stakeholder appearing in the table must state every requirement.
    """

    prefs: dict[tuple[str, str], int]
    horizon: int

    def __post_init__(self):
        users = {s for s, _ in self.prefs}
        requirements = {r for _, r in self.prefs}
        for s in sorted(users):
            for r in sorted(requirements):
                if (s, r) not in self.prefs:
                    raise IncompletePlan(f"preference matrix is missing ({s}, {r})")
        for (s, r), release in sorted(self.prefs.items()):
            if not 1 <= release <= self.horizon:
                raise IncompletePlan(f"({s}, {r}) wishes release {release} "
                                     f"outside 1..{self.horizon}")

    def stakeholder_ids(self) -> list[str]:
        return sorted({s for s, _ in self.prefs})

    def requirement_ids(self) -> list[str]:
        return sorted({r for _, r in self.prefs})


@dataclass(frozen=True)
class ConsensusResult:
    plan: dict[str, int]
    change_counts: dict[str, int]
    objective_value: float


def change_counts(prefs: AssignmentPreferences, plan: dict[str, int],
                  cfg: ConsensusConfig = ConsensusConfig()) -> dict[str, int]:
    """Per-stakeholder count (or distance) of preferences the plan overrides."""
    requirements = prefs.requirement_ids()
    for rid in requirements:
        if rid not in plan:
            raise IncompletePlan(f"plan assigns no release to {rid!r}")
        if not 1 <= plan[rid] <= prefs.horizon:
            raise IncompletePlan(
                f"plan assigns {rid!r} release {plan[rid]} outside 1..{prefs.horizon}")
    counts = {}
    for sid in prefs.stakeholder_ids():
        if cfg.change_metric is ChangeMetric.INDICATOR:
            counts[sid] = sum(1 for rid in requirements
                              if prefs.prefs[(sid, rid)] != plan[rid])
        else:
            counts[sid] = sum(abs(prefs.prefs[(sid, rid)] - plan[rid])
                              for rid in requirements)
    return counts


def _fairness(counts: list[int], form: FairnessForm) -> int:
    if form is FairnessForm.CHAIN:
        return sum(abs(counts[i] - counts[i + 1]) for i in range(len(counts) - 1))
    return sum(abs(counts[i] - counts[j])
               for i in range(len(counts)) for j in range(i + 1, len(counts)))


def _lex_base(prefs: AssignmentPreferences, cfg: ConsensusConfig) -> int:
    """A constant exceeding any possible fairness value, to encode the
    (total, fairness) pair as a single number."""
    m = len(prefs.stakeholder_ids())
    r = len(prefs.requirement_ids())
    chn_max = r if cfg.change_metric is ChangeMetric.INDICATOR \
        else r * max(prefs.horizon - 1, 0)
    pairs = m * (m - 1) // 2 if cfg.fairness_form is FairnessForm.ALL_PAIRS else m - 1
    return max(pairs, 0) * chn_max + 1


def evaluate_objective(prefs: AssignmentPreferences, plan: dict[str, int],
                       cfg: ConsensusConfig = ConsensusConfig()) -> float:
    counts = change_counts(prefs, plan, cfg)
    ordered = [counts[s] for s in prefs.stakeholder_ids()]
    total = sum(ordered)
    fair = _fairness(ordered, cfg.fairness_form)
    if cfg.objective is Objective.FAIRNESS_ONLY_EQ7:
        return float(fair)
    if cfg.objective is Objective.PRODUCT_EQ8:
        return float(fair * total)
    return float(total * _lex_base(prefs, cfg) + fair)


def plan_consensus(prefs: AssignmentPreferences,
                   cfg: ConsensusConfig = ConsensusConfig()) -> ConsensusResult:
    """Optimal consensus plan over all n^|reqs| assignments.

    Depth-first branch and bound over requirements in id order with ascending
    release values; under the lexicographic objective the per-requirement
    decomposition of the change total gives the pruning bound. The first
    optimum found is the lexicographically smallest release vector.
    """
    users = prefs.stakeholder_ids()
    requirements = prefs.requirement_ids()
    if not users or not requirements:
        raise ValueError("need at least one stakeholder and one requirement")
    n = prefs.horizon
    releases = range(1, n + 1)
    indicator = cfg.change_metric is ChangeMetric.INDICATOR

    def delta(sid, rid, release):
        p = prefs.prefs[(sid, rid)]
        return (1 if p != release else 0) if indicator else abs(p - release)

    # cheapest possible change contribution of each not-yet-assigned requirement
    per_req_floor = {
        rid: min(sum(delta(s, rid, rel) for s in users) for rel in releases)
        for rid in requirements
    }
    lex = cfg.objective is Objective.LEX_TOTAL_THEN_FAIRNESS
    base = _lex_base(prefs, cfg)

    best_obj = None
    best_plan = None

    def objective_of(counts):
        total = sum(counts)
        fair = _fairness(counts, cfg.fairness_form)
        if cfg.objective is Objective.FAIRNESS_ONLY_EQ7:
            return fair
        if cfg.objective is Objective.PRODUCT_EQ8:
            return fair * total
        return total * base + fair

    def descend(idx, counts, partial_total, floor_rest, assigned):
        nonlocal best_obj, best_plan
        if idx == len(requirements):
            obj = objective_of(counts)
            if best_obj is None or obj < best_obj:
                best_obj = obj
                best_plan = dict(assigned)
            return
        if best_obj is not None:
            bound = (partial_total + floor_rest) * base if lex else 0
            if bound >= best_obj:
                return
        rid = requirements[idx]
        rest = floor_rest - per_req_floor[rid]
        for rel in releases:
            deltas = [delta(s, rid, rel) for s in users]
            assigned[rid] = rel
            descend(idx + 1,
                    [c + d for c, d in zip(counts, deltas)],
                    partial_total + sum(deltas), rest, assigned)
            del assigned[rid]

    descend(0, [0] * len(users), 0, sum(per_req_floor.values()), {})
    counts = change_counts(prefs, best_plan, cfg)
    return ConsensusResult(plan=best_plan, change_counts=counts,
                           objective_value=float(best_obj))


def consensus_oracle(prefs: AssignmentPreferences,
                     cfg: ConsensusConfig = ConsensusConfig()) -> ConsensusResult:
    """Exhaustive enumeration with identical tie-breaking; bounded instance size."""
    users = prefs.stakeholder_ids()
    requirements = prefs.requirement_ids()
    if not users or not requirements:
        raise ValueError("need at least one stakeholder and one requirement")
    n = prefs.horizon
    total_plans = n ** len(requirements)
    if total_plans > ORACLE_MAX_PLANS:
        raise TooLarge(f"{total_plans} plans exceed the oracle bound {ORACLE_MAX_PLANS}")
    best = None
    for combo in product(range(1, n + 1), repeat=len(requirements)):
        plan = dict(zip(requirements, combo))
        obj = evaluate_objective(prefs, plan, cfg)
        if best is None or obj < best[0]:
            best = (obj, plan)
    obj, plan = best
    return ConsensusResult(plan=plan, change_counts=change_counts(prefs, plan, cfg),
                           objective_value=obj)
