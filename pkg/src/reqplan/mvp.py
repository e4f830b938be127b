"""Maximum-utility requirement selection under a time budget (0/1 knapsack).

Exact in two phases: dynamic programming over integer time finds the optimal
(max utility, min total time), then a greedy pass reconstructs the
lexicographically smallest id set achieving that optimum. The usual
single-representative DP shortcut is not sound for the id tie-break (a
zero-utility, zero-time item with an early id can make a tied selection
lexicographically smaller), so each greedy choice is validated against the
exact target instead.

Tie-breaking everywhere: higher utility, then smaller total time, then
lexicographically smallest sorted id tuple. Both routes process items in
ascending id order and accumulate utility along that order, so their float
arithmetic is bit-identical and oracle comparisons are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import TooLarge

ORACLE_MAX_ITEMS = 20


@dataclass(frozen=True)
class MvpItem:
    requirement_id: str
    utility: float
    time: int


@dataclass(frozen=True)
class MvpProblem:
    items: tuple[MvpItem, ...]
    maxtime: int

    def __post_init__(self):
        seen = set()
        for item in self.items:
            if item.requirement_id in seen:
                raise ValueError(f"duplicate requirement id {item.requirement_id!r}")
            seen.add(item.requirement_id)
            if not math.isfinite(item.utility) or item.utility < 0:
                raise ValueError(f"utility of {item.requirement_id!r} must be a "
                                 f"finite non-negative number, got {item.utility}")
            if item.time < 0:
                raise ValueError(f"time of {item.requirement_id!r} must be "
                                 f"non-negative, got {item.time}")


@dataclass(frozen=True)
class MvpSolution:
    selected: frozenset[str]
    total_utility: float
    total_time: int


def select_mvp(problem: MvpProblem) -> MvpSolution:
    """Exact optimum: maximize utility subject to total time <= maxtime."""
    maxtime = max(problem.maxtime, 0)
    items = sorted(problem.items, key=lambda it: it.requirement_id)

    # phase 1: best (utility, -time) per budget; both components shift equally
    # under extension, so per-cell dominance is safe for them
    best = [(0.0, 0) for _ in range(maxtime + 1)]
    for item in items:
        if item.time > maxtime:
            continue
        for t in range(maxtime, item.time - 1, -1):
            u, used = best[t - item.time]
            cand = (u + item.utility, used + item.time)
            if (-cand[0], cand[1]) < (-best[t][0], best[t][1]):
                best[t] = cand
    target_u, target_t = best[maxtime]

    # phase 2: lexicographically smallest id set reaching the target exactly;
    # accumulating (never subtracting) keeps the float paths identical to phase 1
    @lru_cache(maxsize=None)
    def reachable(pos: int, u: float, t: int) -> bool:
        if u == target_u and t == target_t:
            return True
        if pos == len(items):
            return False
        item = items[pos]
        if (t + item.time <= target_t
                and reachable(pos + 1, u + item.utility, t + item.time)):
            return True
        return reachable(pos + 1, u, t)

    chosen = []
    acc_u, acc_t = 0.0, 0
    for pos, item in enumerate(items):
        if acc_u == target_u and acc_t == target_t:
            break  # the empty completion is a prefix of any other, hence smallest
        if (acc_t + item.time <= target_t
                and reachable(pos + 1, acc_u + item.utility, acc_t + item.time)):
            chosen.append(item.requirement_id)
            acc_u += item.utility
            acc_t += item.time
    reachable.cache_clear()
    return MvpSolution(selected=frozenset(chosen), total_utility=target_u,
                       total_time=target_t)


def mvp_oracle(problem: MvpProblem) -> MvpSolution:
    """Brute-force enumeration of all 2^n subsets with identical tie-breaking."""
    n = len(problem.items)
    if n > ORACLE_MAX_ITEMS:
        raise TooLarge(f"oracle handles at most {ORACLE_MAX_ITEMS} items, got {n}")
    items = sorted(problem.items, key=lambda it: it.requirement_id)
    best = (-0.0, 0, ())

    def walk(i, utility, time, ids):
        nonlocal best
        if i == n:
            candidate = (-utility, time, ids)
            if candidate < best:
                best = candidate
            return
        walk(i + 1, utility, time, ids)
        item = items[i]
        if time + item.time <= problem.maxtime:
            walk(i + 1, utility + item.utility, time + item.time,
                 ids + (item.requirement_id,))

    walk(0, 0.0, 0, ())
    neg_utility, time, ids = best
    return MvpSolution(selected=frozenset(ids), total_utility=-neg_utility,
                       total_time=time)
