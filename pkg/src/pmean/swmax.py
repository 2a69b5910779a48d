"""Social-welfare subroutine: allocations with known average-welfare quality.

Both solver phases consult this module for an allocation whose average social
welfare (the f_value) they can trust.  The exact backend enumerates every
labeled partition and is optimal by construction; the greedy backend is a
cheap demand-query heuristic with no claimed guarantee.  A half_approx tag is
reserved for backends that promise at least half the optimal average welfare,
the contract the solver's analysis actually consumes.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded
from .valuations import Instance, demand, full_set, goods_of, restrict, value, value_table

DEFAULT_ENUM_BUDGET = 10_000_000

EXACT = "exact"
GREEDY = "greedy"
BACKENDS = (EXACT, GREEDY)

_CHUNK = 1 << 15


class Guarantee(enum.Enum):
    EXACT = "exact"
    HALF_APPROX = "half_approx"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class SwEstimate:
    alloc: tuple[int, ...]
    f_value: float
    guarantee: Guarantee


def _check_budget(m: int, n: int, budget: int) -> None:
    states = n**m
    if states > budget:
        raise BudgetExceeded(
            f"enumerating {n}^{m} = {states} labeled partitions exceeds budget {budget}"
        )


def enumerate_labeled_partitions(
    m: int, n: int, budget: int = DEFAULT_ENUM_BUDGET
) -> Iterator[tuple[int, ...]]:
    """Yield every assignment of m goods to n labeled bundles exactly once.

    Good 0 is the most significant position: the first agent of good 0 varies
    slowest across the stream.  Single-consumer generator.
    """
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    _check_budget(m, n, budget)
    for assignment in itertools.product(range(n), repeat=m):
        bundles = [0] * n
        for j, agent in enumerate(assignment):
            bundles[agent] |= 1 << j
        yield tuple(bundles)


def _chunk_bundle_masks(m: int, n: int, start: int, stop: int) -> np.ndarray:
    """Bundle bitmasks for partition indices [start, stop): shape (n, stop-start).

    Index encoding matches enumerate_labeled_partitions: the agent of good j is
    digit j of the index in base n, good 0 most significant.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    masks = np.zeros((n, idx.size), dtype=np.int64)
    for j in range(m):
        digit = (idx // n ** (m - 1 - j)) % n
        for agent in range(n):
            masks[agent] |= (digit == agent).astype(np.int64) << j
    return masks


def _decode_partition(index: int, m: int, n: int) -> tuple[int, ...]:
    bundles = [0] * n
    for j in range(m):
        agent = (index // n ** (m - 1 - j)) % n
        bundles[agent] |= 1 << j
    return tuple(bundles)


def _best_partition(inst: Instance, score_rows, budget: int) -> tuple[int, ...]:
    """Scan all labeled partitions, return the first one maximizing score_rows.

    score_rows maps an (n, k) array of bundle values to k scores.  Ties go to
    the lowest partition index, so results are deterministic and chunking (or
    parallel evaluation by index range) cannot change them.
    """
    m, n = inst.m, inst.n
    _check_budget(m, n, budget)
    if n == 1:
        return (full_set(m),)
    table = value_table(inst.valuation)
    states = n**m
    best_score = -math.inf
    best_index = 0
    for start in range(0, states, _CHUNK):
        stop = min(start + _CHUNK, states)
        masks = _chunk_bundle_masks(m, n, start, stop)
        scores = score_rows(table[masks])
        i = int(np.argmax(scores))
        if scores[i] > best_score:
            best_score = float(scores[i])
            best_index = start + i
    return _decode_partition(best_index, m, n)


def _exact_sw(inst: Instance, budget: int) -> SwEstimate:
    alloc = _best_partition(inst, lambda vals: vals.mean(axis=0), budget)
    f = math.fsum(value(inst.valuation, b) for b in alloc) / inst.n
    return SwEstimate(alloc, f, Guarantee.EXACT)


def _greedy_sw(inst: Instance) -> SwEstimate:
    """Deal demand-query picks round-robin: repeatedly query the demanded set of
    the remaining goods at zero prices and hand its goods out one per agent."""
    v = inst.valuation
    bundles = [0] * inst.n
    remaining = goods_of(full_set(inst.m))
    turn = 0
    while remaining:
        sub = restrict(v, remaining)
        picked_local, _ = demand(sub, [0.0] * len(remaining))
        picked = [remaining[j] for j in goods_of(picked_local)] or list(remaining)
        for g in picked:
            bundles[turn % inst.n] |= 1 << g
            turn += 1
        remaining = [g for g in remaining if g not in set(picked)]
    f = math.fsum(value(v, b) for b in bundles) / inst.n
    return SwEstimate(tuple(bundles), f, Guarantee.HEURISTIC)


def sw_estimate(
    inst: Instance, backend: str = EXACT, budget: int = DEFAULT_ENUM_BUDGET
) -> SwEstimate:
    """Allocation plus its average social welfare, per the selected backend.

    exact: true optimum over all labeled partitions (Guarantee.EXACT).
    greedy: demand-query round-robin heuristic (Guarantee.HEURISTIC); its
    quality is measured against the exact backend in tests, never assumed.
    """
    if backend == EXACT:
        return _exact_sw(inst, budget)
    if backend == GREEDY:
        return _greedy_sw(inst)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
