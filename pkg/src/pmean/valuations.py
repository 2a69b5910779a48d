"""Shared valuation function over indivisible goods: families, value and demand queries.

Subsets of goods are bitmasks over indices 0..m-1 (bit j set <=> good j in the
subset).  Exact, enumerating backends require m <= 63 and declare tighter caps
where they tabulate all 2^m subsets.  All welfare and threshold comparisons in
this package use the absolute tolerance EPS = 1e-9.

Valuations are immutable after construction; every operation here is a pure
function and safe to call concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import SizeLimitExceeded

EPS = 1e-9

AXIOM_SCAN_MAX_GOODS = 12
BUDGET_ADDITIVE_DEMAND_MAX_GOODS = 24
EXPLICIT_MAX_GOODS = 16
BITMASK_MAX_GOODS = 63


def full_set(m: int) -> int:
    """Bitmask of all m goods."""
    return (1 << m) - 1


def iter_goods(subset: int) -> Iterator[int]:
    """Yield the good indices present in a bitmask, ascending."""
    while subset:
        low = subset & -subset
        yield low.bit_length() - 1
        subset ^= low


def goods_of(subset: int) -> list[int]:
    return list(iter_goods(subset))


def mask_of(goods: Sequence[int]) -> int:
    mask = 0
    for j in goods:
        mask |= 1 << j
    return mask


def _check_subset(subset: int, m: int) -> None:
    if subset < 0 or subset >> m:
        raise ValueError(f"subset {subset:#x} has bits outside 0..{m - 1}")


def _check_weights(weights: Sequence[float]) -> tuple[float, ...]:
    out = tuple(float(w) for w in weights)
    if any(w < 0.0 for w in out):
        raise ValueError("weights must be nonnegative")
    return out


@dataclass(frozen=True)
class Additive:
    """v(S) = sum of per-good weights in S."""

    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", _check_weights(self.weights))

    @property
    def m(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class BudgetAdditive:
    """v(S) = min(cap, sum of weights in S)."""

    weights: tuple[float, ...]
    cap: float

    def __post_init__(self):
        object.__setattr__(self, "weights", _check_weights(self.weights))
        object.__setattr__(self, "cap", float(self.cap))
        if self.cap < 0.0:
            raise ValueError("cap must be nonnegative")

    @property
    def m(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class Xos:
    """v(S) = max over clauses (additive weight vectors) of the clause sum on S."""

    clauses: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        clauses = tuple(_check_weights(c) for c in self.clauses)
        if not clauses:
            raise ValueError("need at least one clause")
        if len({len(c) for c in clauses}) != 1:
            raise ValueError("all clauses must have the same length")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses[0])


@dataclass(frozen=True)
class ExplicitTable:
    """v(S) = table[S], a dense table indexed by bitmask (m <= 16).

    The only family whose instances may violate normalization, monotonicity or
    subadditivity; run check_axioms to verify a given table.
    """

    table: tuple[float, ...]

    def __post_init__(self):
        table = tuple(float(x) for x in self.table)
        size = len(table)
        if size == 0 or size & (size - 1):
            raise ValueError("table length must be a power of two")
        if size > (1 << EXPLICIT_MAX_GOODS):
            raise SizeLimitExceeded(
                f"explicit tables support at most {EXPLICIT_MAX_GOODS} goods"
            )
        if any(x < 0.0 for x in table):
            raise ValueError("table values must be nonnegative")
        object.__setattr__(self, "table", table)

    @property
    def m(self) -> int:
        return len(self.table).bit_length() - 1


Valuation = Union[Additive, BudgetAdditive, Xos, ExplicitTable]


@dataclass(frozen=True)
class Instance:
    """n agents sharing one valuation over the valuation's goods."""

    n: int
    valuation: Valuation

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one agent")
        if self.valuation.m > BITMASK_MAX_GOODS:
            raise SizeLimitExceeded(f"at most {BITMASK_MAX_GOODS} goods supported")

    @property
    def m(self) -> int:
        return self.valuation.m


def _mask_sum(vec: Sequence[float], subset: int) -> float:
    total = 0.0
    for j in iter_goods(subset):
        total += vec[j]
    return total


def value(v: Valuation, subset: int) -> float:
    """Value query: v(S) for a bitmask S."""
    _check_subset(subset, v.m)
    if isinstance(v, Additive):
        return _mask_sum(v.weights, subset)
    if isinstance(v, BudgetAdditive):
        return min(v.cap, _mask_sum(v.weights, subset))
    if isinstance(v, Xos):
        return max(_mask_sum(c, subset) for c in v.clauses)
    return v.table[subset]


def _subset_sums(vec: Sequence[float]) -> np.ndarray:
    """All 2^len(vec) subset sums, indexed by bitmask."""
    sums = np.zeros(1)
    for w in vec:
        sums = np.concatenate([sums, sums + w])
    return sums


def value_table(v: Valuation) -> np.ndarray:
    """Dense table of v over all 2^m subsets (requires small m)."""
    if v.m > BUDGET_ADDITIVE_DEMAND_MAX_GOODS:
        raise SizeLimitExceeded(f"cannot tabulate {v.m} goods")
    if isinstance(v, Additive):
        return _subset_sums(v.weights)
    if isinstance(v, BudgetAdditive):
        return np.minimum(v.cap, _subset_sums(v.weights))
    if isinstance(v, Xos):
        return np.max([_subset_sums(c) for c in v.clauses], axis=0)
    return np.asarray(v.table, dtype=float)


def demand(v: Valuation, prices: Sequence[float]) -> tuple[int, float]:
    """Demand query: a subset S maximizing v(S) - sum of prices over S, and that utility.

    Prices may be negative.  Additive valuations take every good with weight >=
    price; XOS valuations solve each clause that way and return the best
    clause's set.  BudgetAdditive and ExplicitTable fall back to exhaustive
    subset search (caps of 24 and 16 goods), breaking utility ties toward the
    larger bitmask so that an all-zero price vector yields the full set.
    """
    prices = [float(p) for p in prices]
    if len(prices) != v.m:
        raise ValueError(f"expected {v.m} prices, got {len(prices)}")

    if isinstance(v, Additive):
        subset = mask_of(j for j, w in enumerate(v.weights) if w >= prices[j])
        return subset, _mask_sum(v.weights, subset) - _mask_sum(prices, subset)

    if isinstance(v, Xos):
        best_subset, best_util = 0, float("-inf")
        for clause in v.clauses:
            subset = mask_of(j for j, w in enumerate(clause) if w >= prices[j])
            util = _mask_sum(clause, subset) - _mask_sum(prices, subset)
            if util > best_util:
                best_subset, best_util = subset, util
        # the winning clause attains v on its own demanded set, so best_util
        # equals value(best_subset) - prices(best_subset)
        return best_subset, best_util

    if isinstance(v, BudgetAdditive) and v.m > BUDGET_ADDITIVE_DEMAND_MAX_GOODS:
        raise SizeLimitExceeded(
            f"budget-additive demand enumerates subsets; m <= "
            f"{BUDGET_ADDITIVE_DEMAND_MAX_GOODS} required"
        )
    utilities = value_table(v) - _subset_sums(prices)
    # highest mask among ties: monotone valuations then demand the full set at zero prices
    flipped = int(np.argmax(utilities[::-1]))
    subset = len(utilities) - 1 - flipped
    return subset, float(utilities[subset])


@dataclass(frozen=True)
class AxiomReport:
    normalized: bool
    monotone: bool
    subadditive: bool

    @property
    def all_ok(self) -> bool:
        return self.normalized and self.monotone and self.subadditive


def check_axioms(v: Valuation) -> AxiomReport:
    """Exhaustively verify normalization, monotonicity and subadditivity.

    Monotonicity is checked over single-good extensions (equivalent to the full
    subset order) and subadditivity over all 4^m subset pairs, so m <= 12.
    """
    if v.m > AXIOM_SCAN_MAX_GOODS:
        raise SizeLimitExceeded(
            f"axiom scan enumerates subset pairs; m <= {AXIOM_SCAN_MAX_GOODS} required"
        )
    table = value_table(v)
    normalized = table[0] == 0.0

    masks = np.arange(1 << v.m)
    monotone = True
    for j in range(v.m):
        without = masks[(masks >> j) & 1 == 0]
        if not np.all(table[without] <= table[without | (1 << j)] + EPS):
            monotone = False
            break

    subadditive = True
    for a in masks:
        if not np.all(table[a | masks] <= table[a] + table + EPS):
            subadditive = False
            break

    return AxiomReport(bool(normalized), monotone, subadditive)


def restrict(v: Valuation, goods: Sequence[int]) -> Valuation:
    """Same-family valuation over the listed goods, re-indexed to 0..len(goods)-1."""
    goods = list(goods)
    if len(set(goods)) != len(goods):
        raise ValueError("duplicate goods in restriction")
    for j in goods:
        if not 0 <= j < v.m:
            raise ValueError(f"good {j} out of range")
    if isinstance(v, Additive):
        return Additive(tuple(v.weights[j] for j in goods))
    if isinstance(v, BudgetAdditive):
        return BudgetAdditive(tuple(v.weights[j] for j in goods), v.cap)
    if isinstance(v, Xos):
        return Xos(tuple(tuple(c[j] for j in goods) for c in v.clauses))
    k = len(goods)
    sub = np.arange(1 << k)
    expanded = np.zeros(1 << k, dtype=np.int64)
    for new_j, orig_j in enumerate(goods):
        expanded |= ((sub >> new_j) & 1) << orig_j
    table = np.asarray(v.table)[expanded]
    return ExplicitTable(tuple(float(x) for x in table))


# ---------------------------------------------------------------------------
# instance files
#
# JSON layout: {"n": int, "valuation": {"type": ..., ...}} with the table of an
# explicit valuation indexed by bitmask (good j at bit j).


def valuation_to_dict(v: Valuation) -> dict:
    if isinstance(v, Additive):
        return {"type": "additive", "weights": list(v.weights)}
    if isinstance(v, BudgetAdditive):
        return {"type": "budget_additive", "weights": list(v.weights), "cap": v.cap}
    if isinstance(v, Xos):
        return {"type": "xos", "clauses": [list(c) for c in v.clauses]}
    return {"type": "explicit", "table": list(v.table)}


def valuation_from_dict(data: dict) -> Valuation:
    kind = data.get("type")
    if kind == "additive":
        return Additive(tuple(data["weights"]))
    if kind == "budget_additive":
        return BudgetAdditive(tuple(data["weights"]), data["cap"])
    if kind == "xos":
        return Xos(tuple(tuple(c) for c in data["clauses"]))
    if kind == "explicit":
        return ExplicitTable(tuple(data["table"]))
    raise ValueError(f"unknown valuation type: {kind!r}")


def instance_to_dict(inst: Instance) -> dict:
    return {"n": inst.n, "valuation": valuation_to_dict(inst.valuation)}


def instance_from_dict(data: dict) -> Instance:
    return Instance(int(data["n"]), valuation_from_dict(data["valuation"]))


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2, sort_keys=True) + "\n")


def load_instance(path: str | Path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))
