"""Brute-force ground truth: exact p-optimal allocations over all labeled partitions.

Deliberately simple so it can be trusted: every partition is scored, ties go to
the lowest enumeration index, and the n^m state count is capped by an explicit
budget rather than sampled.  Enumeration may be split by index range as long as
the lowest-index tie-break is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .means import NEG_INF, p_mean_welfare
from .swmax import DEFAULT_ENUM_BUDGET, _best_partition
from .valuations import EPS, Instance, iter_goods, value


@dataclass(frozen=True)
class OptResult:
    p: float
    alloc: tuple[int, ...]
    welfare: float


def _score_rows(p: float):
    """Vectorized p-mean over the agent axis of an (n, k) value array."""

    def score(vals: np.ndarray) -> np.ndarray:
        n = vals.shape[0]
        if p == NEG_INF:
            return vals.min(axis=0)
        if p == 1.0:
            return vals.mean(axis=0)
        zero_row = (vals == 0.0).any(axis=0)
        with np.errstate(divide="ignore"):
            logs = np.where(vals > 0.0, np.log(np.where(vals > 0.0, vals, 1.0)), -np.inf)
        if p == 0.0:
            out = np.exp(logs.mean(axis=0))
            out[zero_row] = 0.0
            return out
        scaled = p * logs  # p < 0 turns -inf into +inf; zero rows are masked below
        shift = np.max(np.where(np.isfinite(scaled), scaled, -np.inf), axis=0)
        safe_shift = np.where(np.isfinite(shift), shift, 0.0)
        terms = np.exp(np.where(np.isfinite(scaled), scaled - safe_shift, -np.inf))
        with np.errstate(divide="ignore"):
            out = np.exp((safe_shift + np.log(terms.sum(axis=0)) - math.log(n)) / p)
        if p < 0.0:
            out[zero_row] = 0.0
        else:
            out[~np.isfinite(shift)] = 0.0  # all-zero row
        return out

    return score


def p_opt_brute(
    inst: Instance, p: float, budget: int = DEFAULT_ENUM_BUDGET
) -> OptResult:
    """Exact p-optimal allocation by full enumeration (first maximizer wins)."""
    alloc = _best_partition(inst, _score_rows(p), budget)
    return OptResult(p, alloc, p_mean_welfare(inst, alloc, p))


def check_monotonicity(
    inst: Instance, p_grid: Sequence[float], budget: int = DEFAULT_ENUM_BUDGET
) -> bool:
    """True iff the optimal average welfare dominates every grid p's optimum."""
    opt1 = p_opt_brute(inst, 1.0, budget).welfare
    return all(p_opt_brute(inst, p, budget).welfare <= opt1 + EPS for p in p_grid)


def check_structural_lemma(
    inst: Instance, p: float, f_value: float, budget: int = DEFAULT_ENUM_BUDGET
) -> bool:
    """Verify that every very high value bundle of a p-optimal allocation owes
    its value to some single good.

    Computes the exact p-optimum; for every bundle worth more than 11.33 times
    f_value, requires a good in it worth at least a fortieth of the bundle.
    Bundles below the premise threshold are ignored (vacuous).  Only exponents
    below 0.4 (including 0 and -inf) are meaningful here.
    """
    if not (p == NEG_INF or p < 0.4):
        raise ValueError(f"structural check applies to p < 0.4, got {p}")
    opt = p_opt_brute(inst, p, budget)
    v = inst.valuation
    for bundle in opt.alloc:
        worth = value(v, bundle)
        if worth <= 11.33 * f_value + EPS:
            continue
        floor = worth / 40.0 - EPS
        if not any(value(v, 1 << g) >= floor for g in iter_goods(bundle)):
            return False
    return True
