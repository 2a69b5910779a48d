"""Shared test utilities: seeded instance draws and tiny independent oracles."""

import numpy as np

from pmean.valuations import (
    Additive,
    BudgetAdditive,
    ExplicitTable,
    Xos,
    iter_goods,
    value,
)

FAMILIES = ("additive", "budget_additive", "xos", "explicit")


def random_valuation(family, rng, m, clause_count=3):
    weights = lambda: tuple(round(float(x), 6) for x in rng.uniform(0, 100, m))
    if family == "additive":
        return Additive(weights())
    if family == "budget_additive":
        w = weights()
        return BudgetAdditive(w, round(0.6 * sum(w), 6))
    if family == "xos":
        return Xos(tuple(weights() for _ in range(clause_count)))
    x = Xos(tuple(weights() for _ in range(clause_count)))
    return ExplicitTable(tuple(value(x, s) for s in range(1 << m)))


def brute_demand(v, prices):
    """Independent oracle: enumerate every subset, return the best utility."""
    best_util = float("-inf")
    best = 0
    for s in range(1 << v.m):
        util = value(v, s) - sum(prices[j] for j in iter_goods(s))
        if util > best_util:
            best_util, best = util, s
    return best, best_util
