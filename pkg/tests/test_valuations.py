import itertools

import numpy as np
import pytest

from pmean.errors import SizeLimitExceeded
from pmean.valuations import (
    Additive,
    BudgetAdditive,
    ExplicitTable,
    Instance,
    Xos,
    check_axioms,
    demand,
    full_set,
    goods_of,
    instance_from_dict,
    instance_to_dict,
    iter_goods,
    restrict,
    value,
    value_table,
)


from helpers import FAMILIES, brute_demand, random_valuation


def test_value_additive():
    assert value(Additive((3, 1, 2)), 0b101) == 5


@pytest.mark.parametrize("family", FAMILIES)
def test_value_of_empty_set_is_zero(family):
    v = random_valuation(family, np.random.default_rng(7), 5)
    assert value(v, 0) == 0.0


def test_value_xos_takes_best_clause():
    v = Xos(((1, 0, 0), (0, 1, 1)))
    # both clause sums on the full set, independently: 1 and 2
    assert value(v, 0b111) == 2


def test_demand_additive_example():
    subset, util = demand(Additive((3, 1)), [2, 2])
    # brute force over the 4 subsets: {} -> 0, {0} -> 1, {1} -> -1, {0,1} -> 0
    assert subset == 0b01
    assert util == pytest.approx(1.0)


@pytest.mark.parametrize("family", FAMILIES)
def test_demand_zero_prices_takes_everything(family):
    v = random_valuation(family, np.random.default_rng(11), 6)
    subset, util = demand(v, [0.0] * v.m)
    assert subset == full_set(v.m)
    assert util == pytest.approx(value(v, subset))


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("seed", range(6))
def test_demand_matches_brute_force(family, seed):
    rng = np.random.default_rng(200 + seed)
    v = random_valuation(family, rng, 8)
    for _ in range(10):
        prices = [round(float(x), 6) for x in rng.uniform(-30, 120, v.m)]
        subset, util = demand(v, prices)
        _, best = brute_demand(v, prices)
        assert util == pytest.approx(best, abs=1e-9)
        attained = value(v, subset) - sum(prices[j] for j in iter_goods(subset))
        assert attained == pytest.approx(util, abs=1e-9)


@pytest.mark.parametrize("clause_count", (1, 2, 5, 9))
def test_xos_demand_matches_brute_force_any_clause_count(clause_count):
    rng = np.random.default_rng(40 + clause_count)
    v = random_valuation("xos", rng, 10, clause_count)
    for _ in range(8):
        prices = [float(x) for x in rng.uniform(-20, 120, v.m)]
        _, util = demand(v, prices)
        _, best = brute_demand(v, prices)
        assert util == pytest.approx(best, abs=1e-9)


def test_budget_additive_demand_size_cap():
    v = BudgetAdditive((1.0,) * 25, 5.0)
    with pytest.raises(SizeLimitExceeded):
        demand(v, [0.0] * 25)


def test_check_axioms_additive_always_clean():
    report = check_axioms(Additive((4, 0, 2.5)))
    assert report.normalized and report.monotone and report.subadditive


def test_check_axioms_flags_constructed_violation():
    report = check_axioms(ExplicitTable((0, 1, 1, 3)))  # v({0,1}) = 3 > 1 + 1
    assert report.normalized and report.monotone
    assert not report.subadditive


def test_check_axioms_scans_all_pairs():
    report = check_axioms(ExplicitTable((0, 2, 1, 2)))
    assert report.monotone and report.subadditive


def test_check_axioms_size_cap():
    with pytest.raises(SizeLimitExceeded):
        check_axioms(Additive((1.0,) * 13))


@pytest.mark.parametrize("family", FAMILIES)
def test_axiom_invariants_on_random_instances(family):
    rng = np.random.default_rng(91)
    v = random_valuation(family, rng, 7)
    assert check_axioms(v).all_ok
    table = value_table(v)
    masks = np.arange(1 << v.m)
    for a in (0b1, 0b101, 0b1110001, 0b0110110):
        assert np.all(table[a | masks] <= table[a] + table + 1e-9)


def test_constructors_reject_negative_weights():
    with pytest.raises(ValueError):
        Additive((1.0, -0.5))
    with pytest.raises(ValueError):
        Xos(((1.0, -1.0),))
    with pytest.raises(ValueError):
        BudgetAdditive((1.0,), -2.0)


def test_explicit_table_needs_power_of_two():
    with pytest.raises(ValueError):
        ExplicitTable((0, 1, 2))


def test_value_rejects_out_of_range_subset():
    with pytest.raises(ValueError):
        value(Additive((1, 2)), 0b100)


def test_restrict_matches_expanded_subsets():
    rng = np.random.default_rng(5)
    for family in FAMILIES:
        v = random_valuation(family, rng, 8)
        goods = [1, 3, 4, 7]
        sub = restrict(v, goods)
        for local in range(1 << len(goods)):
            expanded = 0
            for j in iter_goods(local):
                expanded |= 1 << goods[j]
            assert value(sub, local) == pytest.approx(value(v, expanded), abs=1e-12)


def test_large_m_demand_for_non_enumerating_families():
    m = 40
    weights = tuple(float(j % 7) for j in range(m))
    subset, util = demand(Additive(weights), [3.0] * m)
    assert goods_of(subset) == [j for j in range(m) if j % 7 >= 3]
    assert util == pytest.approx(sum(w - 3.0 for w in weights if w >= 3.0))


def test_instance_round_trip(tmp_path):
    rng = np.random.default_rng(17)
    for family in FAMILIES:
        inst = Instance(3, random_valuation(family, rng, 5))
        data = instance_to_dict(inst)
        again = instance_from_dict(data)
        assert again == inst
