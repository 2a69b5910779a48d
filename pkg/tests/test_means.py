import math

import numpy as np
import pytest

from pmean.errors import EmptyInput
from pmean.means import NEG_INF, check_allocation, p_mean, p_mean_welfare, parse_exponent
from pmean.valuations import Additive, Instance

P_GRID = [NEG_INF, -30.0, -4.0, -1.0, -0.5, -1e-5, 0.0, 1e-5, 0.25, 0.5, 1.0]


def random_vector(rng, max_len=8):
    n = int(rng.integers(1, max_len + 1))
    return list(np.exp(rng.uniform(math.log(1e-3), math.log(1e3), n)))


def test_all_equal_is_fixed_point():
    for p in P_GRID:
        assert p_mean([3, 3, 3], p) == pytest.approx(3.0, rel=1e-12)


def test_geometric_mean_limit():
    assert p_mean([2, 8], 0.0) == pytest.approx(4.0, rel=1e-12)


def test_negative_infinity_is_min():
    assert p_mean([1, 2, 4], NEG_INF) == 1.0


def test_zero_value_forces_zero_for_nonpositive_p():
    assert p_mean([0, 5], -1.0) == 0.0
    assert p_mean([0, 5], 0.0) == 0.0
    assert p_mean([0, 5], NEG_INF) == 0.0


def test_zero_values_contribute_nothing_for_positive_p():
    # ((1/3) * 5^0.5)^(1/0.5), computed directly
    expected = (5**0.5 / 3) ** 2
    assert p_mean([0, 0, 5], 0.5) == pytest.approx(expected, rel=1e-12)


def test_empty_input_raises():
    with pytest.raises(EmptyInput):
        p_mean([], 1.0)


def test_negative_values_rejected():
    with pytest.raises(ValueError):
        p_mean([1, -2], 1.0)


def test_exponent_above_one_rejected():
    with pytest.raises(ValueError):
        p_mean([1, 2], 2.0)


def test_monotone_in_exponent():
    rng = np.random.default_rng(0)
    for _ in range(300):
        x = random_vector(rng)
        vals = [p_mean(x, p) for p in P_GRID]
        for lo, hi in zip(vals, vals[1:]):
            assert lo <= hi + 1e-9


def test_scale_equivariance():
    rng = np.random.default_rng(1)
    for _ in range(100):
        x = random_vector(rng)
        c = float(np.exp(rng.uniform(-3, 3)))
        for p in P_GRID:
            assert p_mean([c * xi for xi in x], p) == pytest.approx(
                c * p_mean(x, p), rel=1e-9
            )


def test_permutation_invariance():
    rng = np.random.default_rng(2)
    for _ in range(50):
        x = random_vector(rng)
        shuffled = list(x)
        rng.shuffle(shuffled)
        for p in P_GRID:
            assert p_mean(shuffled, p) == pytest.approx(p_mean(x, p), rel=1e-12)


def test_continuity_at_zero_exponent():
    rng = np.random.default_rng(3)
    for _ in range(200):
        x = random_vector(rng)
        m0 = p_mean(x, 0.0)
        assert abs(p_mean(x, 1e-6) - m0) <= 1e-4 * m0


def test_small_exponent_band_agrees_with_exact_two_point_form():
    # closed form for two values: M_p = ((a^p + b^p)/2)^(1/p), via mpmath-free
    # high-precision route: evaluate with exact logs at p where the raw formula
    # would cancel
    a, b = 2.0, 3.0
    p = 1e-6
    got = p_mean([a, b], p)
    # second-order expansion around 0: exact to ~1e-13 here
    la, lb = math.log(a), math.log(b)
    mean_l = (la + lb) / 2
    var_l = ((la - mean_l) ** 2 + (lb - mean_l) ** 2) / 2
    expected = math.exp(mean_l + p * var_l / 2)
    assert got == pytest.approx(expected, rel=1e-10)


def test_minimum_proxy_tracks_true_bound():
    # M_{-30} sits within min * n^(1/30); the gap is attained when all other
    # entries dwarf the minimum, so only short vectors stay within 5%.
    rng = np.random.default_rng(4)
    for _ in range(300):
        x = random_vector(rng)
        n = len(x)
        lo = min(x)
        proxy = p_mean(x, -30.0)
        assert lo <= proxy + 1e-12
        assert proxy <= lo * n ** (1 / 30) * (1 + 1e-9)
    for _ in range(100):
        x = random_vector(rng, max_len=4)
        lo = min(x)
        assert abs(p_mean(x, -30.0) - lo) <= 0.05 * lo


def test_parse_exponent_tokens():
    assert parse_exponent("-inf") == NEG_INF
    assert parse_exponent("0") == 0.0
    assert parse_exponent("0.4") == 0.4
    assert parse_exponent(" -1 ") == -1.0
    for bad in ("2", "inf", "nan", "egal"):
        with pytest.raises(ValueError):
            parse_exponent(bad)


def test_welfare_single_agent_is_total_value():
    inst = Instance(1, Additive((4, 6)))
    for p in P_GRID:
        assert p_mean_welfare(inst, (0b11,), p) == pytest.approx(10.0)


def test_welfare_examples():
    inst = Instance(2, Additive((10, 1, 1, 1)))
    alloc = (0b0001, 0b1110)
    assert p_mean_welfare(inst, alloc, 1.0) == pytest.approx(6.5)
    assert p_mean_welfare(inst, alloc, NEG_INF) == pytest.approx(3.0)


def test_check_allocation_rejects_bad_partitions():
    with pytest.raises(ValueError):
        check_allocation((0b01, 0b01), 2)  # overlap
    with pytest.raises(ValueError):
        check_allocation((0b01,), 2)  # uncovered good
    with pytest.raises(ValueError):
        check_allocation((), 0)
    check_allocation((0b01, 0b10, 0), 2)  # empty bundles are fine
