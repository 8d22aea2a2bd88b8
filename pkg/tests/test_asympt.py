"""Classical asymptotic checks: hand-computed partial sums and structure."""

import math

import pytest

from ramasum import (build_table, check_dk_average, check_ingham,
                     check_mertens, check_phi_average, check_weighted_divisor,
                     ingham_sum, weighted_divisor_sum)
from ramasum.asympt import AsymptoticCheck, check_to_csv


@pytest.fixture(scope="module")
def small_tables():
    return {
        "phi": build_table("phi", limit=3000),
        "mertens": build_table("mertens", limit=3000),
        "d2": build_table("divisor_k", param=2, limit=3000),
        "d4": build_table("divisor_k", param=4, limit=3000),
    }


def test_phi_partial_sums(small_tables):
    check = check_phi_average(small_tables["phi"], [1, 10, 100])
    assert check.partial_sums[0] == 1.0
    assert check.model_values[0] == pytest.approx(3.0 / math.pi**2)
    # 1+1+2+2+4+2+6+4+6+4
    assert check.partial_sums[1] == 32.0
    assert check.normalized_deviations[1] == \
        pytest.approx(abs(32.0 - 3.0 / math.pi**2 * 100) / (10 * math.log(10)))


def test_mertens_values(small_tables):
    check = check_mertens(small_tables["mertens"], [1, 10, 100])
    assert check.partial_sums[0] == 1.0
    assert check.partial_sums[1] == -1.0
    assert check.normalized_deviations[1] == pytest.approx(0.1)


def test_dk_partial_sums(small_tables):
    check = check_dk_average(small_tables["d2"], [4, 100])
    # d(1)+d(2)+d(3)+d(4) = 1+2+2+3
    assert check.partial_sums[0] == 8.0
    check4 = check_dk_average(small_tables["d4"], [1, 100])
    assert check4.partial_sums[0] == 1.0
    assert check4.model_values[0] == 0.0  # log 1 = 0


def test_dk_rejects_wrong_table(small_tables):
    with pytest.raises(ValueError):
        check_dk_average(small_tables["phi"], [10])
    t5 = build_table("divisor_k", param=5, limit=100)
    with pytest.raises(ValueError):
        check_dk_average(t5, [10])


def test_weighted_divisor_hand_sums(small_tables):
    d2 = small_tables["d2"]
    assert weighted_divisor_sum(d2, 1, 0.5) == 1.0
    # 1 + 2/2 + 2/3 + 3/4
    assert weighted_divisor_sum(d2, 4, 1.0) == pytest.approx(1 + 1 + 2 / 3 + 0.75)
    with pytest.raises(ValueError):
        weighted_divisor_sum(d2, 10, 0.0)
    with pytest.raises(ValueError):
        weighted_divisor_sum(d2, 10**9, 0.5)


def test_weighted_check_uses_right_shape(small_tables):
    d2 = small_tables["d2"]
    c_half = check_weighted_divisor(d2, [100, 1000], 0.5)
    s = weighted_divisor_sum(d2, 100, 0.5)
    assert c_half.normalized_deviations[0] == pytest.approx(s / (10 * math.log(100)))
    c_one = check_weighted_divisor(d2, [100], 1.0)
    s1 = weighted_divisor_sum(d2, 100, 1.0)
    assert c_one.normalized_deviations[0] == pytest.approx(s1 / math.log(100) ** 2)


def test_ingham_hand_sums(small_tables):
    d2 = small_tables["d2"]
    total, _ = ingham_sum(d2, 3, 1)
    # d(1)d(2) + d(2)d(3) + d(3)d(4) = 2 + 4 + 6
    assert total == 12
    total1, _ = ingham_sum(d2, 1, 1)
    assert total1 == 2
    _, ratio = ingham_sum(d2, 1000, 1)
    model = 6.0 / math.pi**2 * 1000 * math.log(1000) ** 2
    total1000, _ = ingham_sum(d2, 1000, 1)
    assert ratio == pytest.approx(total1000 / model)


def test_ingham_validates(small_tables):
    d2 = small_tables["d2"]
    with pytest.raises(ValueError):
        ingham_sum(d2, 10, 0)
    with pytest.raises(ValueError):
        ingham_sum(d2, d2.limit, 1)  # N + h over the limit


def test_ingham_check_deviation_is_ratio_minus_one(small_tables):
    check = check_ingham(small_tables["d2"], [100, 1000], 1)
    for p, m, d in zip(check.partial_sums, check.model_values,
                       check.normalized_deviations):
        assert d == pytest.approx(abs(p / m - 1.0))


def test_check_grid_validation(small_tables):
    with pytest.raises(ValueError):
        check_phi_average(small_tables["phi"], [10, 10**9])
    with pytest.raises(ValueError):
        check_phi_average(small_tables["phi"], [0, 10])
    with pytest.raises(ValueError):
        AsymptoticCheck("x", (10, 5), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0))
    with pytest.raises(ValueError):
        AsymptoticCheck("x", (5, 10), (0.0,), (0.0, 0.0), (0.0, 0.0))


def test_check_csv_emission(small_tables):
    check = check_mertens(small_tables["mertens"], [1, 10])
    text = check_to_csv(check)
    lines = text.splitlines()
    assert lines[0] == "x,partial,model,normalized_deviation"
    assert lines[1] == "1,1,0,1"
    assert lines[2] == "10,-1,0,0.1"
