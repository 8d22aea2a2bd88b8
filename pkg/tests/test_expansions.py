"""Coefficient series: decay certificates, truncated evaluation against exact
values, tail bounds, and truncation choice."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramasum import (CoefficientSeries, choose_truncation, factorize_trial,
                     jordan_series, series_tail_bound, sigma_series,
                     tail_bound, truncated_eval, zeta)


def exact_sigma_ratio(n, s):
    """sigma_s(n)/n^s = sum of d^-s over divisors, straight from the list."""
    return math.fsum(float(d) ** -s for d in range(1, n + 1) if n % d == 0)


def exact_jordan_ratio(n, s):
    """J_s(n)/n^s = product over p | n of (1 - p^-s)."""
    out = 1.0
    for p, _ in factorize_trial(n).factors:
        out *= 1.0 - float(p) ** -s
    return out


def unit_series():
    """fhat = indicator of r = 1."""
    return CoefficientSeries(label="unit", coeff=lambda r: 1.0 if r == 1 else 0.0,
                             decay_C=1.0, decay_delta=1.0)


# ---------------------------------------------------------------------------
# construction and decay


def test_sigma_series_head_coefficient():
    ser = sigma_series(1.0)
    assert ser.coeff(1) == pytest.approx(zeta(2.0))
    assert ser.coeff(1) == pytest.approx(1.644934, abs=1e-6)
    assert ser.decay_delta == 1.0


def test_jordan_series_head_coefficient():
    ser = jordan_series(1.0)
    assert ser.coeff(1) == pytest.approx(1.0 / zeta(2.0))
    assert ser.coeff(1) == pytest.approx(0.607927, abs=1e-6)
    assert ser.coeff(4) == 0.0  # mu(4) = 0


def test_builders_reject_nonpositive_exponent():
    with pytest.raises(ValueError):
        sigma_series(0.0)
    with pytest.raises(ValueError):
        jordan_series(-1.0)


@pytest.mark.parametrize("builder", [sigma_series, jordan_series])
@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_decay_certificate_holds_on_sample(builder, s):
    ser = builder(s)
    r = np.arange(1, 10**4 + 1, dtype=np.float64)
    vals = np.abs(ser.coeff_block(1, 10**4 + 1))
    assert np.all(vals * r ** (1.0 + s) <= ser.decay_C * (1 + 1e-12))


def test_coeff_block_matches_scalar_coeff():
    for ser in (sigma_series(0.7), jordan_series(1.0)):
        block = ser.coeff_block(5, 40)
        for i, r in enumerate(range(5, 40)):
            assert block[i] == pytest.approx(ser.coeff(r), rel=1e-12, abs=1e-15)


# ---------------------------------------------------------------------------
# truncated evaluation


def test_truncation_r1_returns_head(tables):
    for ser in (sigma_series(1.0), jordan_series(2.0), unit_series()):
        for n in (1, 7, 100):
            assert truncated_eval(ser, n, 1, tables) == pytest.approx(ser.coeff(1))


def test_two_term_hand_value(tables):
    # zeta(2) * (1 + c_2(1)/4) = zeta(2) * 3/4
    got = truncated_eval(sigma_series(1.0), 1, 2, tables)
    assert got == pytest.approx(zeta(2.0) * 0.75)
    assert got == pytest.approx(1.233700, abs=1e-6)


def test_sigma_expansion_converges_to_exact(tables_16k):
    ser = sigma_series(1.0)
    assert truncated_eval(ser, 2, 1 << 14, tables_16k) == pytest.approx(1.5, abs=1e-4)
    assert truncated_eval(ser, 6, 1 << 13, tables_16k) == pytest.approx(2.0, abs=1e-3)
    assert truncated_eval(ser, 1, 1 << 13, tables_16k) == pytest.approx(1.0, abs=1e-3)


def test_jordan_expansion_converges_to_exact(tables_16k):
    assert truncated_eval(jordan_series(1.0), 1, 1 << 13, tables_16k) == \
        pytest.approx(1.0, abs=1e-3)
    assert truncated_eval(jordan_series(2.0), 6, 10**4, tables_16k) == \
        pytest.approx(24.0 / 36.0, abs=1e-3)


@pytest.mark.parametrize("builder,exact", [
    (sigma_series, exact_sigma_ratio),
    (jordan_series, exact_jordan_ratio),
])
@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_reconstruction_bounded_and_improving(tables_16k, builder, exact, s):
    ser = builder(s)
    worst = []
    for R in (1 << 8, 1 << 10):
        errs = []
        for n in range(1, 201):
            err = abs(truncated_eval(ser, n, R, tables_16k) - exact(n, s))
            assert err <= series_tail_bound(ser, n, R), (n, R)
            errs.append(err)
        worst.append(max(errs))
    assert worst[1] < worst[0]


def test_truncated_eval_validates(tables):
    with pytest.raises(ValueError):
        truncated_eval(sigma_series(1.0), 1, 0, tables)
    with pytest.raises(ValueError):
        truncated_eval(sigma_series(1.0), 0, 4, tables)


# ---------------------------------------------------------------------------
# tail bounds


def test_tail_bound_hand_values():
    ser = CoefficientSeries(label="toy", coeff=lambda r: 0.0,
                            decay_C=1.0, decay_delta=1.0)
    assert tail_bound(ser, ser, 0, 100) == pytest.approx(5e-5)
    # sigma_1(2) = 3: 3 * 100^-3 / 3
    assert tail_bound(ser, ser, 2, 100) == pytest.approx(1e-6)


def test_tail_bound_power_law_halving():
    ser = sigma_series(0.75)
    dp = 0.75
    for R in (16, 64, 256):
        ratio = tail_bound(ser, ser, 0, 2 * R) / tail_bound(ser, ser, 0, R)
        assert ratio == pytest.approx(2.0 ** (-2 * dp))


@settings(max_examples=100)
@given(st.floats(min_value=0.05, max_value=3.0), st.floats(min_value=0.05, max_value=3.0),
       st.floats(min_value=0.1, max_value=10.0), st.integers(min_value=0, max_value=30),
       st.integers(min_value=1, max_value=20), st.integers(min_value=1, max_value=12))
def test_tail_bound_monotone_nonincreasing(df, dg, C, h, R, step):
    f = CoefficientSeries(label="f", coeff=lambda r: 0.0, decay_C=C, decay_delta=df)
    g = CoefficientSeries(label="g", coeff=lambda r: 0.0, decay_C=2.0, decay_delta=dg)
    b1 = tail_bound(f, g, h, R)
    b2 = tail_bound(f, g, h, R + step)
    assert b1 >= 0.0 and b2 >= 0.0
    assert b2 <= b1


# ---------------------------------------------------------------------------
# truncation choice


def test_choose_truncation_first_power_of_two():
    ser = CoefficientSeries(label="toy", coeff=lambda r: 0.0,
                            decay_C=1.0, decay_delta=1.0)
    choice = choose_truncation(ser, ser, 0, 5e-5)
    assert choice == (128, False)


def test_choose_truncation_trivial_target():
    ser = sigma_series(2.0)
    big_target = tail_bound(ser, ser, 0, 1) * 2
    assert choose_truncation(ser, ser, 0, big_target) == (1, False)


def test_choose_truncation_cap_flag():
    ser = CoefficientSeries(label="slow", coeff=lambda r: 0.0,
                            decay_C=1.0, decay_delta=0.1)
    choice = choose_truncation(ser, ser, 0, 1e-8)
    assert choice.cap_reached
    assert choice.R == 1 << 26


def test_choose_truncation_rejects_bad_target():
    ser = sigma_series(1.0)
    with pytest.raises(ValueError):
        choose_truncation(ser, ser, 0, 0.0)
