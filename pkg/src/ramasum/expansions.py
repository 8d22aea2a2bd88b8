"""Ramanujan-coefficient series with certified decay envelopes.

A CoefficientSeries packages r -> fhat(r) together with constants C, delta
such that |fhat(r)| <= C / r^(1+delta) for all r >= 1. The two built-ins are
the classical expansions of the normalized divisor-power and Jordan-totient
ratios:

    sigma_series(s):   fhat(r) = zeta(s+1) / r^(s+1),
                       sum_r fhat(r) c_r(n) = sigma_s(n) / n^s
    jordan_series(s):  ghat(r) = mu(r) / (zeta(s+1) * J_{s+1}(r)),
                       sum_r ghat(r) c_r(n) = J_s(n) / n^s

Neither formula is taken on faith: the reconstruction tests evaluate the
truncated series against exact table values before anything else may use
them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .arith import FnTable, Tables, build_table, factorize_trial, sigma_real, zeta
from .ramanujan import ramanujan_column
from .summation import CHUNK, chunk_ranges, combine, fsum_array

# Truncation points are powers of two, capped here; a cap hit is reported,
# never raised, so slow-decay series still produce a (flagged) result.
TRUNCATION_CAP = 1 << 26

_JORDAN_SAMPLE_LIMIT = 10**4
_JORDAN_HEADROOM = 1.1


@dataclass(frozen=True)
class CoefficientSeries:
    """Ramanujan-coefficient provider with a certified decay envelope.

    coeff(r) evaluates a single coefficient; coeff_block(lo, hi) returns the
    float64 coefficients for r in [lo, hi) and is what the bulk paths use.
    """

    label: str
    coeff: Callable[[int], float]
    decay_C: float
    decay_delta: float
    coeff_block: Callable[[int, int], np.ndarray] = field(repr=False, default=None)

    def __post_init__(self):
        if self.decay_delta <= 0.0 or self.decay_C <= 0.0:
            raise ValueError("decay envelope requires positive C and delta")
        if self.coeff_block is None:
            object.__setattr__(
                self, "coeff_block",
                lambda lo, hi: np.array([self.coeff(r) for r in range(lo, hi)], dtype=np.float64),
            )


def sigma_series(s: float) -> CoefficientSeries:
    """Series reproducing sigma_s(n)/n^s; decay delta = s, C = zeta(s+1)."""
    if s <= 0.0:
        raise ValueError(f"sigma_series requires s > 0, got {s}")
    z = zeta(s + 1.0)

    def coeff(r: int) -> float:
        return z * float(r) ** -(s + 1.0)

    def coeff_block(lo: int, hi: int) -> np.ndarray:
        return z * np.arange(lo, hi, dtype=np.float64) ** -(s + 1.0)

    return CoefficientSeries(label=f"sigma(s={s:g})", coeff=coeff,
                             decay_C=z, decay_delta=s, coeff_block=coeff_block)


def jordan_series(s: float) -> CoefficientSeries:
    """Series reproducing J_s(n)/n^s; decay delta = s.

    decay_C is measured: sup over r <= 10^4 of |ghat(r)| r^(1+s), inflated
    10%. The sup over all r is the limit over primorials of
    prod_{p|r} (1 - p^-(s+1))^-1 / zeta(s+1) = 1, so the inflated sample
    value covers every modulus.
    """
    if s <= 0.0:
        raise ValueError(f"jordan_series requires s > 0, got {s}")
    z = zeta(s + 1.0)
    cache: dict[str, np.ndarray | int] = {"limit": 0}

    def _ensure(limit: int) -> np.ndarray:
        if limit > cache["limit"]:
            size = 1 << max(10, (limit - 1).bit_length())
            jor = build_table("jordan_s", param=s + 1.0, limit=size).values.astype(np.float64)
            mu = build_table("mobius", limit=size).values.astype(np.float64)
            jor[0] = 1.0  # avoid 0/0 at the pad index
            cache["coeff"] = mu / (z * jor)
            cache["limit"] = size
        return cache["coeff"]

    def coeff(r: int) -> float:
        f = factorize_trial(r)
        if any(e > 1 for _, e in f.factors):
            return 0.0
        sign = -1.0 if len(f.factors) % 2 else 1.0
        jor = 1.0
        for p, _ in f.factors:
            jor *= float(p) ** (s + 1.0) - 1.0
        return sign / (z * jor)

    def coeff_block(lo: int, hi: int) -> np.ndarray:
        return _ensure(hi - 1)[lo:hi]

    sample = coeff_block(1, _JORDAN_SAMPLE_LIMIT + 1)
    r = np.arange(1, _JORDAN_SAMPLE_LIMIT + 1, dtype=np.float64)
    C = float(np.max(np.abs(sample) * r ** (1.0 + s))) * _JORDAN_HEADROOM
    return CoefficientSeries(label=f"jordan(s={s:g})", coeff=coeff,
                             decay_C=C, decay_delta=s, coeff_block=coeff_block)


def truncated_eval(series: CoefficientSeries, n: int, R: int, tables: Tables) -> float:
    """Partial expansion sum_{r<=R} fhat(r) c_r(n), compensated accumulation."""
    if R < 1:
        raise ValueError(f"truncation R must be >= 1, got {R}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    col = ramanujan_column(n, R, tables.mobius)
    parts = [
        fsum_array(series.coeff_block(lo, hi) * col[lo:hi])
        for lo, hi in chunk_ranges(1, R + 1)
    ]
    return combine(parts)


def tail_bound(series_f: CoefficientSeries, series_g: CoefficientSeries,
               h: int, R: int) -> float:
    """Certified upper bound on the dropped tail of the paired expansion.

    Bounds |sum_{r>R} fhat(r) ghat(r) w_r(h)| where w_r(0) = phi(r) and
    w_r(h) = c_r(h) for h >= 1, via phi(r) <= r, |c_r(h)| <= sigma_1(h), and
    integral comparison of the remaining power sum.
    """
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")
    if h < 0:
        raise ValueError(f"h must be >= 0, got {h}")
    dp = min(series_f.decay_delta, series_g.decay_delta)
    CC = series_f.decay_C * series_g.decay_C
    if h == 0:
        return CC * R ** (-2.0 * dp) / (2.0 * dp)
    s1 = float(sigma_real(factorize_trial(h), 1))
    return CC * s1 * R ** (-1.0 - 2.0 * dp) / (1.0 + 2.0 * dp)


def series_tail_bound(series: CoefficientSeries, n: int, R: int) -> float:
    """Single-series analogue: |sum_{r>R} fhat(r) c_r(n)| <= C sigma_1(n) R^-d / d."""
    s1 = float(sigma_real(factorize_trial(n), 1))
    d = series.decay_delta
    return series.decay_C * s1 * R ** (-d) / d


class TruncationChoice(NamedTuple):
    R: int
    cap_reached: bool


def choose_truncation(series_f: CoefficientSeries, series_g: CoefficientSeries,
                      h: int, target: float) -> TruncationChoice:
    """Smallest power-of-two R with tail_bound <= target, capped.

    An unreachable target under the cap returns (cap, True) rather than
    raising; callers decide whether a flagged tail is acceptable.
    """
    if target <= 0.0:
        raise ValueError(f"target must be positive, got {target}")
    R = 1
    while R <= TRUNCATION_CAP:
        if tail_bound(series_f, series_g, h, R) <= target:
            return TruncationChoice(R, False)
        R *= 2
    return TruncationChoice(TRUNCATION_CAP, True)
