"""Desk-scale checks of the supporting classical asymptotics.

Each check compares exact partial sums against the leading model term and
normalizes the deviation by the second-order shape, so a bounded normalized
sequence across a growing grid is the falsifiable form of the O(.) claim:

    totient average     sum phi(k) ~ (3/pi^2) x^2,     deviation / (x log x)
    Mertens             M(x) = sum mu(k),              |M(x)| / x (decay only)
    k-divisor average   sum d_k(n) ~ x log^(k-1) x / (k-1)!,
                        deviation / (x log^(k-2) x)
    weighted divisors   sum d(t)/t^d = O(U^(1-d) log U), ratio to the shape
    shifted divisors    sum d(n) d(n+h) ~ (6/pi^2) sigma_{-1}(h) N log^2 N
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .arith import FnTable, factorize_trial, sigma_real
from .summation import fsum_array

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class AsymptoticCheck:
    """Aligned arrays of one check over its grid.

    normalized_deviations[i] = |partial_sums[i] - model_values[i]| divided by
    the check's second-order shape at grid[i] (shape floored at 1 so x = 1
    stays finite).
    """

    label: str
    grid: tuple[int, ...]
    partial_sums: tuple[float, ...]
    model_values: tuple[float, ...]
    normalized_deviations: tuple[float, ...]

    def __post_init__(self):
        k = len(self.grid)
        if not (len(self.partial_sums) == len(self.model_values)
                == len(self.normalized_deviations) == k):
            raise ValueError("misaligned check arrays")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError(f"grid must be strictly increasing, got {self.grid}")


def _validated_grid(grid, limit: int) -> list[int]:
    out = [int(x) for x in grid]
    if any(x < 1 for x in out):
        raise ValueError(f"grid values must be >= 1, got {list(grid)}")
    if max(out, default=1) > limit:
        raise ValueError(f"grid max {max(out)} exceeds table limit {limit}")
    return out


def _shape(x: float) -> float:
    return max(x, 1.0)


def check_phi_average(phi_table: FnTable, grid) -> AsymptoticCheck:
    """Partial sums of phi against (3/pi^2) x^2, normalized by x log x."""
    xs = _validated_grid(grid, phi_table.limit)
    csum = np.cumsum(phi_table.values, dtype=np.int64)
    partial = [float(csum[x]) for x in xs]
    model = [3.0 / math.pi**2 * x * x for x in xs]
    dev = [abs(p - m) / _shape(x * math.log(x))
           for p, m, x in zip(partial, model, xs)]
    return AsymptoticCheck("phi_average", tuple(xs), tuple(partial),
                           tuple(model), tuple(dev))


def check_mertens(mertens_table: FnTable, grid) -> AsymptoticCheck:
    """M(x) against 0, normalized by x: reports the decay of |M(x)|/x."""
    xs = _validated_grid(grid, mertens_table.limit)
    partial = [float(mertens_table.values[x]) for x in xs]
    dev = [abs(p) / x for p, x in zip(partial, xs)]
    return AsymptoticCheck("mertens", tuple(xs), tuple(partial),
                           tuple([0.0] * len(xs)), tuple(dev))


def check_dk_average(dk_table: FnTable, grid) -> AsymptoticCheck:
    """Partial sums of d_k against x log^(k-1) x / (k-1)!."""
    k = dk_table.param
    if dk_table.kind != "divisor_k" or k not in (2, 3, 4):
        raise ValueError(f"need a divisor_k table with k in 2..4, got "
                         f"{dk_table.kind} k={k}")
    xs = _validated_grid(grid, dk_table.limit)
    csum = np.cumsum(dk_table.values, dtype=np.int64)
    partial = [float(csum[x]) for x in xs]
    model = [x * math.log(x) ** (k - 1) / math.factorial(k - 1) for x in xs]
    dev = [abs(p - m) / _shape(x * math.log(x) ** (k - 2))
           for p, m, x in zip(partial, model, xs)]
    return AsymptoticCheck(f"d{k}_average", tuple(xs), tuple(partial),
                           tuple(model), tuple(dev))


def weighted_divisor_sum(d2_table: FnTable, U: int, delta: float) -> float:
    """Exact partial sum of d(t) / t^delta for t <= U."""
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    if not 1 <= U <= d2_table.limit:
        raise ValueError(f"U={U} outside table range [1, {d2_table.limit}]")
    t = np.arange(1, U + 1, dtype=np.float64)
    return fsum_array(d2_table.values[1 : U + 1] / t**delta)


def check_weighted_divisor(d2_table: FnTable, grid, delta: float) -> AsymptoticCheck:
    """Ratio of the weighted sum to U^(1-d) log U (log^2 U at d = 1)."""
    xs = _validated_grid(grid, d2_table.limit)
    partial = [weighted_divisor_sum(d2_table, U, delta) for U in xs]
    if delta < 1.0:
        shapes = [U ** (1.0 - delta) * math.log(U) for U in xs]
    else:
        shapes = [math.log(U) ** 2 for U in xs]
    dev = [p / _shape(s) for p, s in zip(partial, shapes)]
    return AsymptoticCheck(f"weighted_d_delta={delta:g}", tuple(xs),
                           tuple(partial), tuple([0.0] * len(xs)), tuple(dev))


def ingham_sum(d2_table: FnTable, N: int, h: int) -> tuple[int, float]:
    """Exact sum of d(n) d(n+h) for n <= N, and its ratio to the model.

    Model: (6/pi^2) sigma_{-1}(h) N log^2 N. Convergence toward ratio 1 is
    slow because the dropped lower-order terms carry single powers of log N.
    """
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N + h > d2_table.limit:
        raise ValueError(f"N+h={N + h} exceeds table limit {d2_table.limit}")
    d = d2_table.values
    # max d(n) <= ~6700 below 2^31, so the int64 dot is safe for any
    # desk-scale N; guard anyway.
    if N * int(d[1 : N + 1].max()) ** 2 >= _INT64_SAFE:  # pragma: no cover
        raise ValueError("sum would overflow the exact accumulator")
    total = int(np.dot(d[1 : N + 1], d[1 + h : N + h + 1]))
    s1 = float(sigma_real(factorize_trial(h), -1.0))
    model = 6.0 / math.pi**2 * s1 * N * math.log(N) ** 2 if N > 1 else 0.0
    ratio = total / model if model > 0 else math.inf
    return total, ratio


def check_ingham(d2_table: FnTable, grid, h: int) -> AsymptoticCheck:
    """Shifted divisor sums over a grid; deviation is |ratio - 1|."""
    xs = _validated_grid(grid, d2_table.limit)
    partial, model, dev = [], [], []
    for N in xs:
        total, _ = ingham_sum(d2_table, N, h)
        s1 = float(sigma_real(factorize_trial(h), -1.0))
        m = 6.0 / math.pi**2 * s1 * N * math.log(N) ** 2 if N > 1 else 0.0
        partial.append(float(total))
        model.append(m)
        dev.append(abs(total - m) / _shape(m))
    return AsymptoticCheck(f"ingham_h={h}", tuple(xs), tuple(partial),
                           tuple(model), tuple(dev))


def check_to_csv(check: AsymptoticCheck) -> str:
    """CSV emission: one row per grid point."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("x", "partial", "model", "normalized_deviation"))
    for x, p, m, d in zip(check.grid, check.partial_sums, check.model_values,
                          check.normalized_deviations):
        writer.writerow((x, f"{p:.15g}", f"{m:.15g}", f"{d:.15g}"))
    return buf.getvalue()
