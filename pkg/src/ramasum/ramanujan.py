"""Ramanujan sums c_r(n) and their correlation sums.

Two independent evaluation routes are kept side by side on purpose:

    divisor form   c_r(n) = sum over d | gcd(n, r) of mu(r/d) * d
    totient form   c_r(n) = phi(r) / phi(r/d) * mu(r/d),  d = gcd(n, r)

with the convention gcd(0, r) = r, so c_r(0) = phi(r). Bulk evaluation goes
through period rows (all residues mod r at once) or columns (all moduli
r <= R at a fixed argument), never per-n divisor enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import FnTable, Tables, divisors, factorize, factorize_trial

# Guard for exact int64 dot products in correlation_sum; larger jobs fall
# back to arbitrary-precision Python ints.
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class RamanujanRow:
    """One period of c_r: values[j] = c_r(j) for j in [0, r)."""

    r: int
    values: np.ndarray = field(repr=False)


def _require(tables: Tables, r: int) -> None:
    if r > tables.mobius.limit or r > tables.phi.limit:
        raise ValueError(f"tables limit {tables.limit} too small for modulus {r}")


def ramanujan_sum_divisor(r: int, n: int, tables: Tables) -> int:
    """c_r(n) summed over divisors of gcd(n, r), mu taken from the table."""
    if r < 1:
        raise ValueError(f"modulus r must be >= 1, got {r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    _require(tables, r)
    g = r if n == 0 else math.gcd(n, r)
    mu = tables.mobius.values
    return sum(int(mu[r // d]) * d for d in divisors(factorize(g, tables.spf)))


def ramanujan_sum_holder(r: int, n: int, tables: Tables) -> int:
    """c_r(n) via the closed totient-quotient form."""
    if r < 1:
        raise ValueError(f"modulus r must be >= 1, got {r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    _require(tables, r)
    d = r if n == 0 else math.gcd(n, r)
    k = r // d
    phi = tables.phi.values
    return int(tables.mobius.values[k]) * int(phi[r]) // int(phi[k])


def ramanujan_row(r: int, tables: Tables) -> RamanujanRow:
    """All of c_r(0..r-1) in one pass.

    Scatters mu(r/d) * d over the multiples of each divisor d of r, which is
    O(r log log r) work instead of r separate divisor enumerations.
    """
    if r < 1:
        raise ValueError(f"modulus r must be >= 1, got {r}")
    _require(tables, r)
    mu = tables.mobius.values
    vals = np.zeros(r, dtype=np.int64)
    for d in divisors(factorize(r, tables.spf)):
        vals[0::d] += int(mu[r // d]) * d
    return RamanujanRow(r=r, values=vals)


def ramanujan_column(n: int, R: int, mobius: FnTable) -> np.ndarray:
    """c_r(n) for every modulus r = 1..R, as int64 with index 0 unused.

    For fixed n the divisor form transposes to a scatter over multiples of
    each divisor d of n: c_{dk}(n) picks up d * mu(k). n = 0 is not handled
    here (that column is phi, see the callers).
    """
    if n < 1:
        raise ValueError(f"column evaluation needs n >= 1, got {n}")
    if R > mobius.limit:
        raise ValueError(f"mobius table limit {mobius.limit} too small for R={R}")
    mu = mobius.values
    out = np.zeros(R + 1, dtype=np.int64)
    for d in divisors(factorize_trial(n)):
        if d > R:
            break
        k = R // d
        out[d :: d] += d * mu[1 : k + 1].astype(np.int64)
    return out


class RowCache:
    """Lazily built, memoized RamanujanRow store keyed by modulus."""

    def __init__(self, tables: Tables):
        self.tables = tables
        self._rows: dict[int, RamanujanRow] = {}

    def __getitem__(self, r: int) -> RamanujanRow:
        row = self._rows.get(r)
        if row is None:
            row = ramanujan_row(r, self.tables)
            self._rows[r] = row
        return row


def correlation_sum(r: int, s: int, N: int, h: int, rows: RowCache) -> int:
    """Exact sum over n = 1..N of c_r(n) * c_s(n + h).

    Both factors are periodic with period lcm(r, s), so the sum collapses to
    one residue-class dot product with per-class counts. Accumulation is
    exact: int64 when the worst-case magnitude provably fits, otherwise
    Python integers.
    """
    if r < 1 or s < 1:
        raise ValueError(f"moduli must be >= 1, got r={r}, s={s}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if h < 0:
        raise ValueError(f"shift h must be >= 0, got {h}")
    row_r, row_s = rows[r], rows[s]
    L = r * s // math.gcd(r, s)
    a = np.arange(L, dtype=np.int64)
    prod = row_r.values[a % r] * row_s.values[(a + h) % s]
    counts = np.full(L, N // L, dtype=np.int64)
    counts[1 : N % L + 1] += 1
    phi_r = int(row_r.values[0])
    phi_s = int(row_s.values[0])
    if N * phi_r * phi_s < _INT64_SAFE:
        return int(np.dot(counts, prod))
    return sum(int(c) * int(p) for c, p in zip(counts.tolist(), prod.tolist()))
