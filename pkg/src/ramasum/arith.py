"""Exact sieves and evaluators for classical arithmetic functions.

Provides:
    build_spf_sieve(limit)       smallest-prime-factor table for fast factorization
    factorize(n, spf)            canonical prime factorization from the table
    factorize_trial(n)           table-free trial division (small n, shifts, moduli)
    divisors(f)                  sorted divisor list of a factored integer
    build_table(kind, ...)       dense value tables: mobius, phi, divisor_k,
                                 sigma_s, jordan_s, mertens, custom
    zeta(s, tol)                 real-argument zeta with a certified tolerance
    sigma_real(f, s)             sum of s-th powers of divisors, multiplicative
    Tables                       bundle (spf + mobius + phi) shared by callers
    save_table / load_table      exact binary round-trip of a FnTable

All tables are immutable after construction and safe for shared reads.
Integer-valued kinds are exact in 64-bit (with overflow guards); real-valued
kinds use doubles.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Hard ceiling on sieve allocations: beyond this the dense-table approach is
# the wrong tool, and int32 spf entries would overflow.
MAX_SIEVE_LIMIT = 2**31

TABLE_KINDS = ("mobius", "phi", "divisor_k", "sigma_s", "jordan_s", "mertens", "custom")


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer with its full prime factorization.

    factors is an ascending tuple of (prime, exponent) pairs; n == 1 gives
    an empty tuple.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"FactoredInteger requires n >= 1, got {self.n}")
        prod = 1
        prev_p = 0
        for p, e in self.factors:
            if p <= prev_p or e < 1:
                raise ValueError(f"malformed factorization for n={self.n}: {self.factors}")
            prod *= p**e
            prev_p = p
        if prod != self.n:
            raise ValueError(f"factor product {prod} != n {self.n}")


@dataclass(frozen=True)
class SpfTable:
    """spf[n] = smallest prime factor of n, for 2 <= n <= limit."""

    limit: int
    spf: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class FnTable:
    """Dense table of one arithmetic function on [1..limit].

    values has length limit+1; index 0 is a structural zero pad so that
    values[n] is the function at n. Integer kinds are exact int64 (int8 for
    mobius), real kinds are float64.
    """

    kind: str
    param: float | int | None
    limit: int
    values: np.ndarray = field(repr=False)

    def value(self, n: int):
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range [1, {self.limit}]")
        v = self.values[n]
        return int(v) if np.issubdtype(self.values.dtype, np.integer) else float(v)


def _check_limit(limit: int, lo: int = 1) -> None:
    if limit < lo:
        raise ValueError(f"limit must be >= {lo}, got {limit}")
    if limit > MAX_SIEVE_LIMIT:
        raise ValueError(f"limit {limit} exceeds sieve guard {MAX_SIEVE_LIMIT}")


def primes_upto(limit: int) -> np.ndarray:
    """Primes <= limit as an int64 array (plain Eratosthenes)."""
    _check_limit(limit)
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_p[i]:
            is_p[i * i :: i] = False
    return np.nonzero(is_p)[0].astype(np.int64)


def build_spf_sieve(limit: int) -> SpfTable:
    """Smallest-prime-factor sieve on [2..limit].

    spf[p] = p for primes; spf[1] = 1 by convention.
    """
    _check_limit(limit, lo=2)
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[1] = 1
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == 0:
            sl = spf[i * i :: i]
            sl[sl == 0] = i
            spf[i] = i
    # survivors are primes > sqrt(limit)
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    return SpfTable(limit=limit, spf=spf)


def factorize(n: int, spf: SpfTable) -> FactoredInteger:
    """Canonical factorization of n by walking the spf chain."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    if n > spf.limit:
        raise ValueError(f"n={n} exceeds spf table limit {spf.limit}")
    factors = []
    table = spf.spf
    m = n
    while m > 1:
        p = int(table[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    return FactoredInteger(n=n, factors=tuple(factors))


def factorize_trial(n: int) -> FactoredInteger:
    """Trial-division factorization, no table needed. Fine up to ~10^12."""
    if n < 1:
        raise ValueError(f"factorize_trial requires n >= 1, got {n}")
    factors = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return FactoredInteger(n=n, factors=tuple(factors))


def divisors(f: FactoredInteger) -> list[int]:
    """All divisors of f.n, ascending."""
    out = [1]
    for p, e in f.factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    out.sort()
    return out


# ---------------------------------------------------------------------------
# dense tables


def _ones_convolve(vals: np.ndarray) -> np.ndarray:
    """out[m] = sum_{d|m} vals[d] for 1 <= m <= limit.

    Hybrid divisor scan: strided in-place adds for small d, then one
    vectorized scatter pass per multiplicity for the large-d tail where the
    per-slice numpy call overhead would dominate.
    """
    limit = len(vals) - 1
    out = np.zeros_like(vals)
    d0 = max(1, limit // 64)
    for d in range(1, d0 + 1):
        out[d::d] += vals[d]
    for k in range(1, limit // (d0 + 1) + 1):
        hi = limit // k
        if hi <= d0:
            break
        idx = np.arange(d0 + 1, hi + 1, dtype=np.int64)
        out[idx * k] += vals[idx]  # indices distinct for fixed k
    return out


def _sigma_fits_int64(s: int, limit: int) -> bool:
    # sigma_s(n) <= n^s (1 + ln n) for s >= 1, <= n for s = 0
    if s == 0:
        return True
    bound = s * math.log2(limit) + math.log2(1.0 + math.log(max(limit, 2)))
    return bound < 62


def build_table(kind: str, param: float | int | None = None, limit: int = 0,
                values: np.ndarray | None = None) -> FnTable:
    """Sieve a dense FnTable of the requested kind on [1..limit].

    param is k for divisor_k (k >= 2) and s for sigma_s / jordan_s; the
    remaining kinds take no parameter. kind="custom" wraps caller-provided
    values (float64 or int64, index 0 ignored).
    """
    if kind not in TABLE_KINDS:
        raise ValueError(f"unsupported table kind {kind!r}")
    if kind == "custom":
        if values is None:
            raise ValueError("custom tables require explicit values")
        vals = np.asarray(values)
        return FnTable(kind=kind, param=param, limit=len(vals) - 1, values=vals)
    _check_limit(limit)

    if kind == "mobius" or kind == "mertens":
        mu = np.ones(limit + 1, dtype=np.int8)
        mu[0] = 0
        for p in primes_upto(limit):
            mu[p::p] *= -1
            if p * p <= limit:
                mu[p * p :: p * p] = 0
        if kind == "mobius":
            return FnTable(kind=kind, param=None, limit=limit, values=mu)
        mert = np.cumsum(mu, dtype=np.int64)
        return FnTable(kind="mertens", param=None, limit=limit, values=mert)

    if kind == "phi":
        phi = np.arange(limit + 1, dtype=np.int64)
        for p in primes_upto(limit):
            phi[p::p] = phi[p::p] // p * (p - 1)
        return FnTable(kind=kind, param=None, limit=limit, values=phi)

    if kind == "divisor_k":
        k = int(param) if param is not None else 0
        if k < 2:
            raise ValueError(f"divisor_k requires k >= 2, got {param}")
        vals = np.ones(limit + 1, dtype=np.int64)
        vals[0] = 0
        for _ in range(k - 1):
            vals = _ones_convolve(vals)
        return FnTable(kind=kind, param=k, limit=limit, values=vals)

    if kind == "sigma_s":
        if param is None:
            raise ValueError("sigma_s requires parameter s")
        s = param
        if float(s).is_integer() and s >= 0 and _sigma_fits_int64(int(s), limit):
            base = np.arange(limit + 1, dtype=np.int64) ** int(s)
            base[0] = 0
            vals = _ones_convolve(base)
        else:
            base = np.arange(limit + 1, dtype=np.float64) ** float(s)
            base[0] = 0.0
            vals = _ones_convolve(base)
        return FnTable(kind=kind, param=s, limit=limit, values=vals)

    if kind == "jordan_s":
        if param is None:
            raise ValueError("jordan_s requires parameter s")
        s = param
        if float(s).is_integer() and s >= 1 and int(s) * math.log2(limit) < 62:
            si = int(s)
            vals = np.arange(limit + 1, dtype=np.int64) ** si
            for p in primes_upto(limit):
                ps = int(p) ** si
                vals[p::p] = vals[p::p] // ps * (ps - 1)
        else:
            vals = np.arange(limit + 1, dtype=np.float64) ** float(s)
            for p in primes_upto(limit):
                vals[p::p] *= 1.0 - float(p) ** -float(s)
        return FnTable(kind=kind, param=s, limit=limit, values=vals)

    raise AssertionError(f"unhandled kind {kind}")  # pragma: no cover


@dataclass(frozen=True)
class Tables:
    """Shared read-only bundle: spf sieve plus mobius and phi tables."""

    spf: SpfTable
    mobius: FnTable
    phi: FnTable

    @property
    def limit(self) -> int:
        return self.spf.limit

    @classmethod
    def build(cls, limit: int) -> "Tables":
        return cls(
            spf=build_spf_sieve(max(limit, 2)),
            mobius=build_table("mobius", limit=limit),
            phi=build_table("phi", limit=limit),
        )


# ---------------------------------------------------------------------------
# zeta and divisor power sums


@lru_cache(maxsize=256)
def zeta(s: float, tol: float = 1e-12) -> float:
    """Riemann zeta at real s > 1 with |result - zeta(s)| <= tol.

    Direct summation to a cutoff M driven by tol, plus the Euler-Maclaurin
    tail through the B_2 correction. The first omitted term is bounded by
    s(s+1)(s+2) M^(-s-3) / 720, orders below tol for every reachable M.
    """
    if s <= 1.0:
        raise ValueError(f"zeta requires s > 1, got {s}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    M = max(16, math.ceil(tol ** (-1.0 / (s - 1.0)))) if tol < 1.0 else 16
    M = min(M, 10**7)
    parts = []
    chunk = 1 << 20
    for lo in range(1, M + 1, chunk):
        hi = min(M, lo + chunk - 1)
        block = np.arange(lo, hi + 1, dtype=np.float64) ** (-s)
        parts.append(math.fsum(block.tolist()))
    partial = math.fsum(parts)
    tail = M ** (1.0 - s) / (s - 1.0) - 0.5 * M ** (-s) + s / 12.0 * M ** (-s - 1.0)
    return partial + tail


def sigma_real(f: FactoredInteger, s: float):
    """sigma_s(n) = sum of d^s over divisors d of n, computed multiplicatively.

    Returns an exact int for integer s >= 0, a float otherwise.
    """
    if float(s).is_integer() and s >= 0:
        si = int(s)
        out = 1
        for p, e in f.factors:
            out *= sum(p ** (si * j) for j in range(e + 1))
        return out
    out = 1.0
    for p, e in f.factors:
        out *= math.fsum(float(p) ** (s * j) for j in range(e + 1))
    return out


# ---------------------------------------------------------------------------
# binary table cache

_MAGIC = b"FNTB"
_HEADER = struct.Struct("<4sH2s16sBdQ2s")  # magic, version, endian, kind, param flag, param, limit, dtype


def save_table(table: FnTable, path) -> None:
    """Write a FnTable as header + raw little-endian value bytes."""
    dtype_code = {"int8": b"i1", "int64": b"i8", "float64": b"f8"}.get(table.values.dtype.name)
    if dtype_code is None:
        raise ValueError(f"unsupported table dtype {table.values.dtype}")
    if table.param is None:
        flag, param = 0, 0.0
    elif isinstance(table.param, int):
        flag, param = 1, float(table.param)
    else:
        flag, param = 2, float(table.param)
    header = _HEADER.pack(_MAGIC, 1, b"< ", table.kind.encode().ljust(16, b"\0"),
                          flag, param, table.limit, dtype_code)
    arr = table.values.astype(table.values.dtype.newbyteorder("<"), copy=False)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(arr.tobytes())


def load_table(path) -> FnTable:
    """Exact round-trip counterpart of save_table."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) != _HEADER.size:
            raise ValueError(f"{path}: truncated table header")
        magic, version, endian, kind, flag, param, limit, dtype_code = _HEADER.unpack(raw)
        if magic != _MAGIC or version != 1 or endian[:1] != b"<":
            raise ValueError(f"{path}: not a table cache file")
        body = fh.read()
    dtype = {b"i1": np.int8, b"i8": np.int64, b"f8": np.float64}[dtype_code]
    values = np.frombuffer(body, dtype=np.dtype(dtype).newbyteorder("<")).astype(dtype)
    if len(values) != limit + 1:
        raise ValueError(f"{path}: value array length {len(values)} != limit+1 {limit + 1}")
    param_val = None if flag == 0 else (int(param) if flag == 1 else param)
    return FnTable(kind=kind.rstrip(b"\0").decode(), param=param_val, limit=int(limit), values=values)
