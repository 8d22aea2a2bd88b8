"""Shifted convolution sums: brute force vs predicted main terms.

The experiment pipeline measures, for a pair of arithmetic functions f, g
with known Ramanujan coefficients,

    actual(N)  = sum_{n<=N} f(n) g(n+h)          (exact tables, fsum chunks)
    main(N)    = N * sum_r fhat(r) ghat(r) w_r(h)

with w_r(0) = phi(r) and w_r(h) = c_r(h), and studies the signed difference
against two power-law error envelopes. Closed-form constants for the two
built-in pairs provide independent cross-checks of the series route:

    sigma pair:   zeta(s+1) zeta(t+1) / zeta(s+t+2) * sigma_{-(s+t+1)}(h)
    jordan pair:  Delta(h), an Euler product split over p | h and p plot h

Determinism contract: all floating accumulation is per-chunk fsum over a
fixed absolute chunk partition with ordered reduction, so results are
bit-identical for any worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arith import (FnTable, Tables, build_table, factorize_trial, load_table,
                    primes_upto, sigma_real, zeta)
from .expansions import (CoefficientSeries, choose_truncation, jordan_series,
                         sigma_series, tail_bound)
from .ramanujan import ramanujan_column
from .summation import chunk_ranges, combine, fsum_array

MAX_EXPERIMENT_N = 10**8
DEFAULT_TAIL_TARGET = 1e-9

CSV_COLUMNS = ("N", "h", "s", "t", "actual", "main", "signed_error",
               "bound_new", "bound_old", "R", "tail")


@dataclass(frozen=True)
class ConvolutionReport:
    """One (N, h) experiment row."""

    N: int
    h: int
    s: float | None
    t: float | None
    actual: float
    main: float
    signed_error: float
    bound_new: float
    bound_old: float
    truncation_R: int
    tail: float


@dataclass(frozen=True)
class MainTermResult:
    value: float
    truncation_R: int
    tail: float
    cap_reached: bool


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares slope of log |signed_error| against log N."""

    points: tuple[tuple[float, float], ...]
    slope: float
    intercept: float
    max_residual: float
    dropped: int


@dataclass
class ExperimentConfig:
    pair: str                      # sigma | jordan | custom-file
    s: float = 1.0
    t: float = 1.0
    h: int = 0
    grid: list[int] = field(default_factory=list)
    tail_target: float = DEFAULT_TAIL_TARGET
    output: str | None = None
    fmt: str = "csv"
    threads: int = 1
    allow_large: bool = False
    f_table_path: str | None = None
    g_table_path: str | None = None


# ---------------------------------------------------------------------------
# brute force


def brute_force_convolution(f_table: FnTable, g_table: FnTable, N: int, h: int,
                            threads: int = 1) -> float:
    """sum_{n<=N} f(n) g(n+h) with deterministic compensated accumulation.

    The chunk partition is fixed (absolute boundaries); threads only controls
    dispatch, never the reduction order, so any thread count returns the
    same bits.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if h < 0:
        raise ValueError(f"h must be >= 0, got {h}")
    if f_table.limit < N:
        raise ValueError(f"f table limit {f_table.limit} < N {N}")
    if g_table.limit < N + h:
        raise ValueError(f"g table limit {g_table.limit} < N+h {N + h}")
    fv = f_table.values
    gv = g_table.values

    def one_chunk(rng):
        lo, hi = rng
        return fsum_array(fv[lo:hi] * gv[lo + h : hi + h])

    ranges = list(chunk_ranges(1, N + 1))
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one_chunk, ranges))
    else:
        parts = [one_chunk(r) for r in ranges]
    return combine(parts)


# ---------------------------------------------------------------------------
# main terms


def main_term(series_f: CoefficientSeries, series_g: CoefficientSeries, h: int,
              target: float = DEFAULT_TAIL_TARGET,
              tables: Tables | None = None) -> MainTermResult:
    """sum_{r<=R} fhat(r) ghat(r) w_r(h) with R chosen from the tail target.

    w_r(0) = phi(r), w_r(h) = c_r(h). Returns the certified tail alongside
    the value; a truncation-cap hit is propagated as a flag.
    """
    if h < 0:
        raise ValueError(f"h must be >= 0, got {h}")
    R, capped = choose_truncation(series_f, series_g, h, target)
    if h == 0:
        if tables is not None and tables.phi.limit >= R:
            weights = tables.phi.values
        else:
            weights = build_table("phi", limit=R).values
    else:
        if tables is not None and tables.mobius.limit >= R:
            mobius = tables.mobius
        else:
            mobius = build_table("mobius", limit=R)
        weights = ramanujan_column(h, R, mobius)
    parts = []
    for lo, hi in chunk_ranges(1, R + 1):
        block = series_f.coeff_block(lo, hi) * series_g.coeff_block(lo, hi)
        parts.append(fsum_array(block * weights[lo:hi]))
    return MainTermResult(value=combine(parts), truncation_R=R,
                          tail=tail_bound(series_f, series_g, h, R),
                          cap_reached=capped)


def sigma_pair_constant(s: float, t: float, h: int) -> float:
    """Closed-form main-term constant for the normalized sigma pair, h >= 1."""
    if s <= 0.0 or t <= 0.0:
        raise ValueError(f"exponents must be positive, got s={s}, t={t}")
    if h < 1:
        raise ValueError("the closed form needs h >= 1; use main_term for h = 0")
    ratio = zeta(s + 1.0) * zeta(t + 1.0) / zeta(s + t + 2.0)
    return ratio * sigma_real(factorize_trial(h), -(s + t + 1.0))


def _jordan_local_factor(p: int, s: float, t: float, divides: bool) -> float:
    """One Euler factor of Delta(h): the p | h and p plot h variants."""
    a = float(p) ** -(s + 1.0)
    b = float(p) ** -(t + 1.0)
    if divides:
        return (1.0 - a) * (1.0 - b) + (p - 1) * a * b
    return (1.0 - a) * (1.0 - b) - a * b


def jordan_pair_constant(s: float, t: float, h: int, tol: float = 1e-9) -> float:
    """Euler-product main-term constant Delta(h) for the Jordan pair.

    Computed as a zeta-prefactored product so the truncated part converges
    like p^-(s+t+2):

        Delta(h) = 1/(zeta(s+1) zeta(t+1)) * prod_p (1 - g(p))
                   * prod_{p|h} F_div(p) / F_not(p),
        g(p) = a b / ((1-a)(1-b)),  a = p^-(s+1),  b = p^-(t+1),

    which is the same product rearranged: F_not(p) = (1-a)(1-b)(1 - g(p))
    and prod_p (1-a)(1-b) telescopes into the zeta prefactor. The prime
    cutoff P is chosen so the dropped log-tail is <= tol.
    """
    if s <= 0.0 or t <= 0.0:
        raise ValueError(f"exponents must be positive, got s={s}, t={t}")
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    alpha = s + t + 2.0
    a2 = 2.0 ** -(s + 1.0)
    b2 = 2.0 ** -(t + 1.0)
    g2 = a2 * b2 / ((1.0 - a2) * (1.0 - b2))
    # -log(1-g(p)) <= K' p^-alpha; integral comparison over n > P
    K = 1.0 / ((1.0 - a2) * (1.0 - b2) * (1.0 - g2))
    P = max(16, math.ceil((K / (tol * (alpha - 1.0))) ** (1.0 / (alpha - 1.0))))
    ps = primes_upto(P).astype(np.float64)
    av = ps ** -(s + 1.0)
    bv = ps ** -(t + 1.0)
    log_terms = np.log1p(-(av * bv) / ((1.0 - av) * (1.0 - bv)))
    value = math.exp(fsum_array(log_terms)) / (zeta(s + 1.0) * zeta(t + 1.0))
    for p, _ in factorize_trial(h).factors:
        value *= _jordan_local_factor(p, s, t, True) / _jordan_local_factor(p, s, t, False)
    return value


# ---------------------------------------------------------------------------
# error envelopes


def error_bound_new(N: float, delta: float, scale: float) -> float:
    """Three-case envelope: N^(1-d) log^(4-2d) N below d=1, log^3 N at d=1, 1 above."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if delta <= 0.0 or scale <= 0.0:
        raise ValueError(f"delta and scale must be positive, got {delta}, {scale}")
    ln = math.log(N)
    if delta < 1.0:
        return scale * N ** (1.0 - delta) * ln ** (4.0 - 2.0 * delta)
    if delta == 1.0:
        return scale * ln ** 3
    return scale


def error_bound_old(N: float, delta: float, scale: float) -> float:
    """Earlier envelope N^(2/(1+2d)) log^((5+2d)/(1+2d)) N; needs d > 1/2."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if delta <= 0.5:
        raise ValueError(f"the old envelope requires delta > 1/2, got {delta}")
    if scale <= 0.0:
        raise ValueError(f"scale must be positive, got {scale}")
    q = 1.0 + 2.0 * delta
    return scale * N ** (2.0 / q) * math.log(N) ** ((5.0 + 2.0 * delta) / q)


# ---------------------------------------------------------------------------
# normalized value tables for the built-in pairs


def normalized_sigma_table(s: float, limit: int) -> FnTable:
    """values[n] = sigma_s(n)/n^s (= sum of d^-s over d | n)."""
    if s <= 0.0:
        raise ValueError(f"s must be positive, got {s}")
    base = build_table("sigma_s", param=s, limit=limit)
    if np.issubdtype(base.values.dtype, np.integer):
        # exact integer sigma_s, one rounding in the final divide
        ns = np.arange(limit + 1, dtype=np.float64) ** float(s)
        ns[0] = 1.0
        vals = base.values / ns
    else:
        from .arith import _ones_convolve
        pw = np.zeros(limit + 1, dtype=np.float64)
        pw[1:] = np.arange(1, limit + 1, dtype=np.float64) ** (-float(s))
        vals = _ones_convolve(pw)
    return FnTable(kind="custom", param=s, limit=limit, values=vals)


def normalized_jordan_table(s: float, limit: int) -> FnTable:
    """values[n] = J_s(n)/n^s = prod over p | n of (1 - p^-s)."""
    if s <= 0.0:
        raise ValueError(f"s must be positive, got {s}")
    vals = np.ones(limit + 1, dtype=np.float64)
    vals[0] = 0.0
    for p in primes_upto(limit):
        vals[p::p] *= 1.0 - float(p) ** -float(s)
    return FnTable(kind="custom", param=s, limit=limit, values=vals)


# ---------------------------------------------------------------------------
# experiments


def _validate_grid(grid) -> list[int]:
    out = []
    prev = 0
    for raw in grid:
        n = int(raw)
        if n != raw or n < 1:
            raise ValueError(f"grid entries must be positive integers, got {raw!r}")
        if n <= prev:
            raise ValueError(f"grid must be strictly increasing, got {list(grid)}")
        out.append(n)
        prev = n
    return out


def run_experiment(config: ExperimentConfig) -> list[ConvolutionReport]:
    """Execute one convolution experiment over the N grid.

    Tables are built once at max(grid)+h; the main term does not depend on N
    and is computed once. Reports come back in grid order.
    """
    grid = _validate_grid(config.grid)
    if not grid:
        return []
    if config.h < 0:
        raise ValueError(f"h must be >= 0, got {config.h}")
    max_n = grid[-1]
    if max_n + config.h > MAX_EXPERIMENT_N:
        raise ValueError(f"max N {max_n} + h exceeds resource guard {MAX_EXPERIMENT_N}")

    if config.pair == "sigma":
        _require_exponents(config)
        series_f, series_g = sigma_series(config.s), sigma_series(config.t)
        f_table = normalized_sigma_table(config.s, max_n)
        g_table = (f_table if config.t == config.s and config.h == 0
                   else normalized_sigma_table(config.t, max_n + config.h))
    elif config.pair == "jordan":
        _require_exponents(config)
        series_f, series_g = jordan_series(config.s), jordan_series(config.t)
        f_table = normalized_jordan_table(config.s, max_n)
        g_table = (f_table if config.t == config.s and config.h == 0
                   else normalized_jordan_table(config.t, max_n + config.h))
    elif config.pair == "custom-file":
        if not config.f_table_path or not config.g_table_path:
            raise ValueError("custom-file pair needs f_table_path and g_table_path")
        series_f = series_g = None
        f_table = load_table(config.f_table_path)
        g_table = load_table(config.g_table_path)
    else:
        raise ValueError(f"unknown pair {config.pair!r}")

    if series_f is not None:
        mt = main_term(series_f, series_g, config.h, target=config.tail_target)
        delta = min(config.s, config.t)
    else:
        mt = None
        delta = None

    reports = []
    for N in grid:
        actual = brute_force_convolution(f_table, g_table, N, config.h,
                                         threads=config.threads)
        if mt is not None:
            main = N * mt.value
            err = actual - main
            b_new = error_bound_new(N, delta, 1.0)
            b_old = error_bound_old(N, delta, 1.0) if delta > 0.5 else math.nan
            reports.append(ConvolutionReport(
                N=N, h=config.h, s=config.s, t=config.t, actual=actual,
                main=main, signed_error=err, bound_new=b_new, bound_old=b_old,
                truncation_R=mt.truncation_R, tail=mt.tail))
        else:
            reports.append(ConvolutionReport(
                N=N, h=config.h, s=None, t=None, actual=actual,
                main=math.nan, signed_error=math.nan, bound_new=math.nan,
                bound_old=math.nan, truncation_R=0, tail=math.nan))
    return reports


def _require_exponents(config: ExperimentConfig) -> None:
    if config.s <= 0.0 or config.t <= 0.0:
        raise ValueError(f"built-in pairs need s, t > 0, got s={config.s}, t={config.t}")


def fit_exponent(reports) -> ExponentFit:
    """Fit log |signed_error| = slope * log N + intercept by least squares.

    Rows whose error is zero to within 1e-9 relative of the sum itself carry
    no exponent information; they are dropped and counted.
    """
    pts = []
    dropped = 0
    for rep in reports:
        if abs(rep.signed_error) < 1e-9 * abs(rep.actual):
            dropped += 1
            continue
        pts.append((math.log(rep.N), math.log(abs(rep.signed_error))))
    if len(pts) < 3:
        raise ValueError(f"exponent fit needs >= 3 usable points, have {len(pts)}"
                         f" ({dropped} dropped)")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = np.abs(A @ np.array([slope, intercept]) - y)
    return ExponentFit(points=tuple(pts), slope=float(slope),
                       intercept=float(intercept),
                       max_residual=float(np.max(resid)), dropped=dropped)


# ---------------------------------------------------------------------------
# gates and report emission


def error_stability(reports, delta: float) -> tuple[bool, list[float]]:
    """Normalized errors |e|/shape(N) and the no-growth verdict.

    The falsifiable desk-scale content of an O(shape) claim: one constant
    majorizes the whole grid, i.e. no normalized value exceeds the running
    maximum of its predecessors by more than 10%.
    """
    q = [abs(r.signed_error) / error_bound_new(r.N, delta, 1.0) for r in reports]
    ok = True
    for j in range(1, len(q)):
        prior = max(q[:j])
        if q[j] > 1.1 * prior and q[j] > 1e-15:
            ok = False
    return ok, q


def crosscheck_constant(config: ExperimentConfig, mt_value: float) -> tuple[float, float] | None:
    """Closed-form constant and |difference| for built-in pairs with h >= 1."""
    if config.h < 1:
        return None
    if config.pair == "sigma":
        const = sigma_pair_constant(config.s, config.t, config.h)
    elif config.pair == "jordan":
        const = jordan_pair_constant(config.s, config.t, config.h)
    else:
        return None
    return const, abs(const - mt_value)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return f"{float(x):.15g}"


def reports_to_csv(reports) -> str:
    """CSV with the fixed column set, numerics at 15 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow([_fmt(r.N), _fmt(r.h), _fmt(r.s), _fmt(r.t),
                         _fmt(r.actual), _fmt(r.main), _fmt(r.signed_error),
                         _fmt(r.bound_new), _fmt(r.bound_old),
                         _fmt(r.truncation_R), _fmt(r.tail)])
    return buf.getvalue()


def _json_num(x):
    if x is None:
        return None
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return None if math.isnan(x) else float(f"{x:.15g}")


def reports_to_json(reports, config: ExperimentConfig, extra: dict | None = None) -> str:
    """JSON document: schema version, experiment header, report rows."""
    from . import __version__
    doc = {
        "schema_version": "1",
        "experiment": {
            "pair": config.pair,
            "s": _json_num(config.s if config.pair != "custom-file" else None),
            "t": _json_num(config.t if config.pair != "custom-file" else None),
            "h": config.h,
            "delta": _json_num(min(config.s, config.t)
                               if config.pair != "custom-file" else None),
            "grid": [r.N for r in reports],
            "tail_target": _json_num(config.tail_target),
            "threads": config.threads,
            "library_version": __version__,
        },
        "reports": [
            {
                "N": r.N, "h": r.h, "s": _json_num(r.s), "t": _json_num(r.t),
                "actual": _json_num(r.actual), "main": _json_num(r.main),
                "signed_error": _json_num(r.signed_error),
                "bound_new": _json_num(r.bound_new),
                "bound_old": _json_num(r.bound_old),
                "R": r.truncation_R, "tail": _json_num(r.tail),
            }
            for r in reports
        ],
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
