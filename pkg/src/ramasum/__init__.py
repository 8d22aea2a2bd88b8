"""Ramanujan sums, expansions, and shifted-convolution experiments."""

__version__ = "0.1.0"

from .arith import (FactoredInteger, FnTable, SpfTable, Tables, build_spf_sieve,
                    build_table, divisors, factorize, factorize_trial,
                    load_table, save_table, sigma_real, zeta)
from .asympt import (AsymptoticCheck, check_dk_average, check_ingham,
                     check_mertens, check_phi_average, check_weighted_divisor,
                     ingham_sum, weighted_divisor_sum)
from .expansions import (CoefficientSeries, TruncationChoice, choose_truncation,
                         jordan_series, series_tail_bound, sigma_series,
                         tail_bound, truncated_eval)
from .parseval import (ConvolutionReport, ExperimentConfig, ExponentFit,
                       MainTermResult, brute_force_convolution, error_bound_new,
                       error_bound_old, error_stability, fit_exponent,
                       jordan_pair_constant, main_term, normalized_jordan_table,
                       normalized_sigma_table, reports_to_csv, reports_to_json,
                       run_experiment, sigma_pair_constant)
from .ramanujan import (RamanujanRow, RowCache, correlation_sum,
                        ramanujan_column, ramanujan_row, ramanujan_sum_divisor,
                        ramanujan_sum_holder)

__all__ = [name for name in dir() if not name.startswith("_")]
