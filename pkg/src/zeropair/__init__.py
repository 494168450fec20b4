"""Zeta zeros, pair correlation and second-moment laboratory."""

from ._backend import BACKEND
from .counting_stats import (Census, CorrelationHistogram, correlation_histogram, pair_count,
                             repulsion_probe, zero_census)
from .errors import ZeroPairError
from .gue_model import gue_cdf, gue_pair_density, predicted_pairs, sample_control, triangle_gue_integral
from .moments import (TsangParams, delta_u_moment2_N, delta_u_moment_S, pair_triangle_sum,
                      proposition_report, tsang_prediction)
from .scale import log_scale, m_main
from .zero_source import (Provenance, SyntheticSpec, ZeroSet, ingest_zeros, load_zeros,
                          rvm_consistency, scan_zeros, store_zeros, synthesize)
from .zeta_eval import EvalConfig, hardy_z, rs_theta, s_direct, zeta_em

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Census", "CorrelationHistogram", "EvalConfig", "Provenance", "SyntheticSpec",
    "TsangParams", "ZeroPairError", "ZeroSet", "correlation_histogram", "delta_u_moment2_N",
    "delta_u_moment_S", "gue_cdf", "gue_pair_density", "hardy_z", "ingest_zeros", "load_zeros",
    "log_scale", "m_main", "pair_count", "pair_triangle_sum", "predicted_pairs",
    "proposition_report", "repulsion_probe", "rs_theta", "rvm_consistency", "s_direct",
    "sample_control", "scan_zeros", "store_zeros", "synthesize", "triangle_gue_integral",
    "tsang_prediction", "zero_census", "zeta_em",
]
