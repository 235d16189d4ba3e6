"""Metrics and evaluation protocols."""

from quoteforge.evaluation.metrics import (
    EvalRecord,
    MetricReport,
    bow_f1,
    exact_match,
    macro_scores,
    map_at_5,
    mean_precision_at_k,
    precision_at_k,
    top_n_f1,
)

__all__ = [
    "EvalRecord",
    "MetricReport",
    "bow_f1",
    "exact_match",
    "macro_scores",
    "map_at_5",
    "mean_precision_at_k",
    "precision_at_k",
    "top_n_f1",
]
