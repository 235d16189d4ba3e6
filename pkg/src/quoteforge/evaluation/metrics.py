"""Span-level and ranking metrics. All functions are pure."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Sequence

from quoteforge.textnorm import collapse_whitespace, word_tokens

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalRecord:
    gold_quote: str
    predictions: tuple[str, ...]
    gold_paragraph_id: int = -1
    predicted_paragraph_ids: tuple[int, ...] = ()


@dataclass
class MetricReport:
    em: float = 0.0  # ratio in [0, 1]
    bow_f1: float = 0.0  # percentage in [0, 100]
    top1_f1: float = 0.0
    top3_f1: float = 0.0
    p_at_k: dict[int, float] = field(default_factory=dict)
    map_at_5: float | None = None
    n: int = 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["p_at_k"] = {str(k): v for k, v in self.p_at_k.items()}
        return out


def exact_match(pred: str, gold: str) -> int:
    """1 iff the strings agree after whitespace collapse. Case matters: a
    span differing only in capitalization is not an exact recovery."""
    return int(collapse_whitespace(pred) == collapse_whitespace(gold))


def bow_f1(pred: str, gold: str) -> float:
    """Harmonic mean of bag-of-words precision and recall.

    Token overlap is a multiset intersection, so repeated words must be
    matched as many times as they occur.
    """
    pred_tokens = word_tokens(pred)
    gold_tokens = word_tokens(gold)
    if not gold_tokens:
        logger.warning("gold quote has no tokens after normalization; scoring 0")
        return 0.0
    if not pred_tokens:
        return 0.0
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def top_n_f1(record: EvalRecord, n: int) -> float:
    """Best BoW-F1 among the first n predictions (0 when there are none)."""
    if not record.predictions:
        return 0.0
    return max(bow_f1(p, record.gold_quote) for p in record.predictions[:n])


def precision_at_k(
    predicted_paragraph_ids: Sequence[int], gold_paragraph_id: int, k: int
) -> int:
    """1 iff the gold paragraph appears among the first k predictions."""
    return int(gold_paragraph_id in list(predicted_paragraph_ids)[:k])


def mean_precision_at_k(records: Sequence[EvalRecord], k: int) -> float:
    if not records:
        raise ValueError("cannot average precision over zero records")
    return sum(
        precision_at_k(r.predicted_paragraph_ids, r.gold_paragraph_id, k) for r in records
    ) / len(records)


def map_at_5(relevance_lists: Sequence[Sequence[int]]) -> float:
    """Mean average precision of binary judgments over ranked top-5 spans.

    Per record: AP = sum over relevant ranks r of (relevant in top r)/r,
    normalized by min(5, total relevant). No relevant spans contributes 0.
    """
    if not relevance_lists:
        raise ValueError("map_at_5 needs at least one judgment list")
    ap_values = []
    for judgments in relevance_lists:
        judgments = list(judgments)[:5]
        total_relevant = sum(judgments)
        if total_relevant == 0:
            ap_values.append(0.0)
            continue
        running = 0
        precision_sum = 0.0
        for rank, relevant in enumerate(judgments, start=1):
            if relevant:
                running += 1
                precision_sum += running / rank
        ap_values.append(precision_sum / min(5, total_relevant))
    return sum(ap_values) / len(ap_values)


def macro_scores(records: Sequence[EvalRecord]) -> MetricReport:
    """Unweighted means over records; F1 fields are reported as percentages."""
    if not records:
        raise ValueError("cannot compute macro scores over zero records")
    n = len(records)
    em = sum(exact_match(r.predictions[0] if r.predictions else "", r.gold_quote) for r in records) / n
    top1 = sum(top_n_f1(r, 1) for r in records) / n
    top3 = sum(top_n_f1(r, 3) for r in records) / n
    report = MetricReport(
        em=em,
        bow_f1=top1 * 100.0,
        top1_f1=top1 * 100.0,
        top3_f1=top3 * 100.0,
        n=n,
    )
    if any(r.predicted_paragraph_ids for r in records):
        report.p_at_k = {k: mean_precision_at_k(records, k) for k in (1, 3)}
    return report
