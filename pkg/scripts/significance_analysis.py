"""One-off significance analysis between two prediction runs.

Not a library contract: this is the notebook-style companion for comparing
two systems' per-record BoW-F1 distributions with a Mann-Whitney U test.

Usage:
    python3 scripts/significance_analysis.py \
        --gold triples.jsonl --a run_a_predictions.jsonl --b run_b_predictions.jsonl

Prediction files carry one {"context_id", "spans": [...]} record per line
(the `quoteforge evaluate` input format). Prints both systems' mean F1, the
U statistic, and the two-sided p-value.
"""

from __future__ import annotations

import argparse
import json

from scipy.stats import mannwhitneyu

from quoteforge.corpus import read_triples_jsonl
from quoteforge.evaluation import bow_f1


def per_record_f1(predictions_path: str, gold_by_id: dict) -> list[float]:
    scores = []
    with open(predictions_path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            triple = gold_by_id[record["context_id"]]
            spans = record.get("spans", [])
            scores.append(bow_f1(spans[0], triple.quote) if spans else 0.0)
    return scores


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--gold", required=True)
    parser.add_argument("--a", required=True, help="predictions of system A")
    parser.add_argument("--b", required=True, help="predictions of system B")
    args = parser.parse_args()

    gold_by_id = {t.context_id: t for t in read_triples_jsonl(args.gold)}
    scores_a = per_record_f1(args.a, gold_by_id)
    scores_b = per_record_f1(args.b, gold_by_id)

    stat, p_value = mannwhitneyu(scores_a, scores_b, alternative="two-sided")
    print(f"system A: n={len(scores_a)}, mean F1={sum(scores_a) / len(scores_a):.4f}")
    print(f"system B: n={len(scores_b)}, mean F1={sum(scores_b) / len(scores_b):.4f}")
    print(f"Mann-Whitney U={stat:.1f}, two-sided p={p_value:.5f}")
    print("significant at p<0.05" if p_value < 0.05 else "not significant at p<0.05")


if __name__ == "__main__":
    main()
