"""Seeded dataset splits and the train/evaluate experiment driver."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from quoteforge.corpus.types import Book, Triple
from quoteforge.evaluation.metrics import EvalRecord, top_n_f1
from quoteforge.pipeline.config import PipelineConfig
from quoteforge.pipeline.extract import PipelineHandles, extract_quote
from quoteforge.reader.checkpoint import load_reader, save_reader
from quoteforge.reader.training import (
    ReaderTrainConfig,
    evaluate_reader,
    fewshot_finetune,
    train_reader,
)
from quoteforge.rerank.backends import get_reranker_backend
from quoteforge.retrieval.embedding import get_embedder

logger = logging.getLogger(__name__)

# Published full-scale results for the report header. Desk-scale runs with toy
# encoders are not comparable; these are orientation targets only.
REFERENCE_TARGETS = {
    "end_to_end_top1_f1": 45.74,
    "end_to_end_top3_f1": 57.25,
    "reader_em": 77.0,
    "reader_bow_f1": 86.1,
}


@dataclass
class ExperimentConfig:
    mode: str = "ratio"  # "ratio" or "fewshot"
    train_fraction: float = 0.8
    dev_fraction: float = 0.1
    test_fraction: float = 0.1
    fewshot_samples: int = 8
    base_checkpoint: str | None = None  # fewshot continues from this reader
    seed: int = 0
    reader: ReaderTrainConfig = field(default_factory=ReaderTrainConfig)
    fewshot_lr: float = 1e-5

    def to_dict(self) -> dict:
        return asdict(self)


def split_triples(
    triples: Sequence[Triple], config: ExperimentConfig
) -> dict[str, list[Triple]]:
    """Disjoint seeded splits. ratio: shuffled train/dev/test buckets;
    fewshot: exactly ``fewshot_samples`` for training, the rest for test."""
    order = np.random.default_rng(config.seed).permutation(len(triples))
    shuffled = [triples[i] for i in order]
    if config.mode == "fewshot":
        n = config.fewshot_samples
        if n < 1 or n >= len(triples):
            raise ValueError(f"fewshot_samples={n} must be in [1, {len(triples) - 1}]")
        splits = {"train": shuffled[:n], "dev": [], "test": shuffled[n:]}
    elif config.mode == "ratio":
        total = config.train_fraction + config.dev_fraction + config.test_fraction
        if total > 1.0 + 1e-9:
            raise ValueError(f"split fractions sum to {total} > 1")
        n_train = int(len(triples) * config.train_fraction)
        n_dev = int(len(triples) * config.dev_fraction)
        n_test = int(len(triples) * config.test_fraction)
        splits = {
            "train": shuffled[:n_train],
            "dev": shuffled[n_train : n_train + n_dev],
            "test": shuffled[n_train + n_dev : n_train + n_dev + n_test],
        }
    else:
        raise ValueError(f"unknown experiment mode {config.mode!r}")

    seen: set[int] = set()
    for name, part in splits.items():
        ids = {t.context_id for t in part}
        if ids & seen:
            raise ValueError(f"split {name} overlaps another split")
        seen |= ids
    return splits


def evaluate_end_to_end(
    triples: Sequence[Triple],
    bodies: Mapping[str, str],
    pipeline_config: PipelineConfig,
    handles: PipelineHandles,
) -> dict[str, float]:
    """Full retrieve -> re-rank -> read protocol against raw source documents.

    Reports best-F1 over the top-1 and top-3 returned spans, and the fraction
    of queries whose top-k candidate units cover the gold quote (the chunk
    analogue of paragraph precision@k).
    """
    records: list[EvalRecord] = []
    covered_at: list[list[int]] = []
    for triple in triples:
        body = bodies[triple.book_id]
        quote_start = body.index(triple.paragraph) + triple.quote_char_start
        quote_end = quote_start + len(triple.quote)
        result = extract_quote(triple.context, pipeline_config, handles, document=body)
        records.append(EvalRecord(triple.quote, tuple(s.text for s in result.results)))
        covered_at.append(
            [int(s.char_start <= quote_start and s.char_end >= quote_end) for s in result.results]
        )
    n = len(records)
    return {
        "top1_f1": 100.0 * sum(top_n_f1(r, 1) for r in records) / n,
        "top3_f1": 100.0 * sum(top_n_f1(r, 3) for r in records) / n,
        "p_at_1": sum(flags[0] if flags else 0 for flags in covered_at) / n,
        "p_at_3": sum(any(flags[:3]) for flags in covered_at) / n,
        "n": n,
    }


def run_experiment(
    triples: Sequence[Triple],
    config: ExperimentConfig,
    out_dir: Path | str,
    books: Sequence[Book] | None = None,
    pipeline_config: PipelineConfig | None = None,
) -> dict:
    """Train the reader on the configured split and report EM / BoW-F1.

    Evaluation is the reader protocol (gold paragraph given). When ``books``
    are supplied, the test split is additionally scored end-to-end through
    retrieval and re-ranking over the raw documents. Writes report.json plus
    the split manifest and the trained checkpoint under out_dir.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    splits = split_triples(triples, config)

    if config.mode == "fewshot":
        if not config.base_checkpoint:
            raise ValueError("fewshot mode needs base_checkpoint to continue from")
        base = load_reader(config.base_checkpoint)
        reader = fewshot_finetune(
            base,
            splits["train"],
            dev_triples=splits["dev"],
            lr=config.fewshot_lr,
            epochs=config.reader.epochs,
            seed=config.seed,
        )
    else:
        reader = train_reader(splits["train"], splits["dev"], config.reader)

    scores = {
        name: evaluate_reader(reader, part)
        for name, part in splits.items()
        if part and name != "train"
    }
    report = {
        "config": config.to_dict(),
        "split_sizes": {k: len(v) for k, v in splits.items()},
        "scores": {
            name: {"em": s["em"], "bow_f1": s["bow_f1"] * 100.0} for name, s in scores.items()
        },
        "history": reader.history,
        "reference_targets": REFERENCE_TARGETS,
    }
    if books is not None and splits["test"]:
        pipeline_config = pipeline_config or PipelineConfig()
        handles = PipelineHandles(
            embedder=get_embedder(pipeline_config.embedder, dim=pipeline_config.embedder_dim),
            reranker=get_reranker_backend(pipeline_config.reranker),
            reader=reader,
        )
        bodies = {book.book_id: book.body for book in books}
        report["scores"]["end_to_end"] = evaluate_end_to_end(
            splits["test"], bodies, pipeline_config, handles
        )
    (out / "report.json").write_text(json.dumps(report, indent=2), encoding="utf-8")
    (out / "splits.json").write_text(
        json.dumps(
            {name: [t.context_id for t in part] for name, part in splits.items()}, indent=2
        ),
        encoding="utf-8",
    )
    save_reader(reader, out / "reader")
    logger.info("experiment report written to %s", out / "report.json")
    return report
