"""Training-example generation with hard-negative sampling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

from quoteforge.corpus.types import ParagraphRecord, Triple
from quoteforge.retrieval.bm25 import Bm25Index

Strategy = Literal["adjacent", "bm25"]


@dataclass(frozen=True)
class RerankExample:
    context: str
    paragraph: str
    label: Literal["yes", "no"]


@dataclass
class RerankTrainingReport:
    n_triples: int = 0
    n_examples: int = 0
    n_positive: int = 0
    n_shortfall: int = 0
    shortfall_context_ids: list[int] = field(default_factory=list)


def sample_hard_negatives(
    triple: Triple,
    all_paragraphs: Sequence[ParagraphRecord],
    n: int,
    strategy: Strategy = "bm25",
    bm25_index: Bm25Index | None = None,
) -> list[ParagraphRecord]:
    """Pick up to n non-positive paragraphs that are hard to tell apart.

    adjacent: nearest ordinals around the positive, alternating after/before.
    bm25: top paragraphs by BM25 score for the triple's context.
    The positive paragraph is never returned and there are no repeats.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    by_id = {p.paragraph_id: p for p in all_paragraphs}
    positive_id = triple.paragraph_id
    if strategy == "adjacent":
        picked = []
        for distance in range(1, len(all_paragraphs) + 1):
            for candidate in (positive_id + distance, positive_id - distance):
                if candidate in by_id and candidate != positive_id:
                    picked.append(by_id[candidate])
                    if len(picked) == n:
                        return picked
        return picked
    if strategy == "bm25":
        ordered = sorted(all_paragraphs, key=lambda p: p.paragraph_id)
        index = bm25_index or Bm25Index([p.text for p in ordered])
        ranked = index.rank(triple.context, k=len(ordered))
        picked = []
        for item in ranked:
            record = ordered[item.id]
            if record.paragraph_id != positive_id:
                picked.append(record)
                if len(picked) == n:
                    break
        return picked
    raise ValueError(f"unknown strategy {strategy!r}")


def make_training_examples(
    triples: Sequence[Triple],
    paragraphs_by_book: Mapping[str, Sequence[ParagraphRecord]],
    n: int = 9,
    strategy: Strategy = "bm25",
) -> tuple[list[RerankExample], RerankTrainingReport]:
    """One positive plus up to n hard negatives per triple.

    Deterministic: BM25 ties break on ascending paragraph id, adjacency on the
    fixed after-before alternation.
    """
    report = RerankTrainingReport(n_triples=len(triples))
    examples: list[RerankExample] = []
    bm25_cache: dict[str, Bm25Index] = {}
    for triple in triples:
        paragraphs = paragraphs_by_book[triple.book_id]
        if strategy == "bm25" and triple.book_id not in bm25_cache:
            ordered = sorted(paragraphs, key=lambda p: p.paragraph_id)
            bm25_cache[triple.book_id] = Bm25Index([p.text for p in ordered])
        examples.append(RerankExample(triple.context, triple.paragraph, "yes"))
        report.n_positive += 1
        negatives = sample_hard_negatives(
            triple, paragraphs, n, strategy, bm25_index=bm25_cache.get(triple.book_id)
        )
        if len(negatives) < n:
            report.n_shortfall += 1
            report.shortfall_context_ids.append(triple.context_id)
        examples.extend(RerankExample(triple.context, p.text, "no") for p in negatives)
    report.n_examples = len(examples)
    return examples, report
