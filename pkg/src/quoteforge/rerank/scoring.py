"""Yes-score computation and candidate re-ordering."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from quoteforge.rerank.prompt import build_prompt
from quoteforge.retrieval.index import RankedParagraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class YesScore:
    p_yes: float
    p_no: float

    @property
    def score(self) -> float:
        return yes_score(self.p_yes, self.p_no)


def yes_score(p_yes: float, p_no: float) -> float:
    """Normalized probability of the yes token: p_yes / (p_yes + p_no).

    When the model assigns ~0 mass to both tokens the score is undefined;
    we return 0.5 and warn rather than divide by zero.
    """
    if p_yes < 0 or p_no < 0:
        raise ValueError(f"token probabilities must be nonnegative, got ({p_yes}, {p_no})")
    total = p_yes + p_no
    if total == 0:
        logger.warning("yes/no tokens both have zero probability; returning 0.5")
        return 0.5
    return p_yes / total


def rerank(
    candidates: Sequence[RankedParagraph],
    context: str,
    model,
    max_workers: int | None = None,
) -> list[RankedParagraph]:
    """Re-sort candidates by yes-score, descending; ties fall back to the
    first-stage score, then id. A backend failure drops that candidate only.
    """

    def score_one(candidate: RankedParagraph) -> RankedParagraph | None:
        try:
            p_yes, p_no = model.yes_no_probs(build_prompt(context, candidate.text).rendered)
            return replace(candidate, rerank_score=yes_score(p_yes, p_no))
        except Exception as exc:
            logger.warning("reranker backend failed on candidate %s: %s", candidate.id, exc)
            return None

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            scored = list(pool.map(score_one, candidates))
    else:
        scored = [score_one(c) for c in candidates]
    kept = [c for c in scored if c is not None]
    kept.sort(key=lambda c: (-c.rerank_score, -c.score, c.id))
    return kept
