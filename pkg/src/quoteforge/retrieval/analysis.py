"""Retrieval quality measures that compare variable-length text units."""

from __future__ import annotations

from quoteforge.textnorm import jaccard, word_set


def jaccard_chunk_similarity(chunk: str, paragraph: str) -> float:
    """Unique-word Jaccard between a retrieved chunk and a reference paragraph."""
    return jaccard(word_set(chunk), word_set(paragraph))
