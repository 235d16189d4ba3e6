"""Pluggable context paraphrasing and the word-overlap hardness measure."""

from __future__ import annotations

from typing import Protocol, Sequence

from quoteforge.corpus.types import Triple
from quoteforge.textnorm import jaccard, word_set


class Paraphraser(Protocol):
    name: str

    def rewrite(self, text: str) -> str: ...


class ParaphraseError(RuntimeError):
    def __init__(self, message: str, context_id: int | None = None):
        super().__init__(message if context_id is None else f"context {context_id}: {message}")
        self.context_id = context_id


class IdentityParaphraser:
    """Default backend: returns the input unchanged."""

    name = "identity"

    def rewrite(self, text: str) -> str:
        return text


# Deterministic swap table for the offline stub backend. Small on purpose:
# real paraphrasing is an external service plugged in behind the same protocol.
_SWAPS = {
    "big": "large",
    "small": "tiny",
    "happy": "glad",
    "sad": "unhappy",
    "fast": "quick",
    "slow": "sluggish",
    "begin": "start",
    "end": "finish",
    "old": "ancient",
    "new": "fresh",
}


class WordSwapParaphraser:
    """Deterministic rule-based rewriter: swaps words from a fixed synonym table."""

    name = "wordswap"

    def rewrite(self, text: str) -> str:
        out = []
        for word in text.split():
            lower = word.lower()
            replacement = _SWAPS.get(lower)
            if replacement is None:
                out.append(word)
            elif word[0].isupper():
                out.append(replacement.capitalize())
            else:
                out.append(replacement)
        return " ".join(out)


_PARAPHRASERS: dict[str, type] = {
    IdentityParaphraser.name: IdentityParaphraser,
    WordSwapParaphraser.name: WordSwapParaphraser,
}


def get_paraphraser(name: str) -> Paraphraser:
    try:
        return _PARAPHRASERS[name]()
    except KeyError:
        raise ParaphraseError(f"unknown paraphraser {name!r}; known: {sorted(_PARAPHRASERS)}")


def paraphrase_context(context: str, paraphraser: Paraphraser) -> str:
    return paraphraser.rewrite(context)


def paraphrase_triples(
    triples: Sequence[Triple], paraphraser: Paraphraser
) -> tuple[list[Triple], float]:
    """Rewrite every context offline; returns new triples and the mean word overlap
    between original and rewritten contexts (lower = harder retrieval)."""
    out = []
    overlaps = []
    for triple in triples:
        try:
            rewritten = paraphraser.rewrite(triple.context)
        except Exception as exc:
            raise ParaphraseError(str(exc), context_id=triple.context_id) from exc
        overlaps.append(word_overlap_ratio(triple.context, rewritten))
        out.append(Triple(**{**triple.to_dict(), "context": rewritten}))
    mean_overlap = sum(overlaps) / len(overlaps) if overlaps else 0.0
    return out, mean_overlap


def word_overlap_ratio(a: str, b: str) -> float:
    """Jaccard overlap of the unique-word sets of two texts, in [0, 1]."""
    return jaccard(word_set(a), word_set(b))
