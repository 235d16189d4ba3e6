"""Shared text normalization used by curation, retrieval, and metrics."""

from __future__ import annotations

import re
import string

# Typography found in e-book corpora that breaks exact substring search.
_TRANSLATION = str.maketrans(
    {
        "‘": "'",
        "’": "'",
        "‚": "'",
        "“": '"',
        "”": '"',
        "„": '"',
        "–": "-",
        "—": "-",
        "―": "-",
        " ": " ",
    }
)

_WS_RUN = re.compile(r"\s+")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def normalize_text(text: str) -> str:
    """Map curly quotes/dashes to ASCII and collapse whitespace runs to single spaces.

    Case is preserved: quote search is case-sensitive by design.
    """
    return _WS_RUN.sub(" ", text.translate(_TRANSLATION)).strip()


def collapse_whitespace(text: str) -> str:
    """Collapse whitespace runs only; used for exact-match comparison."""
    return _WS_RUN.sub(" ", text).strip()


def word_tokens(text: str) -> list[str]:
    """Lowercased, punctuation-stripped whitespace tokens (bag-of-words unit)."""
    tokens = []
    for raw in text.split():
        tok = raw.lower().translate(_PUNCT_TABLE)
        if tok:
            tokens.append(tok)
    return tokens


def word_set(text: str) -> set[str]:
    return set(word_tokens(text))


def jaccard(a: set[str], b: set[str]) -> float:
    """|a ∩ b| / |a ∪ b|, with 0 when both sets are empty."""
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)
