"""Window-based context generation around a quote occurrence."""

from __future__ import annotations


def create_context(quote: str, paragraph: str, window: int = 40) -> str | None:
    """Join the ``window`` words before and after the quote's first occurrence.

    The quote itself is excluded; fewer words are used at paragraph
    boundaries. Returns None when the quote does not occur in the paragraph.
    """
    position = paragraph.find(quote)
    if position == -1:
        return None
    preceding = paragraph[:position].split()[-window:]
    following = paragraph[position + len(quote) :].split()[:window]
    return " ".join(preceding + following)
