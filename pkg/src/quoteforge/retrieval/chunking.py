"""Character-window document chunking with whitespace-snapped boundaries."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Chunk:
    chunk_id: int
    book_id: str
    char_start: int
    char_end: int
    text: str


def _snap_end(text: str, start: int, raw_end: int) -> int:
    """Pull the cut back to just after the last whitespace so no word is bisected.

    Falls back to the hard cut when a single word fills the whole window.
    """
    if text[raw_end].isspace() or text[raw_end - 1].isspace():
        return raw_end
    i = raw_end - 1
    while i > start and not text[i].isspace():
        i -= 1
    if i == start:
        return raw_end
    return i + 1


def _snap_start(text: str, raw_start: int) -> int:
    """Pull a mid-word start back to the word's first character."""
    i = raw_start
    while i > 0 and not text[i - 1].isspace() and not text[i].isspace():
        i -= 1
    return i


def split_document(
    text: str,
    book_id: str = "",
    chunk_size: int = 1200,
    chunk_overlap: int = 100,
) -> list[Chunk]:
    """Sliding character windows of at most chunk_size with ~chunk_overlap overlap.

    Boundaries are snapped to whitespace, so the effective stride varies by up
    to one word; every character is covered by at least one chunk.
    """
    if not 0 <= chunk_overlap < chunk_size:
        raise ValueError(f"need 0 <= overlap < size, got {chunk_overlap} >= {chunk_size}")
    chunks: list[Chunk] = []
    start = 0
    while start < len(text):
        raw_end = start + chunk_size
        if raw_end >= len(text):
            end = len(text)
        else:
            end = _snap_end(text, start, raw_end)
        chunks.append(Chunk(len(chunks), book_id, start, end, text[start:end]))
        if end == len(text):
            break
        start = max(_snap_start(text, end - chunk_overlap), start + 1)
    return chunks
