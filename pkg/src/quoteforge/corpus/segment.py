"""Fixed-length segmentation of book bodies into paragraphs."""

from __future__ import annotations

from quoteforge.corpus.types import Book, ParagraphRecord


def segment_book(book: Book, segment_length: int = 200) -> list[ParagraphRecord]:
    """Greedily pack the book's words into paragraphs of ``segment_length`` words.

    The final paragraph may be shorter; space-joining all paragraphs in id
    order reconstructs the book's word sequence.
    """
    if segment_length < 1:
        raise ValueError(f"segment_length must be >= 1, got {segment_length}")
    words = book.body.split()
    paragraphs = []
    for start in range(0, len(words), segment_length):
        chunk = words[start : start + segment_length]
        paragraphs.append(
            ParagraphRecord(
                paragraph_id=len(paragraphs),
                book_id=book.book_id,
                text=" ".join(chunk),
                word_count=len(chunk),
            )
        )
    return paragraphs
