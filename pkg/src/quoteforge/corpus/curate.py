"""Triple generation: search quotes in books, align offsets, build contexts."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from quoteforge.corpus.context import create_context
from quoteforge.corpus.segment import segment_book
from quoteforge.corpus.types import Book, CurationReport, QuoteRecord, Triple
from quoteforge.textnorm import normalize_text


class CurationError(RuntimeError):
    pass


def create_quote_book_mapping(
    quotes: Sequence[QuoteRecord], corpus: Iterable[Book]
) -> dict[str, list[str]]:
    """Map each quote_id to the book_ids whose body contains the quote.

    Matching is case-sensitive exact substring containment after shared
    normalization (whitespace collapse, typography to ASCII). Every input
    quote gets an entry, possibly empty.
    """
    mapping: dict[str, list[str]] = {q.quote_id: [] for q in quotes}
    normalized_quotes = [(q.quote_id, normalize_text(q.text)) for q in quotes]
    for book in corpus:
        body = normalize_text(book.body)
        for quote_id, text in normalized_quotes:
            if text and text in body:
                mapping[quote_id].append(book.book_id)
    return mapping


def _curate_book(
    book: Book,
    quotes: Sequence[QuoteRecord],
    segment_length: int,
    window: int,
) -> tuple[list[Triple], int]:
    """Curate one book: one draft triple per (quote, paragraph) hit.

    Quotes that occur in the body but straddle a paragraph boundary produce
    no triple and are counted. context_id is assigned later by the merge;
    drafts carry a placeholder of -1.
    """
    normalized = Book(book.book_id, book.title, normalize_text(book.body))
    paragraphs = segment_book(normalized, segment_length)
    drafts: list[Triple] = []
    boundary_dropped = 0
    for quote in quotes:
        text = normalize_text(quote.text)
        hit_any = False
        for para in paragraphs:
            start = para.text.find(text)
            if start == -1:
                continue
            context = create_context(text, para.text, window)
            assert context is not None
            drafts.append(
                Triple(
                    quote_id=quote.quote_id,
                    context_id=-1,
                    book_id=book.book_id,
                    paragraph_id=para.paragraph_id,
                    context=context,
                    quote=text,
                    paragraph=para.text,
                    quote_char_start=start,
                    quote_char_end=start + len(text),
                )
            )
            hit_any = True
        if not hit_any and text in normalized.body:
            boundary_dropped += 1
    return drafts, boundary_dropped


def generate_triples(
    quotes: Sequence[QuoteRecord],
    corpus: Iterable[Book],
    segment_length: int = 200,
    window: int = 40,
    workers: int = 1,
) -> tuple[list[Triple], CurationReport]:
    """Curate aligned triples for every (quote, book, paragraph) hit.

    Per-book curation runs in parallel when workers > 1; the serialized merge
    assigns context_ids by (book_id, paragraph_id, occurrence order), so the
    output is deterministic regardless of worker scheduling.
    """
    books = sorted(corpus, key=lambda b: b.book_id)
    mapping = create_quote_book_mapping(quotes, books)

    quote_order = {q.quote_id: i for i, q in enumerate(quotes)}
    quotes_per_book: dict[str, list[QuoteRecord]] = {}
    for quote in quotes:
        for book_id in mapping[quote.quote_id]:
            quotes_per_book.setdefault(book_id, []).append(quote)
    hit_books = [b for b in books if b.book_id in quotes_per_book]

    per_book: list[tuple[list[Triple], int]] = []
    if workers > 1 and len(hit_books) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_book = list(
                pool.map(
                    _curate_book,
                    hit_books,
                    [quotes_per_book[b.book_id] for b in hit_books],
                    [segment_length] * len(hit_books),
                    [window] * len(hit_books),
                )
            )
    else:
        per_book = [
            _curate_book(b, quotes_per_book[b.book_id], segment_length, window)
            for b in hit_books
        ]

    drafts = [t for batch, _ in per_book for t in batch]
    drafts.sort(
        key=lambda t: (t.book_id, t.paragraph_id, t.quote_char_start, quote_order[t.quote_id])
    )
    triples = [
        Triple(**{**draft.to_dict(), "context_id": i}) for i, draft in enumerate(drafts)
    ]

    found = sum(1 for q in quotes if mapping[q.quote_id])
    report = CurationReport(
        n_quotes=len(quotes),
        n_quotes_found=found,
        n_quotes_missed=len(quotes) - found,
        n_books=len(books),
        n_triples=len(triples),
        n_boundary_dropped=sum(dropped for _, dropped in per_book),
    )
    return triples, report


def load_corpus_dir(path: Path | str) -> list[Book]:
    """Load one plain-text book per file; the filename stem is the book_id."""
    directory = Path(path)
    if not directory.is_dir():
        raise CurationError(f"corpus directory not found: {directory}")
    books = []
    for file in sorted(directory.glob("*.txt")):
        books.append(Book(book_id=file.stem, title=file.stem, body=file.read_text(encoding="utf-8")))
    return books


def load_quotes_file(path: Path | str) -> list[QuoteRecord]:
    """Load quotes from .jsonl ({"quote_id", "text"}) or plain text (one per line)."""
    file = Path(path)
    if not file.is_file():
        raise CurationError(f"quotes file not found: {file}")
    quotes = []
    if file.suffix == ".jsonl":
        for line in file.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            quotes.append(QuoteRecord(quote_id=str(record["quote_id"]), text=record["text"]))
    else:
        for i, line in enumerate(file.read_text(encoding="utf-8").splitlines()):
            if line.strip():
                quotes.append(QuoteRecord(quote_id=f"q{i:05d}", text=line.strip()))
    return quotes


def write_triples_jsonl(triples: Sequence[Triple], path: Path | str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for triple in triples:
            fh.write(json.dumps(triple.to_dict(), ensure_ascii=False) + "\n")


def read_triples_jsonl(path: Path | str) -> list[Triple]:
    triples = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                triples.append(Triple.from_dict(json.loads(line)))
    return triples
