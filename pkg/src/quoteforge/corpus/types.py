"""Dataset record types for curation."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Book:
    book_id: str
    title: str
    body: str


@dataclass(frozen=True)
class ParagraphRecord:
    paragraph_id: int
    book_id: str
    text: str
    word_count: int


@dataclass(frozen=True)
class QuoteRecord:
    quote_id: str
    text: str
    source_books: tuple[str, ...] = ()


@dataclass(frozen=True)
class Triple:
    """One aligned (quote, context, paragraph) example.

    ``paragraph[quote_char_start:quote_char_end] == quote`` always holds.
    """

    quote_id: str
    context_id: int
    book_id: str
    paragraph_id: int
    context: str
    quote: str
    paragraph: str
    quote_char_start: int
    quote_char_end: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, record: dict) -> "Triple":
        return cls(**{f: record[f] for f in cls.__dataclass_fields__})


@dataclass
class CurationReport:
    n_quotes: int = 0
    n_quotes_found: int = 0
    n_quotes_missed: int = 0
    n_books: int = 0
    n_triples: int = 0
    n_boundary_dropped: int = 0
    paraphraser: str | None = None
    mean_paraphrase_overlap: float | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}
