"""Quote-context-paragraph dataset curation from raw text corpora."""

from quoteforge.corpus.context import create_context
from quoteforge.corpus.curate import (
    CurationError,
    create_quote_book_mapping,
    generate_triples,
    load_corpus_dir,
    load_quotes_file,
    read_triples_jsonl,
    write_triples_jsonl,
)
from quoteforge.corpus.paraphrase import (
    IdentityParaphraser,
    ParaphraseError,
    WordSwapParaphraser,
    get_paraphraser,
    paraphrase_context,
    paraphrase_triples,
    word_overlap_ratio,
)
from quoteforge.corpus.segment import segment_book
from quoteforge.corpus.types import Book, CurationReport, ParagraphRecord, QuoteRecord, Triple

__all__ = [
    "Book",
    "CurationError",
    "CurationReport",
    "IdentityParaphraser",
    "ParagraphRecord",
    "ParaphraseError",
    "QuoteRecord",
    "Triple",
    "WordSwapParaphraser",
    "create_context",
    "create_quote_book_mapping",
    "generate_triples",
    "get_paraphraser",
    "load_corpus_dir",
    "load_quotes_file",
    "paraphrase_context",
    "paraphrase_triples",
    "read_triples_jsonl",
    "segment_book",
    "word_overlap_ratio",
    "write_triples_jsonl",
]
