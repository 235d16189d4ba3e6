from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quoteforge.reader.tokenizer import HashingWordPieceTokenizer
from quoteforge.synthetic import make_sentinel_corpus


@pytest.fixture(scope="session")
def tokenizer() -> HashingWordPieceTokenizer:
    return HashingWordPieceTokenizer(vocab_size=4096)

@pytest.fixture(scope="session")
def small_corpus():
    return make_sentinel_corpus(n_books=6, paragraphs_per_book=4, seed=11)


@pytest.fixture(scope="session")
def small_triples(small_corpus):
    triples, report = small_corpus.curate()
    assert report.n_triples == len(triples)
    return triples
