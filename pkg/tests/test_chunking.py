from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quoteforge.retrieval import split_document

TEXTS = st.text(alphabet="ab cd", min_size=0, max_size=3000)


def words_text(n: int, word_len: int = 7) -> str:
    return " ".join("x" * word_len for _ in range(n))


def test_exact_fit_single_chunk() -> None:
    text = "a" * 1199 + "b"
    chunks = split_document(text)
    assert len(chunks) == 1
    assert (chunks[0].char_start, chunks[0].char_end) == (0, 1200)


def test_two_chunks_with_snapped_boundaries() -> None:
    text = words_text(287)  # 2295 chars; stride ~1100 covers it in two windows
    chunks = split_document(text, chunk_size=1200, chunk_overlap=100)
    assert len(chunks) == 2
    first = chunks[0]
    assert first.char_start == 0
    assert 1100 < first.char_end <= 1200
    # never cut mid-word: boundary char is whitespace-adjacent
    assert text[first.char_end - 1] == " " or text[first.char_end] == " "
    second = chunks[1]
    assert second.char_end == len(text)
    assert first.char_end - second.char_start >= 94  # overlap minus one snap adjustment


def test_short_text_is_one_chunk() -> None:
    chunks = split_document("tiny", chunk_size=1200, chunk_overlap=100)
    assert len(chunks) == 1
    assert chunks[0].text == "tiny"


def test_empty_text_no_chunks() -> None:
    assert split_document("") == []


def test_giant_word_falls_back_to_hard_cut() -> None:
    text = "y" * 3000
    chunks = split_document(text, chunk_size=1000, chunk_overlap=50)
    assert all(c.char_end - c.char_start <= 1000 for c in chunks)
    covered = set()
    for c in chunks:
        covered.update(range(c.char_start, c.char_end))
    assert covered == set(range(3000))


def test_invalid_overlap_rejected() -> None:
    with pytest.raises(ValueError):
        split_document("abc", chunk_size=10, chunk_overlap=10)


@settings(max_examples=60)
@given(text=TEXTS, chunk_size=st.integers(8, 200), overlap=st.integers(0, 7))
def test_full_coverage_and_verbatim_slices(text, chunk_size, overlap) -> None:
    chunks = split_document(text, chunk_size=chunk_size, chunk_overlap=overlap)
    covered = set()
    for c in chunks:
        assert c.text == text[c.char_start : c.char_end]
        assert c.char_end - c.char_start <= chunk_size
        covered.update(range(c.char_start, c.char_end))
    assert covered == set(range(len(text)))
    assert [c.chunk_id for c in chunks] == list(range(len(chunks)))
