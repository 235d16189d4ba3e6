"""Packing (context, paragraph) pairs into one marker-delimited wordpiece sequence."""

from __future__ import annotations

from dataclasses import dataclass

from quoteforge.corpus.types import Triple
from quoteforge.reader.tokenizer import BOS_ID, SEP_ID, TokenizerBackend, TokenSpan

MAX_INPUT_WORDPIECES = 384


class PackingError(ValueError):
    pass


@dataclass
class PackedInput:
    """Layout: [BOS] context [SEP] paragraph [SEP], at most max_len positions.

    Only the paragraph can be truncated (tail first); the trailing separator
    is always kept. paragraph_mask is True exactly on paragraph wordpieces.
    wordpiece_to_token maps paragraph positions to paragraph word indices and
    is -1 everywhere else; char_spans are those words' offsets into
    ``paragraph``.
    """

    wordpieces: list[int]
    paragraph_mask: list[bool]
    wordpiece_to_token: list[int]
    char_spans: list[TokenSpan]
    context: str
    paragraph: str
    max_len: int
    truncated: bool

    def __len__(self) -> int:
        return len(self.wordpieces)

    def paragraph_positions(self) -> list[int]:
        return [i for i, m in enumerate(self.paragraph_mask) if m]

    def span_text(self, start_wp: int, end_wp: int) -> str:
        """Recover the original characters covered by [start_wp, end_wp]."""
        first = self.wordpiece_to_token[start_wp]
        last = self.wordpiece_to_token[end_wp]
        if first < 0 or last < 0:
            raise PackingError(f"positions ({start_wp}, {end_wp}) are not in the paragraph")
        return self.paragraph[self.char_spans[first].start : self.char_spans[last].end]


def pack_input(
    context: str,
    paragraph: str,
    tokenizer: TokenizerBackend,
    max_len: int = MAX_INPUT_WORDPIECES,
) -> PackedInput:
    ctx = tokenizer.tokenize(context)
    para = tokenizer.tokenize(paragraph)
    budget = max_len - len(ctx) - 3
    if budget < 1:
        raise PackingError(
            f"context occupies {len(ctx)} wordpieces; with markers it leaves no room "
            f"for any paragraph content under max_len={max_len}"
        )
    truncated = len(para) > budget
    kept = min(len(para), budget)

    ids = [BOS_ID] + ctx.piece_ids + [SEP_ID] + para.piece_ids[:kept] + [SEP_ID]
    para_start = len(ctx) + 2
    mask = [False] * len(ids)
    to_token = [-1] * len(ids)
    for offset in range(kept):
        mask[para_start + offset] = True
        to_token[para_start + offset] = para.piece_to_word[offset]
    return PackedInput(
        wordpieces=ids,
        paragraph_mask=mask,
        wordpiece_to_token=to_token,
        char_spans=para.word_spans,
        context=context,
        paragraph=paragraph,
        max_len=max_len,
        truncated=truncated,
    )


def chars_to_token_span(triple: Triple, packed: PackedInput) -> tuple[int, int] | None:
    """Smallest wordpiece window covering the quote's character range.

    Both endpoints are inclusive. Returns None when the gold span was lost to
    paragraph truncation (the example is unanswerable for training).
    """
    qs, qe = triple.quote_char_start, triple.quote_char_end
    if not 0 <= qs < qe <= len(packed.paragraph):
        raise PackingError(f"quote offsets [{qs}, {qe}) invalid for the paragraph")
    word_indices = [
        i for i, span in enumerate(packed.char_spans) if span.end > qs and span.start < qe
    ]
    if not word_indices:
        return None
    first_word, last_word = word_indices[0], word_indices[-1]
    positions_by_word: dict[int, list[int]] = {}
    for pos in packed.paragraph_positions():
        positions_by_word.setdefault(packed.wordpiece_to_token[pos], []).append(pos)
    if first_word not in positions_by_word or last_word not in positions_by_word:
        return None
    return positions_by_word[first_word][0], positions_by_word[last_word][-1]
