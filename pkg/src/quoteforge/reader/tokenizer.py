"""Wordpiece-style tokenization with alignment back to source characters.

The shipped tokenizer is vocabulary-free: words are cut into fixed-width
pieces and hashed into a bounded id space, which is enough for trainable
desk-scale encoders. Pretrained tokenizers plug in behind the same protocol
as long as they report piece→word alignment.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Protocol

PAD_ID = 0
BOS_ID = 1
SEP_ID = 2
N_SPECIAL = 3

_WORD = re.compile(r"\S+")


@dataclass(frozen=True)
class TokenSpan:
    start: int
    end: int


@dataclass
class TokenizedText:
    pieces: list[str]
    piece_ids: list[int]
    piece_to_word: list[int]
    word_spans: list[TokenSpan]

    def __len__(self) -> int:
        return len(self.pieces)


class TokenizerBackend(Protocol):
    vocab_size: int

    def tokenize(self, text: str) -> TokenizedText: ...


def _hash_id(piece: str, vocab_size: int) -> int:
    digest = hashlib.blake2b(piece.encode("utf-8"), digest_size=8).digest()
    return N_SPECIAL + int.from_bytes(digest, "little") % (vocab_size - N_SPECIAL)


class HashingWordPieceTokenizer:
    """Split each whitespace word into <=max_piece_chars slices; continuation
    slices carry the ## prefix so sub-word boundaries stay visible."""

    def __init__(self, vocab_size: int = 4096, max_piece_chars: int = 6, lowercase: bool = True):
        if vocab_size <= N_SPECIAL:
            raise ValueError(f"vocab_size must exceed {N_SPECIAL}")
        self.vocab_size = vocab_size
        self.max_piece_chars = max_piece_chars
        self.lowercase = lowercase

    def config(self) -> dict:
        return {
            "vocab_size": self.vocab_size,
            "max_piece_chars": self.max_piece_chars,
            "lowercase": self.lowercase,
        }

    def pieces_for_word(self, word: str) -> list[str]:
        if self.lowercase:
            word = word.lower()
        width = self.max_piece_chars
        slices = [word[i : i + width] for i in range(0, len(word), width)]
        return [slices[0]] + [f"##{s}" for s in slices[1:]]

    def tokenize(self, text: str) -> TokenizedText:
        pieces: list[str] = []
        piece_ids: list[int] = []
        piece_to_word: list[int] = []
        word_spans: list[TokenSpan] = []
        for word_idx, match in enumerate(_WORD.finditer(text)):
            word_spans.append(TokenSpan(match.start(), match.end()))
            for piece in self.pieces_for_word(match.group()):
                pieces.append(piece)
                piece_ids.append(_hash_id(piece, self.vocab_size))
                piece_to_word.append(word_idx)
        return TokenizedText(pieces, piece_ids, piece_to_word, word_spans)
