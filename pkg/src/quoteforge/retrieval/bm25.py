"""Okapi BM25 over the shared normalized token stream."""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from quoteforge.retrieval.index import RankedParagraph
from quoteforge.textnorm import word_tokens


class Bm25Index:
    """k1/b-parameterized Okapi scoring with the nonnegative (+1-smoothed) idf."""

    def __init__(self, documents: Sequence[str], k1: float = 1.5, b: float = 0.75):
        self.documents = list(documents)
        self.k1 = k1
        self.b = b
        self._term_freqs = [Counter(word_tokens(d)) for d in self.documents]
        self._doc_lens = [sum(tf.values()) for tf in self._term_freqs]
        n = len(self.documents)
        self._avgdl = (sum(self._doc_lens) / n) if n else 0.0
        df = Counter()
        for tf in self._term_freqs:
            df.update(tf.keys())
        self._idf = {
            term: math.log(1.0 + (n - count + 0.5) / (count + 0.5))
            for term, count in df.items()
        }

    def scores(self, query: str) -> list[float]:
        terms = word_tokens(query)
        out = []
        for tf, doc_len in zip(self._term_freqs, self._doc_lens):
            norm = self.k1 * (1 - self.b + self.b * doc_len / self._avgdl) if self._avgdl else 0.0
            score = 0.0
            for term in terms:
                freq = tf.get(term, 0)
                if freq:
                    score += self._idf[term] * freq * (self.k1 + 1) / (freq + norm)
            out.append(score)
        return out

    def rank(self, query: str, k: int) -> list[RankedParagraph]:
        scores = self.scores(query)
        order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
        return [
            RankedParagraph(id=i, score=scores[i], text=self.documents[i])
            for i in order[:k]
        ]


def bm25_rank(
    corpus_paragraphs: Sequence[str], query: str, k: int, k1: float = 1.5, b: float = 0.75
) -> list[RankedParagraph]:
    """Rank paragraphs for the query; ids are corpus positions, ties in id order."""
    if not corpus_paragraphs:
        return []
    return Bm25Index(corpus_paragraphs, k1=k1, b=b).rank(query, k)
