"""Pluggable text encoders. The shipped backends are deterministic feature hashers;
pretrained sentence encoders drop in behind the same protocol."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from quoteforge.textnorm import word_tokens


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


class EmbeddingBackend(Protocol):
    name: str
    dim: int

    def encode(self, texts: Sequence[str]) -> np.ndarray: ...


def _bucket(token: str, dim: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") % dim


class HashingWordEmbedder:
    """Feature hashing of word unigram counts, L2-normalized.

    Buckets are unsigned: at desk-scale dimensions, sign hashing makes
    two-token texts cancel to zero vectors far too often.
    """

    name = "hash-word"

    def __init__(self, dim: int = 64):
        self.dim = dim

    def _features(self, text: str) -> list[str]:
        return word_tokens(text)

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float32)
        for row, text in enumerate(texts):
            for token in self._features(text):
                out[row, _bucket(token, self.dim)] += 1.0
        norms = np.linalg.norm(out, axis=1, keepdims=True)
        np.divide(out, norms, out=out, where=norms > 0)
        return out


class HashingNgramEmbedder(HashingWordEmbedder):
    """Word unigrams plus character trigrams; more tolerant of morphology."""

    name = "hash-ngram"

    def _features(self, text: str) -> list[str]:
        tokens = word_tokens(text)
        features = list(tokens)
        for token in tokens:
            padded = f"#{token}#"
            features.extend(padded[i : i + 3] for i in range(len(padded) - 2))
        return features


_EMBEDDERS = {
    HashingWordEmbedder.name: HashingWordEmbedder,
    HashingNgramEmbedder.name: HashingNgramEmbedder,
}


def register_embedder(name: str, factory) -> None:
    """Expose an external encoder under a config-addressable name."""
    _EMBEDDERS[name] = factory


def get_embedder(name: str, dim: int = 64) -> EmbeddingBackend:
    try:
        return _EMBEDDERS[name](dim=dim)
    except KeyError:
        raise KeyError(f"unknown embedder {name!r}; known: {sorted(_EMBEDDERS)}")


def embed(texts: Sequence[str], backend: EmbeddingBackend) -> list[EmbeddingVector]:
    """Encode each text; failures are reported with the offending text index."""
    if not texts:
        return []
    try:
        matrix = backend.encode(texts)
    except Exception:
        # Retry one by one so the error names the failing input.
        vectors = []
        for i, text in enumerate(texts):
            try:
                vectors.append(EmbeddingVector(backend.encode([text])[0]))
            except Exception as exc:
                from quoteforge.retrieval.index import RetrievalError

                raise RetrievalError(f"embedding backend failed on text {i}: {exc}") from exc
        return vectors
    if matrix.shape != (len(texts), backend.dim):
        from quoteforge.retrieval.index import RetrievalError

        raise RetrievalError(
            f"backend {backend.name} returned shape {matrix.shape}, "
            f"expected {(len(texts), backend.dim)}"
        )
    return [EmbeddingVector(row) for row in matrix]
