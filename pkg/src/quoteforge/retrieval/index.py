"""Exact cosine-similarity vector index with on-disk persistence."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from quoteforge.binio import read_matrix, write_matrix
from quoteforge.retrieval.chunking import Chunk
from quoteforge.retrieval.embedding import EmbeddingBackend, EmbeddingVector

VECTORS_FILE = "vectors.bin"
CHUNKS_FILE = "chunks.jsonl"


class RetrievalError(RuntimeError):
    pass


@dataclass(frozen=True)
class RankedParagraph:
    """One retrieval candidate: a chunk (or curated paragraph) with its score."""

    id: int
    score: float
    text: str
    book_id: str = ""
    char_start: int = 0
    char_end: int = 0
    rerank_score: float | None = None


class VectorIndex:
    """Immutable after construction; safe for concurrent readers."""

    def __init__(self, vectors: np.ndarray, chunks: Sequence[Chunk]):
        if len(vectors) != len(chunks):
            raise RetrievalError(f"{len(vectors)} vectors for {len(chunks)} chunks")
        self.vectors = np.asarray(vectors, dtype=np.float32)
        self.chunks = list(chunks)
        norms = np.linalg.norm(self.vectors, axis=1, keepdims=True)
        self._unit = np.divide(
            self.vectors, norms, out=np.zeros_like(self.vectors), where=norms > 0
        )

    def __len__(self) -> int:
        return len(self.chunks)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1]) if self.vectors.size else 0

    def save(self, directory: Path | str) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        with open(directory / VECTORS_FILE, "wb") as fh:
            write_matrix(fh, self.vectors)
        with open(directory / CHUNKS_FILE, "w", encoding="utf-8") as fh:
            for chunk in self.chunks:
                fh.write(json.dumps(asdict(chunk), ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, directory: Path | str) -> "VectorIndex":
        directory = Path(directory)
        if not (directory / VECTORS_FILE).is_file():
            raise RetrievalError(f"no {VECTORS_FILE} under {directory}")
        with open(directory / VECTORS_FILE, "rb") as fh:
            vectors = read_matrix(fh)
        chunks = []
        with open(directory / CHUNKS_FILE, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    chunks.append(Chunk(**json.loads(line)))
        return cls(vectors, chunks)

    def subset(self, book_id: str) -> "VectorIndex":
        """Restricted view over one source document's chunks."""
        keep = [i for i, c in enumerate(self.chunks) if c.book_id == book_id]
        return VectorIndex(self.vectors[keep], [self.chunks[i] for i in keep])


def build_index(
    chunks: Sequence[Chunk], backend: EmbeddingBackend, workers: int = 1
) -> VectorIndex:
    """Embed all chunks (optionally in parallel batches) into a fresh index."""
    texts = [c.text for c in chunks]
    if not texts:
        return VectorIndex(np.zeros((0, backend.dim), dtype=np.float32), [])
    if workers > 1:
        batches = np.array_split(np.arange(len(texts)), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda idx: backend.encode([texts[i] for i in idx]), batches)
            )
        vectors = np.vstack([p for p in parts if len(p)])
    else:
        vectors = backend.encode(texts)
    return VectorIndex(vectors, chunks)


def search_top_k(
    index: VectorIndex, query: EmbeddingVector | np.ndarray, k: int = 20
) -> list[RankedParagraph]:
    """Top-k chunks by cosine similarity, ties broken by ascending chunk id."""
    values = query.values if isinstance(query, EmbeddingVector) else np.asarray(query)
    if len(index) == 0:
        return []
    if values.shape[0] != index.dim:
        raise RetrievalError(f"query dim {values.shape[0]} != index dim {index.dim}")
    qnorm = np.linalg.norm(values)
    unit_query = values / qnorm if qnorm > 0 else values
    scores = index._unit @ unit_query.astype(np.float32)
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], index.chunks[i].chunk_id))
    results = []
    for i in order[:k]:
        chunk = index.chunks[i]
        results.append(
            RankedParagraph(
                id=chunk.chunk_id,
                score=float(scores[i]),
                text=chunk.text,
                book_id=chunk.book_id,
                char_start=chunk.char_start,
                char_end=chunk.char_end,
            )
        )
    return results
