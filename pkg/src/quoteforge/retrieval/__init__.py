"""First-stage candidate selection: chunking, vector search, BM25 baseline."""

from quoteforge.retrieval.analysis import jaccard_chunk_similarity
from quoteforge.retrieval.bm25 import Bm25Index, bm25_rank
from quoteforge.retrieval.chunking import Chunk, split_document
from quoteforge.retrieval.embedding import (
    EmbeddingBackend,
    EmbeddingVector,
    HashingNgramEmbedder,
    HashingWordEmbedder,
    embed,
    get_embedder,
)
from quoteforge.retrieval.index import (
    RankedParagraph,
    RetrievalError,
    VectorIndex,
    build_index,
    search_top_k,
)

__all__ = [
    "Bm25Index",
    "Chunk",
    "EmbeddingBackend",
    "EmbeddingVector",
    "HashingNgramEmbedder",
    "HashingWordEmbedder",
    "RankedParagraph",
    "RetrievalError",
    "VectorIndex",
    "bm25_rank",
    "build_index",
    "embed",
    "get_embedder",
    "jaccard_chunk_similarity",
    "search_top_k",
    "split_document",
]
