"""The retrieve -> re-rank -> read path for one query context."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from quoteforge.pipeline.config import PipelineConfig
from quoteforge.rerank.backends import TokenProbabilityBackend
from quoteforge.rerank.scoring import rerank
from quoteforge.retrieval.chunking import split_document
from quoteforge.retrieval.embedding import EmbeddingBackend
from quoteforge.retrieval.index import VectorIndex, build_index, search_top_k
from quoteforge.reader.training import TrainedReader


class PipelineError(RuntimeError):
    pass


@dataclass
class PipelineHandles:
    embedder: EmbeddingBackend
    reranker: TokenProbabilityBackend
    reader: TrainedReader
    index: VectorIndex | None = None


@dataclass(frozen=True)
class ExtractedSpan:
    text: str
    score: float
    rerank_score: float
    paragraph_id: int
    char_start: int
    char_end: int
    book_id: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExtractionResult:
    context: str
    results: list[ExtractedSpan] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"context": self.context, "results": [r.to_dict() for r in self.results]}


def extract_quote(
    context: str,
    config: PipelineConfig,
    handles: PipelineHandles,
    document: str | None = None,
    document_id: str | None = None,
    top_k: int | None = None,
    spans_per_paragraph: int | None = None,
) -> ExtractionResult:
    """Retrieve top candidates for the context, re-rank them, and read spans
    out of the best few. Deterministic under fixed weights and config.

    ``document`` indexes raw text on the fly; otherwise handles.index is
    searched (optionally restricted to ``document_id``).
    """
    if document is not None:
        chunks = split_document(
            document, document_id or "document", config.chunk_size, config.chunk_overlap
        )
        index = build_index(chunks, handles.embedder)
    elif handles.index is not None:
        index = handles.index.subset(document_id) if document_id else handles.index
    else:
        raise PipelineError("no index loaded and no document supplied")
    if len(index) == 0:
        raise PipelineError("the search index is empty")

    keep = min(top_k or config.rerank_keep, config.first_stage_k)
    per_paragraph = spans_per_paragraph or config.spans_per_paragraph

    query = handles.embedder.encode([context])[0]
    candidates = search_top_k(index, query, config.first_stage_k)
    ranked = rerank(candidates, context, handles.reranker)[:keep]

    spans: list[ExtractedSpan] = []
    for candidate in ranked:
        predictions = handles.reader.predict(
            context, candidate.text, top_k=per_paragraph, paragraph_id=candidate.id
        )
        for prediction in predictions:
            spans.append(
                ExtractedSpan(
                    text=prediction.text,
                    score=prediction.score,
                    rerank_score=candidate.rerank_score or 0.0,
                    paragraph_id=candidate.id,
                    char_start=candidate.char_start + prediction.char_start,
                    char_end=candidate.char_start + prediction.char_end,
                    book_id=candidate.book_id,
                )
            )
    return ExtractionResult(context=context, results=spans)
