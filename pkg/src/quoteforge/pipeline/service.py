"""HTTP search service over a built artifact directory.

Expected layout under the artifact root:
    config.json       pipeline configuration (optional; defaults apply)
    index/            persisted vector index (vectors.bin + chunks.jsonl)
    documents.jsonl   one {"book_id", "title", "text"} record per line
    reader/           trained reader checkpoint
"""

from __future__ import annotations

import importlib
import json
import os
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from quoteforge.corpus.segment import segment_book
from quoteforge.corpus.types import Book
from quoteforge.pipeline.config import PipelineConfig
from quoteforge.pipeline.extract import PipelineError, PipelineHandles, extract_quote
from quoteforge.reader.checkpoint import load_reader
from quoteforge.rerank.backends import get_reranker_backend
from quoteforge.retrieval.embedding import get_embedder
from quoteforge.retrieval.index import VectorIndex

ARTIFACTS_ENV = "QUOTEFORGE_ARTIFACTS"
REGISTRY_ENV = "QUOTEFORGE_BACKEND_REGISTRY"


class SearchRequest(BaseModel):
    context: str
    document_id: str | None = None
    top_k: int | None = None


def _load_registry() -> None:
    """Import a user module that registers extra backends, if configured."""
    module = os.environ.get(REGISTRY_ENV)
    if module:
        importlib.import_module(module)


def load_artifacts(artifact_root: Path | str) -> tuple[PipelineConfig, PipelineHandles, dict[str, Book]]:
    root = Path(artifact_root)
    if not root.is_dir():
        raise FileNotFoundError(f"artifact root does not exist: {root}")
    missing = [
        name
        for name, path in [
            ("index/", root / "index"),
            ("documents.jsonl", root / "documents.jsonl"),
            ("reader/", root / "reader"),
        ]
        if not path.exists()
    ]
    if missing:
        raise FileNotFoundError(f"artifact root {root} is missing: {', '.join(missing)}")

    _load_registry()
    config_file = root / "config.json"
    config = PipelineConfig.from_file(config_file) if config_file.is_file() else PipelineConfig()

    documents: dict[str, Book] = {}
    with open(root / "documents.jsonl", "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                record = json.loads(line)
                documents[record["book_id"]] = Book(
                    book_id=record["book_id"], title=record["title"], body=record["text"]
                )

    handles = PipelineHandles(
        embedder=get_embedder(config.embedder, dim=config.embedder_dim),
        reranker=get_reranker_backend(config.reranker),
        reader=load_reader(root / "reader"),
        index=VectorIndex.load(root / "index"),
    )
    return config, handles, documents


def create_app(artifact_root: Path | str | None = None) -> FastAPI:
    root = artifact_root or os.environ.get(ARTIFACTS_ENV)
    if not root:
        raise RuntimeError(f"no artifact root given and {ARTIFACTS_ENV} is unset")
    config, handles, documents = load_artifacts(root)

    app = FastAPI(title="quoteforge", version="0.1.0")

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/documents/{document_id}")
    def get_document(document_id: str) -> dict:
        book = documents.get(document_id)
        if book is None:
            raise HTTPException(status_code=404, detail=f"unknown document {document_id!r}")
        return {"title": book.title, "text": book.body}

    @app.get("/api/documents/{document_id}/paragraphs")
    def get_paragraphs(document_id: str) -> dict:
        book = documents.get(document_id)
        if book is None:
            raise HTTPException(status_code=404, detail=f"unknown document {document_id!r}")
        return {
            "paragraphs": [
                {"paragraph_id": p.paragraph_id, "text": p.text, "word_count": p.word_count}
                for p in segment_book(book, config.segment_length)
            ]
        }

    @app.post("/api/search")
    def search(request: SearchRequest) -> dict:
        if request.document_id is not None and request.document_id not in documents:
            raise HTTPException(status_code=404, detail=f"unknown document {request.document_id!r}")
        try:
            result = extract_quote(
                request.context,
                config,
                handles,
                document_id=request.document_id,
                top_k=request.top_k,
            )
        except PipelineError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"results": [span.to_dict() for span in result.results]}

    return app


def serve(artifact_root: Path | str, host: str = "127.0.0.1", port: int = 8000) -> None:
    """Run the service until interrupted; uvicorn handles graceful shutdown."""
    import uvicorn

    app = create_app(artifact_root)
    uvicorn.run(app, host=host, port=port)
