"""Declarative pipeline configuration; CLI flags override file values."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path


@dataclass
class PipelineConfig:
    chunk_size: int = 1200
    chunk_overlap: int = 100
    first_stage_k: int = 20
    rerank_keep: int = 3
    spans_per_paragraph: int = 1
    segment_length: int = 200
    context_window: int = 40
    negatives: int = 9
    negative_strategy: str = "bm25"
    max_len: int = 384
    embedder: str = "hash-word"
    embedder_dim: int = 64
    reranker: str = "overlap-stub"
    reader_backend: str = "toy-transformer"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rerank_keep > self.first_stage_k:
            raise ValueError(
                f"rerank_keep ({self.rerank_keep}) cannot exceed first_stage_k ({self.first_stage_k})"
            )
        for name in ("chunk_size", "first_stage_k", "rerank_keep", "spans_per_paragraph",
                     "segment_length", "context_window", "max_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_file(cls, path: Path | str, **overrides) -> "PipelineConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**raw)

    def merged(self, **overrides) -> "PipelineConfig":
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return PipelineConfig(**data)
