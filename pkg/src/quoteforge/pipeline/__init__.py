"""End-to-end orchestration: retrieve, re-rank, read; experiments and serving."""

from quoteforge.pipeline.config import PipelineConfig
from quoteforge.pipeline.extract import (
    ExtractedSpan,
    ExtractionResult,
    PipelineError,
    PipelineHandles,
    extract_quote,
)
from quoteforge.pipeline.experiment import (
    ExperimentConfig,
    evaluate_end_to_end,
    run_experiment,
    split_triples,
)

__all__ = [
    "ExperimentConfig",
    "evaluate_end_to_end",
    "ExtractedSpan",
    "ExtractionResult",
    "PipelineConfig",
    "PipelineError",
    "PipelineHandles",
    "extract_quote",
    "run_experiment",
    "split_triples",
]
