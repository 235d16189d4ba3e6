"""Context-based quote extraction: curation, retrieval, re-ranking, and a multi-task reader."""

__version__ = "0.1.0"
