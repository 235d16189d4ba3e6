"""Second-stage relevance scoring via yes/no token probabilities."""

from quoteforge.rerank.backends import (
    LogisticOverlapBackend,
    OverlapStubBackend,
    RerankTrainConfig,
    TokenProbabilityBackend,
    get_reranker_backend,
    train_reranker,
)
from quoteforge.rerank.negatives import (
    RerankExample,
    RerankTrainingReport,
    make_training_examples,
    sample_hard_negatives,
)
from quoteforge.rerank.prompt import PROMPT_TEMPLATE, RerankPrompt, build_prompt, parse_prompt
from quoteforge.rerank.scoring import YesScore, rerank, yes_score

__all__ = [
    "LogisticOverlapBackend",
    "OverlapStubBackend",
    "PROMPT_TEMPLATE",
    "RerankExample",
    "RerankPrompt",
    "RerankTrainConfig",
    "RerankTrainingReport",
    "TokenProbabilityBackend",
    "YesScore",
    "build_prompt",
    "get_reranker_backend",
    "make_training_examples",
    "parse_prompt",
    "rerank",
    "sample_hard_negatives",
    "train_reranker",
    "yes_score",
]
