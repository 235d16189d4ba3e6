"""Token-probability backends for relevance scoring.

A backend exposes the unprocessed probabilities of its designated yes/no
tokens given a rendered prompt. Which token ids realize "yes"/"no" is the
backend's own business, fixed at registration; callers only see the pair of
probabilities. The shipped backends are desk-scale stand-ins for fine-tuned
language models.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from quoteforge.rerank.negatives import RerankExample
from quoteforge.rerank.prompt import parse_prompt
from quoteforge.textnorm import word_set

logger = logging.getLogger(__name__)


class TokenProbabilityBackend(Protocol):
    name: str

    def yes_no_probs(self, prompt: str) -> tuple[float, float]: ...


@dataclass
class RerankTrainConfig:
    epochs: int = 200
    lr: float = 0.5
    seed: int = 0
    dev_fraction: float = 0.1


def _overlap_features(context: str, document: str) -> np.ndarray:
    ctx = word_set(context)
    doc = word_set(document)
    shared = len(ctx & doc)
    return np.array(
        [
            shared / len(ctx) if ctx else 0.0,
            shared / len(doc) if doc else 0.0,
            shared / len(ctx | doc) if ctx | doc else 0.0,
        ]
    )


class OverlapStubBackend:
    """Untrained heuristic: p_yes is the fraction of context words found in the document."""

    name = "overlap-stub"

    def yes_no_probs(self, prompt: str) -> tuple[float, float]:
        context, document = parse_prompt(prompt)
        ctx = word_set(context)
        p_yes = len(ctx & word_set(document)) / len(ctx) if ctx else 0.0
        return p_yes, 1.0 - p_yes


class LogisticOverlapBackend:
    """Logistic regression over overlap features, trained on yes/no examples."""

    name = "logistic-overlap"

    def __init__(self):
        self.weights = np.zeros(3)
        self.bias = 0.0
        self.loss_curve: list[float] = []

    def yes_no_probs(self, prompt: str) -> tuple[float, float]:
        context, document = parse_prompt(prompt)
        z = float(self.weights @ _overlap_features(context, document) + self.bias)
        p_yes = 1.0 / (1.0 + math.exp(-z))
        return p_yes, 1.0 - p_yes

    def fit(self, examples: Sequence[RerankExample], config: RerankTrainConfig) -> None:
        features = np.stack([_overlap_features(e.context, e.paragraph) for e in examples])
        labels = np.array([1.0 if e.label == "yes" else 0.0 for e in examples])
        for _ in range(config.epochs):
            z = features @ self.weights + self.bias
            probs = 1.0 / (1.0 + np.exp(-z))
            loss = float(
                -np.mean(labels * np.log(probs + 1e-12) + (1 - labels) * np.log(1 - probs + 1e-12))
            )
            self.loss_curve.append(loss)
            grad = probs - labels
            self.weights -= config.lr * (features.T @ grad) / len(labels)
            self.bias -= config.lr * float(grad.mean())


_BACKENDS = {
    OverlapStubBackend.name: OverlapStubBackend,
    LogisticOverlapBackend.name: LogisticOverlapBackend,
}


def register_reranker_backend(name: str, factory) -> None:
    """Expose an external token-probability model under a config name."""
    _BACKENDS[name] = factory


def get_reranker_backend(name: str) -> TokenProbabilityBackend:
    try:
        return _BACKENDS[name]()
    except KeyError:
        raise KeyError(f"unknown reranker backend {name!r}; known: {sorted(_BACKENDS)}")


def dev_precision_at_1(backend: TokenProbabilityBackend, examples: Sequence[RerankExample]) -> float:
    """Fraction of contexts whose positive example outscores all its negatives."""
    from quoteforge.rerank.prompt import build_prompt
    from quoteforge.rerank.scoring import yes_score

    by_context: dict[str, list[RerankExample]] = {}
    for example in examples:
        by_context.setdefault(example.context, []).append(example)
    hits = 0
    groups = 0
    for group in by_context.values():
        if not any(e.label == "yes" for e in group):
            continue
        groups += 1
        scored = [
            (yes_score(*backend.yes_no_probs(build_prompt(e.context, e.paragraph).rendered)), i)
            for i, e in enumerate(group)
        ]
        best = max(scored, key=lambda pair: (pair[0], -pair[1]))
        if group[best[1]].label == "yes":
            hits += 1
    return hits / groups if groups else 0.0


def train_reranker(
    examples: Sequence[RerankExample],
    backend: TokenProbabilityBackend,
    config: RerankTrainConfig | None = None,
) -> TokenProbabilityBackend:
    """Fit a trainable backend on labeled examples and return the handle.

    Zero epochs returns the backend untouched. A held-out slice (last
    dev_fraction of contexts) is scored for P@1 after training.
    """
    if not examples:
        raise ValueError("cannot train a reranker on an empty example list")
    config = config or RerankTrainConfig()
    if not hasattr(backend, "fit"):
        raise TypeError(f"backend {backend.name} is not trainable")
    if config.epochs == 0:
        return backend

    contexts = list(dict.fromkeys(e.context for e in examples))
    n_dev = max(1, int(len(contexts) * config.dev_fraction)) if len(contexts) > 1 else 0
    dev_contexts = set(contexts[len(contexts) - n_dev :])
    train = [e for e in examples if e.context not in dev_contexts]
    dev = [e for e in examples if e.context in dev_contexts]

    backend.fit(train or list(examples), config)
    if dev:
        p1 = dev_precision_at_1(backend, dev)
        logger.info("reranker trained: final loss %.4f, dev P@1 %.3f",
                    backend.loss_curve[-1] if getattr(backend, "loss_curve", None) else float("nan"),
                    p1)
    return backend
