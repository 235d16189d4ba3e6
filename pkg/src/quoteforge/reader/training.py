"""Multi-task training of the reader, plus few-shot continuation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

import numpy as np
import torch
import torch.nn.functional as F

from quoteforge.corpus.types import Triple
from quoteforge.evaluation.metrics import bow_f1, exact_match
from quoteforge.reader.bio import O, bio_from_span
from quoteforge.reader.crf import crf_nll_batch, viterbi_decode
from quoteforge.reader.model import (
    EncoderConfig,
    ReaderModel,
    SpanPrediction,
    predict_spans,
    span_loss,
)
from quoteforge.reader.packing import PackedInput, PackingError, chars_to_token_span, pack_input
from quoteforge.reader.tokenizer import PAD_ID, HashingWordPieceTokenizer

logger = logging.getLogger(__name__)

TaggerMode = Literal["crf", "softmax", "none"]


@dataclass
class ReaderTrainConfig:
    epochs: int = 10
    batch_size: int = 4
    lr: float = 2e-5
    seed: int = 0
    max_len: int = 384
    span_weight: float = 0.5
    tag_weight: float = 0.5
    tagger: TaggerMode = "crf"
    early_stopping_patience: int = 3
    max_span_wordpieces: int = 128
    encoder: EncoderConfig = field(default_factory=EncoderConfig)


@dataclass
class ReaderExample:
    packed: PackedInput
    gold_start: int
    gold_end: int
    labels: list[int]
    triple: Triple


def build_examples(
    triples: Sequence[Triple], tokenizer: HashingWordPieceTokenizer, max_len: int
) -> tuple[list[ReaderExample], int]:
    """Pack and align triples; unanswerable ones (gold lost to truncation, or
    a context that leaves no paragraph budget) are skipped and counted."""
    examples = []
    skipped = 0
    for triple in triples:
        try:
            packed = pack_input(triple.context, triple.paragraph, tokenizer, max_len)
        except PackingError as exc:
            logger.warning("context %s unpackable: %s", triple.context_id, exc)
            skipped += 1
            continue
        span = chars_to_token_span(triple, packed)
        if span is None:
            skipped += 1
            continue
        start_wp, end_wp = span
        examples.append(
            ReaderExample(
                packed=packed,
                gold_start=start_wp,
                gold_end=end_wp,
                labels=bio_from_span(packed, start_wp, end_wp),
                triple=triple,
            )
        )
    return examples, skipped


def _collate(batch: Sequence[ReaderExample]) -> dict[str, torch.Tensor]:
    width = max(len(e.packed) for e in batch)
    ids = torch.full((len(batch), width), PAD_ID, dtype=torch.long)
    mask = torch.zeros((len(batch), width), dtype=torch.bool)
    labels = torch.full((len(batch), width), O, dtype=torch.long)
    for row, example in enumerate(batch):
        n = len(example.packed)
        ids[row, :n] = torch.tensor(example.packed.wordpieces)
        mask[row, :n] = True
        labels[row, :n] = torch.tensor(example.labels)
    return {
        "ids": ids,
        "mask": mask,
        "labels": labels,
        "starts": torch.tensor([e.gold_start for e in batch]),
        "ends": torch.tensor([e.gold_end for e in batch]),
    }


class TrainedReader:
    """Inference handle: immutable weights, safe for concurrent readers."""

    def __init__(
        self,
        model: ReaderModel,
        tokenizer: HashingWordPieceTokenizer,
        config: ReaderTrainConfig,
        history: list[dict] | None = None,
    ):
        self.model = model
        self.tokenizer = tokenizer
        self.config = config
        self.history = history or []
        self.model.eval()

    def _encode(self, packed: PackedInput) -> torch.Tensor:
        ids = torch.tensor([packed.wordpieces], dtype=torch.long)
        mask = torch.ones_like(ids, dtype=torch.bool)
        with torch.no_grad():
            return self.model.encode(ids, mask)[0]

    def predict(
        self, context: str, paragraph: str, top_k: int = 1, paragraph_id: int = -1
    ) -> list[SpanPrediction]:
        packed = pack_input(context, paragraph, self.tokenizer, self.config.max_len)
        hidden = self._encode(packed)
        return predict_spans(
            packed,
            hidden,
            self.model.start_vector,
            self.model.end_vector,
            top_k=top_k,
            max_span_wordpieces=self.config.max_span_wordpieces,
            paragraph_id=paragraph_id,
        )

    def tag(self, context: str, paragraph: str) -> list[int]:
        """Viterbi BIO labels over the packed sequence."""
        packed = pack_input(context, paragraph, self.tokenizer, self.config.max_len)
        hidden = self._encode(packed)
        with torch.no_grad():
            emissions = self.model.emissions(hidden)
        return viterbi_decode(emissions, self.model.transitions)


def evaluate_reader(reader: TrainedReader, triples: Sequence[Triple]) -> dict[str, float]:
    """Top-1 EM and BoW-F1 against the gold quotes, given gold paragraphs."""
    em_total = 0.0
    f1_total = 0.0
    n = 0
    for triple in triples:
        predictions = reader.predict(triple.context, triple.paragraph, top_k=1)
        predicted = predictions[0].text if predictions else ""
        em_total += exact_match(predicted, triple.quote)
        f1_total += bow_f1(predicted, triple.quote)
        n += 1
    if n == 0:
        return {"em": 0.0, "bow_f1": 0.0}
    return {"em": em_total / n, "bow_f1": f1_total / n}


def train_reader(
    train_triples: Sequence[Triple],
    dev_triples: Sequence[Triple] = (),
    config: ReaderTrainConfig | None = None,
    model: ReaderModel | None = None,
    tokenizer: HashingWordPieceTokenizer | None = None,
) -> TrainedReader:
    """Minimize the weighted span + tagging loss; keep the best dev epoch.

    Deterministic under a fixed config.seed. Passing an existing model
    continues training (the few-shot path).
    """
    if not train_triples:
        raise ValueError("cannot train a reader on an empty triple list")
    config = config or ReaderTrainConfig()
    torch.manual_seed(config.seed)
    if model is None:
        model = ReaderModel(config.encoder)
    tokenizer = tokenizer or HashingWordPieceTokenizer(vocab_size=config.encoder.vocab_size)

    examples, skipped = build_examples(train_triples, tokenizer, config.max_len)
    if skipped:
        logger.info("skipped %d unanswerable training examples (gold span truncated)", skipped)
    if not examples:
        raise ValueError("no answerable training examples after packing")

    optimizer = torch.optim.Adam(model.parameters(), lr=config.lr)
    rng = np.random.default_rng(config.seed)
    history: list[dict] = []
    best_f1 = -1.0
    best_state: dict | None = None
    epochs_since_best = 0

    for epoch in range(config.epochs):
        model.train()
        order = rng.permutation(len(examples))
        epoch_loss = 0.0
        steps = 0
        for lo in range(0, len(order), config.batch_size):
            batch = [examples[i] for i in order[lo : lo + config.batch_size]]
            tensors = _collate(batch)
            hidden = model.encode(tensors["ids"], tensors["mask"])
            start_logits, end_logits = model.span_logits(hidden, tensors["mask"])
            loss_span = span_loss(start_logits, end_logits, tensors["starts"], tensors["ends"])
            if config.tagger == "crf":
                emissions = model.emissions(hidden)
                loss_tag = crf_nll_batch(
                    emissions, model.transitions, tensors["labels"], tensors["mask"]
                )
            elif config.tagger == "softmax":
                emissions = model.emissions(hidden)
                flat = emissions.reshape(-1, emissions.shape[-1])
                targets = torch.where(tensors["mask"], tensors["labels"], -100).reshape(-1)
                loss_tag = F.cross_entropy(flat, targets, ignore_index=-100)
            else:
                loss_tag = torch.zeros((), dtype=hidden.dtype)
            loss = config.span_weight * loss_span + config.tag_weight * loss_tag
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach())
            steps += 1

        entry: dict = {"epoch": epoch, "train_loss": epoch_loss / max(steps, 1)}
        if dev_triples:
            reader = TrainedReader(model, tokenizer, config)
            scores = evaluate_reader(reader, dev_triples)
            entry.update({"dev_em": scores["em"], "dev_bow_f1": scores["bow_f1"]})
            if scores["bow_f1"] > best_f1:
                best_f1 = scores["bow_f1"]
                best_state = {k: v.detach().clone() for k, v in model.state_dict().items()}
                epochs_since_best = 0
            else:
                epochs_since_best += 1
        history.append(entry)
        logger.info("epoch %d: %s", epoch, entry)
        if dev_triples and epochs_since_best > config.early_stopping_patience:
            logger.info("early stop at epoch %d (best dev F1 %.4f)", epoch, best_f1)
            break

    if best_state is not None:
        model.load_state_dict(best_state)
    return TrainedReader(model, tokenizer, config, history)


def fewshot_finetune(
    base: TrainedReader,
    samples: Sequence[Triple],
    dev_triples: Sequence[Triple] = (),
    lr: float = 1e-5,
    epochs: int = 10,
    seed: int = 0,
) -> TrainedReader:
    """Continue training on a handful of target-domain samples at a reduced rate.

    The base handle is left untouched; tuning happens on a copy of the weights.
    """
    import copy

    config = replace(base.config, lr=lr, epochs=epochs, seed=seed)
    model = copy.deepcopy(base.model)
    return train_reader(samples, dev_triples, config, model=model, tokenizer=base.tokenizer)
