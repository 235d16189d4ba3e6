"""The multi-task reader: shared encoder, span-prediction head, BIO tagging head."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import torch
import torch.nn as nn
from torch import Tensor

from quoteforge.reader.bio import N_LABELS
from quoteforge.reader.crf import N_STATES
from quoteforge.reader.packing import PackedInput
from quoteforge.reader.tokenizer import PAD_ID

NEG_INF = -1e9


@dataclass
class EncoderConfig:
    backend: str = "toy-transformer"
    vocab_size: int = 4096
    hidden_size: int = 64
    num_layers: int = 2
    num_heads: int = 4
    ffn_size: int = 128
    max_len: int = 384
    dropout: float = 0.1

    def to_dict(self) -> dict:
        return asdict(self)


class ToyTransformerEncoder(nn.Module):
    """Small trainable encoder for desk-scale runs; pretrained encoders are
    drop-in replacements as long as they emit (B, L, hidden_size) states."""

    def __init__(self, config: EncoderConfig):
        super().__init__()
        self.config = config
        self.token_embedding = nn.Embedding(config.vocab_size, config.hidden_size, padding_idx=PAD_ID)
        self.position_embedding = nn.Embedding(config.max_len, config.hidden_size)
        # Local mixing of adjacent tokens; absolute positions alone make
        # neighbor-keyed patterns needlessly slow to pick up at this scale.
        self.local = nn.Conv1d(
            config.hidden_size, config.hidden_size, kernel_size=3, padding=1
        )
        layer = nn.TransformerEncoderLayer(
            d_model=config.hidden_size,
            nhead=config.num_heads,
            dim_feedforward=config.ffn_size,
            dropout=config.dropout,
            batch_first=True,
            norm_first=True,
        )
        self.layers = nn.TransformerEncoder(
            layer, num_layers=config.num_layers, enable_nested_tensor=False
        )
        self.norm = nn.LayerNorm(config.hidden_size)

    def forward(self, ids: Tensor, attention_mask: Tensor) -> Tensor:
        # ids, attention_mask: (B, L); returns (B, L, h)
        positions = torch.arange(ids.shape[1], device=ids.device).unsqueeze(0)
        states = self.token_embedding(ids) + self.position_embedding(positions)
        states = states + self.local(states.transpose(1, 2)).transpose(1, 2)
        states = self.layers(states, src_key_padding_mask=~attention_mask)
        return self.norm(states)


class ReaderModel(nn.Module):
    """Two heads over one encoder: start/end vectors for span scoring, and a
    linear emission projection plus transition table for the BIO tagger."""

    def __init__(self, config: EncoderConfig):
        super().__init__()
        self.config = config
        self.encoder = ToyTransformerEncoder(config)
        self.start_vector = nn.Parameter(torch.zeros(config.hidden_size))
        self.end_vector = nn.Parameter(torch.zeros(config.hidden_size))
        nn.init.normal_(self.start_vector, std=0.02)
        nn.init.normal_(self.end_vector, std=0.02)
        self.emission = nn.Linear(config.hidden_size, N_LABELS)
        self.transitions = nn.Parameter(torch.zeros(N_STATES, N_STATES))
        nn.init.normal_(self.transitions, std=0.02)

    def encode(self, ids: Tensor, attention_mask: Tensor) -> Tensor:
        return self.encoder(ids, attention_mask)

    def span_logits(self, hidden: Tensor, attention_mask: Tensor) -> tuple[Tensor, Tensor]:
        """Dot products with the start/end vectors; padding forced to -inf so
        the softmax runs over the real positions of each example."""
        start = hidden @ self.start_vector
        end = hidden @ self.end_vector
        blocked = torch.where(attention_mask, 0.0, NEG_INF)
        return start + blocked, end + blocked

    def emissions(self, hidden: Tensor) -> Tensor:
        return self.emission(hidden)


def span_loss(
    start_logits: Tensor, end_logits: Tensor, gold_start: int | Tensor, gold_end: int | Tensor
) -> Tensor:
    """Average NLL of the gold start and end under softmaxes over all positions."""
    if start_logits.ndim == 1:
        start_logits = start_logits.unsqueeze(0)
        end_logits = end_logits.unsqueeze(0)
    gold_start = torch.as_tensor(gold_start, device=start_logits.device).reshape(-1)
    gold_end = torch.as_tensor(gold_end, device=end_logits.device).reshape(-1)
    length = start_logits.shape[1]
    for name, gold in (("start", gold_start), ("end", gold_end)):
        if gold.min() < 0 or gold.max() >= length:
            raise ValueError(f"gold {name} index out of range [0, {length})")
    start_nll = -torch.log_softmax(start_logits, dim=1).gather(1, gold_start.unsqueeze(1))
    end_nll = -torch.log_softmax(end_logits, dim=1).gather(1, gold_end.unsqueeze(1))
    return ((start_nll + end_nll) / 2).mean()


def joint_loss(span_l: Tensor | float, crf_negll: Tensor | float) -> Tensor | float:
    """Equal-weight average of the two task losses."""
    return 0.5 * (span_l + crf_negll)


@dataclass(frozen=True)
class SpanPrediction:
    start_wp: int
    end_wp: int
    score: float
    text: str
    paragraph_id: int = -1
    char_start: int = -1  # offsets of text within the paragraph it came from
    char_end: int = -1


def predict_spans(
    packed: PackedInput,
    hidden: Tensor | np.ndarray,
    start_vector: Tensor | np.ndarray,
    end_vector: Tensor | np.ndarray,
    top_k: int = 1,
    max_span_wordpieces: int = 128,
    paragraph_id: int = -1,
) -> list[SpanPrediction]:
    """Enumerate spans (i, j) with j > i, both inside the paragraph region and
    j - i <= max_span_wordpieces, ranked by start_score[i] + end_score[j].

    Ties prefer the earlier start, then the shorter span.
    """
    h = np.asarray(hidden.detach().cpu() if isinstance(hidden, Tensor) else hidden, dtype=np.float64)
    s = np.asarray(start_vector.detach().cpu() if isinstance(start_vector, Tensor) else start_vector,
                   dtype=np.float64)
    e = np.asarray(end_vector.detach().cpu() if isinstance(end_vector, Tensor) else end_vector,
                   dtype=np.float64)
    start_scores = h @ s
    end_scores = h @ e
    positions = np.array(packed.paragraph_positions())
    if positions.size < 2:
        return []
    candidates = []
    for a, i in enumerate(positions):
        for j in positions[a + 1 :]:
            if j - i > max_span_wordpieces:
                break
            candidates.append((-(start_scores[i] + end_scores[j]), i, j - i, j))
    candidates.sort()
    out = []
    for neg_score, i, _, j in candidates[:top_k]:
        first_word = packed.wordpiece_to_token[int(i)]
        last_word = packed.wordpiece_to_token[int(j)]
        char_start = packed.char_spans[first_word].start
        char_end = packed.char_spans[last_word].end
        out.append(
            SpanPrediction(
                start_wp=int(i),
                end_wp=int(j),
                score=float(-neg_score),
                text=packed.paragraph[char_start:char_end],
                paragraph_id=paragraph_id,
                char_start=char_start,
                char_end=char_end,
            )
        )
    return out
