"""Linear-chain CRF over BIO labels: log-likelihood (forward algorithm) and
Viterbi decoding. Transitions live in a 5x5 table whose last two rows/columns
are the virtual start/stop states."""

from __future__ import annotations

import numpy as np
import torch
from torch import Tensor

from quoteforge.reader.bio import N_LABELS

START = 3
STOP = 4
N_STATES = 5


def _check_shapes(emissions: Tensor, transitions: Tensor) -> None:
    if emissions.ndim != 2 or emissions.shape[1] != N_LABELS:
        raise ValueError(f"emissions must be (L, {N_LABELS}), got {tuple(emissions.shape)}")
    if emissions.shape[0] < 1:
        raise ValueError("emissions must cover at least one position")
    if tuple(transitions.shape) != (N_STATES, N_STATES):
        raise ValueError(f"transitions must be ({N_STATES}, {N_STATES}), got {tuple(transitions.shape)}")


def path_score(emissions: Tensor, transitions: Tensor, labels: list[int] | Tensor) -> Tensor:
    """Unnormalized score of one label path, including start/stop transitions."""
    _check_shapes(emissions, transitions)
    y = torch.as_tensor(labels, dtype=torch.long, device=emissions.device)
    if y.shape[0] != emissions.shape[0]:
        raise ValueError(f"{y.shape[0]} labels for {emissions.shape[0]} positions")
    if y.min() < 0 or y.max() >= N_LABELS:
        raise ValueError("labels must be in {0, 1, 2}")
    score = transitions[START, y[0]] + emissions[0, y[0]]
    for t in range(1, emissions.shape[0]):
        score = score + transitions[y[t - 1], y[t]] + emissions[t, y[t]]
    return score + transitions[y[-1], STOP]


def log_partition(emissions: Tensor, transitions: Tensor) -> Tensor:
    """log sum over all 3^L label paths of exp(path score), in log-space."""
    _check_shapes(emissions, transitions)
    alpha = transitions[START, :N_LABELS] + emissions[0]
    inner = transitions[:N_LABELS, :N_LABELS]
    for t in range(1, emissions.shape[0]):
        alpha = torch.logsumexp(alpha.unsqueeze(1) + inner + emissions[t].unsqueeze(0), dim=0)
    return torch.logsumexp(alpha + transitions[:N_LABELS, STOP], dim=0)


def crf_log_likelihood(
    emissions: Tensor, transitions: Tensor, gold_labels: list[int] | Tensor
) -> Tensor:
    """log p(gold path) = score(gold) - log Z. Always <= 0."""
    return path_score(emissions, transitions, gold_labels) - log_partition(emissions, transitions)


def crf_nll_batch(
    emissions: Tensor, transitions: Tensor, labels: Tensor, mask: Tensor
) -> Tensor:
    """Mean negative log-likelihood over a right-padded batch.

    emissions: (B, L, 3); labels: (B, L) long; mask: (B, L) bool with a
    contiguous True prefix per row (at least one True).
    """
    length = emissions.shape[1]
    maskf = mask.to(emissions.dtype)
    inner = transitions[:N_LABELS, :N_LABELS]

    safe_labels = labels.clamp(min=0)
    emit = emissions.gather(2, safe_labels.unsqueeze(2)).squeeze(2)
    score = transitions[START, safe_labels[:, 0]] + emit[:, 0]
    alpha = (transitions[START, :N_LABELS] + emissions[:, 0]).clone()
    last_label = safe_labels[:, 0]
    for t in range(1, length):
        step = maskf[:, t]
        trans_step = inner[last_label, safe_labels[:, t]]
        score = score + step * (trans_step + emit[:, t])
        last_label = torch.where(mask[:, t], safe_labels[:, t], last_label)
        next_alpha = torch.logsumexp(
            alpha.unsqueeze(2) + inner.unsqueeze(0) + emissions[:, t].unsqueeze(1), dim=1
        )
        alpha = torch.where(mask[:, t].unsqueeze(1), next_alpha, alpha)
    score = score + transitions[last_label, STOP]
    log_z = torch.logsumexp(alpha + transitions[:N_LABELS, STOP].unsqueeze(0), dim=1)
    return (log_z - score).mean()


def viterbi_decode(emissions: Tensor | np.ndarray, transitions: Tensor | np.ndarray) -> list[int]:
    """Argmax label path; ties resolve to the lexicographically smallest
    sequence under the label order B < I < O.

    Runs backward so a greedy left-to-right readout can always prefer the
    smallest label that still completes an optimal path.
    """
    e = np.asarray(emissions.detach().cpu() if isinstance(emissions, Tensor) else emissions,
                   dtype=np.float64)
    t = np.asarray(transitions.detach().cpu() if isinstance(transitions, Tensor) else transitions,
                   dtype=np.float64)
    _check_shapes(torch.from_numpy(e), torch.from_numpy(t))
    length = e.shape[0]
    inner = t[:N_LABELS, :N_LABELS]

    # beta[pos, y]: best score of completing the path given label y at pos.
    beta = np.empty((length, N_LABELS))
    beta[-1] = e[-1] + t[:N_LABELS, STOP]
    for pos in range(length - 2, -1, -1):
        beta[pos] = e[pos] + (inner + beta[pos + 1][None, :]).max(axis=1)

    labels = [int(np.argmax(t[START, :N_LABELS] + beta[0]))]
    for pos in range(1, length):
        prev = labels[-1]
        labels.append(int(np.argmax(inner[prev] + beta[pos])))
    return labels
