"""BIO label sequences over packed wordpieces."""

from __future__ import annotations

from quoteforge.reader.packing import PackedInput

B, I, O = 0, 1, 2
LABEL_NAMES = ("B", "I", "O")
N_LABELS = 3


def bio_from_span(packed: PackedInput, start_wp: int | None, end_wp: int | None) -> list[int]:
    """Label the gold span B at its first wordpiece and I through the end.

    Word-level labels propagate to wordpieces as B -> [B, I, ..., I] and
    I/O -> identical sub-labels, which collapses to exactly this rule when the
    span endpoints come from chars_to_token_span. Markers and context are O.
    An absent span (unanswerable example) yields all O.
    """
    labels = [O] * len(packed)
    if start_wp is None or end_wp is None:
        return labels
    if not 0 <= start_wp <= end_wp < len(packed):
        raise ValueError(f"span ({start_wp}, {end_wp}) out of range for length {len(packed)}")
    labels[start_wp] = B
    for pos in range(start_wp + 1, end_wp + 1):
        labels[pos] = I
    return labels


def decode_bio(labels: list[int]) -> list[tuple[int, int]]:
    """Contiguous quotable segments as inclusive (start, end) index pairs.

    A B opens a new segment; an I extends the current one. An I directly
    after O is repaired to B (opens a segment), since the tagger head is not
    architecturally prevented from emitting that transition.
    """
    segments: list[tuple[int, int]] = []
    open_start: int | None = None
    for pos, label in enumerate(labels):
        if label == B:
            if open_start is not None:
                segments.append((open_start, pos - 1))
            open_start = pos
        elif label == I:
            if open_start is None:
                open_start = pos
        else:
            if open_start is not None:
                segments.append((open_start, pos - 1))
                open_start = None
    if open_start is not None:
        segments.append((open_start, len(labels) - 1))
    return segments
