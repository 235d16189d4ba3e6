"""Alternative reader backed by a free-text completion model.

Instead of span scoring, the extraction instruction below is filled in and the
completion is matched back into the paragraph. The instruction text is a wire
format shared with externally fine-tuned checkpoints; keep it byte-identical.
"""

from __future__ import annotations

from typing import Protocol

from quoteforge.reader.model import SpanPrediction

EXTRACTION_PROMPT_TEMPLATE = (
    "You are an AI assistant in recommending a suitable 'quote' based on the context and "
    "your task is to extract a relevant quote from the given pargraph based on the context. "
    "Note that, the context and the paragraph may contain grammatical errors. "
    "DO NOT use any external information.\n"
    "\n"
    'Context: "{context}"\n'
    "\n"
    'Paragraph: "{paragraph}"\n'
    "\n"
    "Just extract the relevant quote without any other sentence: "
)


class CompletionBackend(Protocol):
    name: str

    def complete(self, prompt: str) -> str: ...


class FirstSentenceStub:
    """Deterministic stand-in: answers with the paragraph's first sentence."""

    name = "first-sentence-stub"

    def complete(self, prompt: str) -> str:
        marker = '\nParagraph: "'
        start = prompt.index(marker) + len(marker)
        end = prompt.index('"\n', start)
        paragraph = prompt[start:end]
        for stop in ".!?":
            cut = paragraph.find(stop)
            if cut != -1:
                return paragraph[: cut + 1]
        return paragraph


def build_extraction_prompt(context: str, paragraph: str) -> str:
    return EXTRACTION_PROMPT_TEMPLATE.format(context=context, paragraph=paragraph)


class CompletionReader:
    """Adapter exposing a completion backend through the reader's predict
    surface, so pipelines can swap it in for the span-scoring model."""

    def __init__(self, backend: CompletionBackend):
        self.backend = backend

    def predict(
        self, context: str, paragraph: str, top_k: int = 1, paragraph_id: int = -1
    ) -> list[SpanPrediction]:
        return extract_with_completion(context, paragraph, self.backend, paragraph_id)[:top_k]


def extract_with_completion(
    context: str, paragraph: str, backend: CompletionBackend, paragraph_id: int = -1
) -> list[SpanPrediction]:
    """Run the completion backend and align its answer into the paragraph.

    Completions that are not substrings of the paragraph cannot be grounded
    and yield no prediction; extractive behaviour is enforced, not assumed.
    """
    completion = backend.complete(build_extraction_prompt(context, paragraph)).strip()
    if not completion:
        return []
    start = paragraph.find(completion)
    if start == -1:
        return []
    return [
        SpanPrediction(
            start_wp=-1,
            end_wp=-1,
            score=0.0,
            text=completion,
            paragraph_id=paragraph_id,
            char_start=start,
            char_end=start + len(completion),
        )
    ]
