"""The relevance-classification prompt. The template is a wire format: scoring
backends are trained against these exact bytes, so do not restyle it."""

from __future__ import annotations

from dataclasses import dataclass

PROMPT_TEMPLATE = "Context: {c}\nDocument: {d}\nIs the document relevant to the context? Answer yes/no: "

_DOC_MARKER = "\nDocument: "
_PREFIX = "Context: "
_SUFFIX = "\nIs the document relevant to the context? Answer yes/no: "


@dataclass(frozen=True)
class RerankPrompt:
    context: str
    document: str
    rendered: str


def build_prompt(context: str, document: str) -> RerankPrompt:
    return RerankPrompt(
        context=context,
        document=document,
        rendered=PROMPT_TEMPLATE.format(c=context, d=document),
    )


def parse_prompt(rendered: str) -> tuple[str, str]:
    """Invert build_prompt. The split is on the first document marker, so a
    context containing the literal marker cannot round-trip."""
    if not rendered.startswith(_PREFIX) or not rendered.endswith(_SUFFIX):
        raise ValueError("string does not match the relevance prompt template")
    inner = rendered[len(_PREFIX) : len(rendered) - len(_SUFFIX)]
    context, sep, document = inner.partition(_DOC_MARKER)
    if not sep:
        raise ValueError("prompt is missing the document slot")
    return context, document
