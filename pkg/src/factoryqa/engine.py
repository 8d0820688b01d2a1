"""Query orchestration: embed once, retrieve per source, prompt, call the LLM.

Manuals and shared knowledge are kept in two separate LLM queries and the
answers are never merged, to avoid confusing answers that mix formal
procedures with informal worker reports. A failure on one source still
returns the other source's answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from factoryqa import gateway
from factoryqa.corpus import DocumentChunk, Source
from factoryqa.embedding import Embedder
from factoryqa.errors import FactoryQAError, NoKnowledgeError, ValidationError
from factoryqa.gateway import SNIPPET_SEPARATOR, ModelEndpoint, is_refusal
from factoryqa.index import ScoredChunk, VectorIndex

DEFAULT_PERSONA = (
    "You are an assistant that assists detergent production line operators "
    "with decision support and advice based on a knowledge base of standard "
    "operating procedures, single point lessons (SPL), etc."
)

REFUSAL_INSTRUCTION = (
    "If the provided context does not include relevant information "
    "to answer the question, please do not respond."
)

DEFAULT_K = 3

# Fixed result order: manuals answers always come before shared knowledge.
SOURCE_ORDER = (Source.MANUALS, Source.SHARED)


@dataclass(frozen=True)
class PromptBundle:
    persona: str
    snippets: tuple[DocumentChunk, ...]
    query: str
    rendered: str


@dataclass(frozen=True)
class SourceAnswer:
    source: Source
    answer_text: str
    refused: bool
    snippets: tuple[ScoredChunk, ...]
    error: str | None = None


@dataclass(frozen=True)
class DualAnswer:
    per_source: tuple[SourceAnswer, ...]


def build_prompt(persona: str, snippets: list[DocumentChunk], query: str) -> PromptBundle:
    """Render the query template with retrieved snippets inserted verbatim."""
    if not snippets:
        raise ValidationError("snippets must be nonempty")
    if not query:
        raise ValidationError("query must be nonempty")
    rendered = (
        f"{persona} We have provided context information below from relevant "
        "documents and reports."
        f"{SNIPPET_SEPARATOR}"
        f"{SNIPPET_SEPARATOR.join(chunk.text for chunk in snippets)}"
        f"{SNIPPET_SEPARATOR}"
        "Given this information, please answer the following question:\n"
        f"{query}\n"
        f"{REFUSAL_INSTRUCTION}"
    )
    return PromptBundle(
        persona=persona, snippets=tuple(snippets), query=query, rendered=rendered
    )


@dataclass
class RagEngine:
    index: VectorIndex
    embedder: Embedder
    endpoint: ModelEndpoint
    persona: str = DEFAULT_PERSONA
    k: int = DEFAULT_K
    chat_fn: object = field(default=None, repr=False)

    def _chat(self, prompt: str):
        fn = self.chat_fn or gateway.chat
        return fn(self.endpoint, prompt)

    def answer_query(self, query: str, k: int | None = None) -> DualAnswer:
        """Answer once per nonempty knowledge source; empty sources are skipped."""
        if not query:
            raise ValidationError("query must be nonempty")
        k = k if k is not None else self.k
        active = [s for s in SOURCE_ORDER if self.index.has_source(s)]
        if not active:
            raise NoKnowledgeError("no knowledge source has any indexed content")

        query_vector = self.embedder.embed_text(query)
        answers = []
        for source in active:
            hits = self.index.search(query_vector, k, source)
            bundle = build_prompt(self.persona, [h.chunk for h in hits], query)
            try:
                completion = self._chat(bundle.rendered)
            except FactoryQAError as exc:
                answers.append(
                    SourceAnswer(
                        source=source,
                        answer_text="",
                        refused=False,
                        snippets=tuple(hits),
                        error=str(exc),
                    )
                )
                continue
            answers.append(
                SourceAnswer(
                    source=source,
                    answer_text=completion.text,
                    refused=is_refusal(completion.text),
                    snippets=tuple(hits),
                )
            )
        return DualAnswer(per_source=tuple(answers))
