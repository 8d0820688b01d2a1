from __future__ import annotations

import pytest

from conftest import CountingChat, CountingEmbedder, index_text
from factoryqa.corpus import DocumentChunk, Source
from factoryqa.engine import (
    DEFAULT_PERSONA,
    REFUSAL_INSTRUCTION,
    RagEngine,
    build_prompt,
)
from factoryqa.errors import NoKnowledgeError, TransportError, ValidationError
from factoryqa.gateway import ModelEndpoint
from factoryqa.index import VectorIndex


def make_chunk(text: str, doc_id: str = "d", i: int = 0) -> DocumentChunk:
    return DocumentChunk(doc_id=doc_id, chunk_index=i, source=Source.MANUALS, text=text, token_count=1)


# ------------------------------------------------------------------
# build_prompt
# ------------------------------------------------------------------


def test_rendered_prompt_structure():
    bundle = build_prompt(DEFAULT_PERSONA, [make_chunk("X")], "Q?")
    assert bundle.rendered == (
        DEFAULT_PERSONA
        + " We have provided context information below from relevant documents and reports."
        + "\n---\nX\n---\n"
        + "Given this information, please answer the following question:\nQ?\n"
        + REFUSAL_INSTRUCTION
    )


def test_refusal_instruction_verbatim():
    bundle = build_prompt(DEFAULT_PERSONA, [make_chunk("X")], "Q?")
    assert (
        "If the provided context does not include relevant information to "
        "answer the question, please do not respond." in bundle.rendered
    )


def test_snippet_order_is_preserved():
    bundle = build_prompt("p", [make_chunk("AAA"), make_chunk("BBB", i=1)], "Q?")
    assert bundle.rendered.index("AAA") < bundle.rendered.index("BBB")


def test_snippet_and_query_embedded_verbatim_without_escaping():
    snippet = "table\n---\nrow"
    query = "what\n---\nnow?"
    bundle = build_prompt("p", [make_chunk(snippet)], query)
    assert snippet in bundle.rendered
    assert query in bundle.rendered


def test_empty_snippets_rejected():
    with pytest.raises(ValidationError):
        build_prompt("p", [], "Q?")


def test_empty_query_rejected():
    with pytest.raises(ValidationError):
        build_prompt("p", [make_chunk("X")], "")


# ------------------------------------------------------------------
# answer_query
# ------------------------------------------------------------------


def make_engine(index, embedder, chat_fn=None, endpoint=None):
    return RagEngine(
        index=index,
        embedder=embedder,
        endpoint=endpoint or ModelEndpoint(name="echo", base_url="mock://echo"),
        chat_fn=chat_fn,
    )


def test_dual_answer_with_both_sources(populated_index, embedder):
    engine = make_engine(populated_index, embedder)
    answer = engine.answer_query("Close the valve before starting the pump.", k=1)
    assert [a.source for a in answer.per_source] == [Source.MANUALS, Source.SHARED]
    for a in answer.per_source:
        # echo mock returns the top snippet
        assert a.answer_text == a.snippets[0].chunk.text
        assert not a.refused


def test_empty_source_is_skipped_with_single_llm_call(embedder):
    index = VectorIndex()
    index_text(index, embedder, "m.txt", "Valve torque is 12 Nm.", Source.MANUALS)
    counting = CountingChat()
    engine = make_engine(index, embedder, chat_fn=counting)
    answer = engine.answer_query("valve torque", k=2)
    assert [a.source for a in answer.per_source] == [Source.MANUALS]
    assert len(counting.calls) == 1


def test_query_embedded_exactly_once():
    embedder = CountingEmbedder()
    index = VectorIndex()
    index_text(index, embedder, "m.txt", "Valve torque is 12 Nm.", Source.MANUALS)
    index_text(index, embedder, "s.txt", "Torque drifts after regreasing.", Source.SHARED)
    embedder.calls.clear()
    make_engine(index, embedder, chat_fn=CountingChat()).answer_query("torque", k=1)
    assert embedder.calls == ["torque"]


def test_refusal_mock_sets_refused_flag(populated_index, embedder, refusal_endpoint):
    engine = make_engine(populated_index, embedder, endpoint=refusal_endpoint)
    answer = engine.answer_query("valve", k=1)
    assert all(a.refused for a in answer.per_source)


def test_both_sources_empty_is_a_no_knowledge_error(embedder):
    with pytest.raises(NoKnowledgeError):
        make_engine(VectorIndex(), embedder).answer_query("anything")


def test_one_source_failure_is_isolated(populated_index, embedder):
    def flaky(endpoint, prompt):
        # fail only the shared-knowledge prompt
        if "Foam overflow" in prompt:
            raise TransportError("boom")
        from factoryqa import gateway

        return gateway.chat(endpoint, prompt)

    engine = make_engine(populated_index, embedder, chat_fn=flaky)
    answer = engine.answer_query("valve gasket overflow", k=2)
    by_source = {a.source: a for a in answer.per_source}
    assert by_source[Source.MANUALS].error is None
    assert by_source[Source.SHARED].error is not None
    assert by_source[Source.SHARED].snippets  # snippets still reported


def test_snippets_cited_appear_in_prompt(populated_index, embedder):
    counting = CountingChat()
    engine = make_engine(populated_index, embedder, chat_fn=counting)
    answer = engine.answer_query("grease bearing", k=2)
    prompts = [p for _, p in counting.calls]
    for a, prompt in zip(answer.per_source, prompts):
        for s in a.snippets:
            assert s.chunk.text in prompt


def test_answer_determinism(populated_index, embedder):
    engine = make_engine(populated_index, embedder)
    first = engine.answer_query("valve", k=2)
    second = engine.answer_query("valve", k=2)
    assert first == second
