from __future__ import annotations

from pathlib import Path

import pytest

from factoryqa import gateway
from factoryqa.corpus import DocFormat, Source, chunk_document, load_document
from factoryqa.embedding import Embedder, EmbedderConfig
from factoryqa.gateway import ModelEndpoint
from factoryqa.index import IndexEntry, VectorIndex

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def pytest_runtest_logreport(report):
    # One PASS/FAIL line per release criterion in the acceptance module.
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\n[acceptance] {'PASS' if report.passed else 'FAIL'}: {name}")


class CountingEmbedder(Embedder):
    """Mock embedder that records every embed_text invocation."""

    def __init__(self, dim: int = 16):
        super().__init__(EmbedderConfig(dim=dim))
        self.calls: list[str] = []

    def embed_text(self, text):
        self.calls.append(text)
        return super().embed_text(text)


class CountingChat:
    """chat() stand-in that counts calls before delegating to the mock gateway."""

    def __init__(self):
        self.calls: list[tuple[str, str]] = []

    def __call__(self, endpoint, prompt):
        self.calls.append((endpoint.name, prompt))
        return gateway.chat(endpoint, prompt)


@pytest.fixture
def embedder():
    return Embedder(EmbedderConfig(dim=16))


@pytest.fixture
def echo_endpoint():
    return ModelEndpoint(name="echo", base_url="mock://echo")


@pytest.fixture
def refusal_endpoint():
    return ModelEndpoint(name="refusal", base_url="mock://refusal")


def index_text(index: VectorIndex, embedder: Embedder, name: str, text: str, source: Source):
    """Load, chunk, embed, and upsert one document; returns its chunks."""
    doc = load_document(name, DocFormat.TEXT, text.encode("utf-8"), source)
    chunks = chunk_document(doc)
    for chunk in chunks:
        index.upsert(IndexEntry(chunk, embedder.embed_text(chunk.text)))
    return chunks


@pytest.fixture
def populated_index(embedder):
    """Small two-source corpus with distinct vocabulary per document."""
    index = VectorIndex()
    index_text(index, embedder, "manual.txt", "Close the valve before starting the pump.", Source.MANUALS)
    index_text(index, embedder, "manual2.txt", "Grease the bearing at eighty degrees.", Source.MANUALS)
    index_text(index, embedder, "tag.txt", "Foam overflow caused by expired gasket.", Source.SHARED)
    return index
