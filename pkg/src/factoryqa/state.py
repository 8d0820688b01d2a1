"""Application state shared by the HTTP service and the CLI.

Owns the on-disk layout under one data directory:

    DATA_DIR/
      index.jsonl        # vector index (JSON Lines)
      documents.json     # catalog: doc_id -> {name, source, n_chunks}
      tags/              # one JSON file per yellow tag

Index mutations are persisted before callers see success.
"""

from __future__ import annotations

import json
from pathlib import Path

from factoryqa.corpus import DocFormat, Source, chunk_document, load_document
from factoryqa.embedding import Embedder, EmbedderConfig
from factoryqa.engine import DEFAULT_K, DEFAULT_PERSONA, RagEngine
from factoryqa.gateway import ModelEndpoint
from factoryqa.index import IndexEntry, VectorIndex
from factoryqa.tags import TagStore


class AppState:
    def __init__(
        self,
        data_dir: str | Path,
        embedder: Embedder | None = None,
        endpoint: ModelEndpoint | None = None,
        k: int = DEFAULT_K,
        persona: str = DEFAULT_PERSONA,
        chat_fn=None,
    ):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.index_path = self.data_dir / "index.jsonl"
        self.catalog_path = self.data_dir / "documents.json"
        self.embedder = embedder or Embedder(EmbedderConfig())
        self.endpoint = endpoint or ModelEndpoint(name="echo", base_url="mock://echo")
        self.k = k
        self.persona = persona
        self.chat_fn = chat_fn
        self.tags = TagStore(self.data_dir / "tags")
        self.index = (
            VectorIndex.load(self.index_path) if self.index_path.exists() else VectorIndex()
        )
        self.catalog: dict[str, dict] = (
            json.loads(self.catalog_path.read_text(encoding="utf-8"))
            if self.catalog_path.exists()
            else {}
        )

    @property
    def engine(self) -> RagEngine:
        return RagEngine(
            index=self.index,
            embedder=self.embedder,
            endpoint=self.endpoint,
            persona=self.persona,
            k=self.k,
            chat_fn=self.chat_fn,
        )

    def persist(self) -> None:
        self.index.save(self.index_path)
        self.catalog_path.write_text(
            json.dumps(self.catalog, ensure_ascii=False, indent=2), encoding="utf-8"
        )

    def add_document(
        self, name: str, format: DocFormat, raw: bytes, source: Source, budget: int = 400
    ) -> tuple[str, int]:
        """Load, chunk, embed, index, and persist one document.

        doc_id is a content hash, so re-adding identical content is a no-op
        rather than a duplicate.
        """
        doc = load_document(name, format, raw, source)
        if doc.doc_id in self.catalog:
            return doc.doc_id, self.catalog[doc.doc_id]["n_chunks"]
        chunks = chunk_document(doc, budget)
        for chunk in chunks:
            self.index.upsert(IndexEntry(chunk, self.embedder.embed_text(chunk.text)))
        self.catalog[doc.doc_id] = {
            "name": doc.name,
            "source": doc.source.value,
            "n_chunks": len(chunks),
        }
        self.persist()
        return doc.doc_id, len(chunks)

    def list_documents(self) -> list[dict]:
        records = [
            {"doc_id": doc_id, **info} for doc_id, info in self.catalog.items()
        ]
        records.sort(key=lambda r: (r["name"], r["doc_id"]))
        return records
