"""In-memory vector store with exact cosine top-k search and JSONL persistence.

Exact full scan, no approximate structures: corpora here are desk-scale and
exactness keeps the brute-force oracle property testable. Search results are
ordered by (-score, doc_id, chunk_index) for determinism.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from pathlib import Path

from factoryqa.corpus import DocumentChunk, Source
from factoryqa.embedding import EmbeddingVector
from factoryqa.errors import (
    DimensionMismatchError,
    IndexFormatError,
    UndefinedSimilarityError,
)


@dataclass(frozen=True)
class IndexEntry:
    chunk: DocumentChunk
    vector: EmbeddingVector


@dataclass(frozen=True)
class ScoredChunk:
    chunk: DocumentChunk
    score: float


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dim mismatch: {a.dim} vs {b.dim}")
    norm_a = math.sqrt(sum(v * v for v in a.values))
    norm_b = math.sqrt(sum(v * v for v in b.values))
    if norm_a == 0.0 or norm_b == 0.0:
        raise UndefinedSimilarityError("cosine undefined for zero vector")
    dot = sum(x * y for x, y in zip(a.values, b.values))
    return dot / (norm_a * norm_b)


class VectorIndex:
    """Entries keyed by (doc_id, chunk_index); first insert fixes the dimension.

    Concurrency: mutations hold a lock; search iterates over a snapshot of the
    entries so it never observes a partially applied upsert.
    """

    def __init__(self):
        self._entries: dict[tuple[str, int], IndexEntry] = {}
        self._dim: int | None = None
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def dim(self) -> int | None:
        return self._dim

    def entries(self) -> list[IndexEntry]:
        return list(self._entries.values())

    def get(self, doc_id: str, chunk_index: int) -> IndexEntry | None:
        return self._entries.get((doc_id, chunk_index))

    def upsert(self, entry: IndexEntry) -> None:
        with self._lock:
            if self._dim is None:
                self._dim = entry.vector.dim
            elif entry.vector.dim != self._dim:
                raise DimensionMismatchError(
                    f"entry dim {entry.vector.dim} != index dim {self._dim}"
                )
            self._entries[(entry.chunk.doc_id, entry.chunk.chunk_index)] = entry

    def remove_doc(self, doc_id: str) -> int:
        with self._lock:
            keys = [k for k in self._entries if k[0] == doc_id]
            for key in keys:
                del self._entries[key]
            return len(keys)

    def has_source(self, source: Source) -> bool:
        return any(e.chunk.source == source for e in self._entries.values())

    def doc_ids(self) -> set[str]:
        return {doc_id for doc_id, _ in self._entries}

    def search(self, query: EmbeddingVector, k: int, source: Source) -> list[ScoredChunk]:
        """Top-k entries of one source by cosine similarity; empty source -> []."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        snapshot = [e for e in self._entries.values() if e.chunk.source == source]
        if not snapshot:
            return []
        if query.dim != self._dim:
            raise DimensionMismatchError(f"query dim {query.dim} != index dim {self._dim}")
        scored = [ScoredChunk(e.chunk, cosine(query, e.vector)) for e in snapshot]
        scored.sort(key=lambda s: (-s.score, s.chunk.doc_id, s.chunk.chunk_index))
        return scored[:k]

    def save(self, path: str | Path) -> None:
        """One JSON record per line; floats serialized at full round-trip precision."""
        path = Path(path)
        lines = []
        for entry in sorted(self._entries.values(), key=lambda e: (e.chunk.doc_id, e.chunk.chunk_index)):
            lines.append(
                json.dumps(
                    {
                        "doc_id": entry.chunk.doc_id,
                        "chunk_index": entry.chunk.chunk_index,
                        "source": entry.chunk.source.value,
                        "text": entry.chunk.text,
                        "token_count": entry.chunk.token_count,
                        "vector": list(entry.vector.values),
                    },
                    ensure_ascii=False,
                )
            )
        path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "VectorIndex":
        index = cls()
        text = Path(path).read_text(encoding="utf-8")
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                chunk = DocumentChunk(
                    doc_id=record["doc_id"],
                    chunk_index=record["chunk_index"],
                    source=Source(record["source"]),
                    text=record["text"],
                    token_count=record["token_count"],
                )
                vector = EmbeddingVector(tuple(float(v) for v in record["vector"]))
            except (ValueError, KeyError, TypeError) as exc:
                raise IndexFormatError(f"bad index record at line {line_no}: {exc}", line_no) from exc
            index.upsert(IndexEntry(chunk, vector))
        return index
