"""Embedding clients: a remote embeddings-endpoint client and an offline mock.

The mock is a deterministic hashed bag-of-words (FNV-1a 64-bit), L2-normalized,
so test vectors are reproducible across runs and platforms. Both backends
cache by (model_name, exact text) for the lifetime of the process.
"""

from __future__ import annotations

import math
import os
import re
import threading
from dataclasses import dataclass
from enum import Enum

import httpx

from factoryqa.errors import AuthError, TransportError, ValidationError

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.values)


class EmbedderBackend(str, Enum):
    REMOTE = "remote"
    MOCK = "mock"


@dataclass
class EmbedderConfig:
    backend: EmbedderBackend = EmbedderBackend.MOCK
    model_name: str = "mock-bow"
    endpoint_url: str = ""
    dim: int = 64
    timeout: float = 30.0

    def __post_init__(self):
        if self.backend == EmbedderBackend.MOCK and self.dim < 8:
            raise ValidationError(f"mock dim must be >= 8, got {self.dim}")
        if self.backend == EmbedderBackend.REMOTE and not self.endpoint_url:
            raise ValidationError("remote backend requires endpoint_url")


def _fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def mock_embed(text: str, dim: int) -> EmbeddingVector:
    """Deterministic hashed bag-of-words embedding, unit L2 norm.

    Lowercases and splits on non-alphanumeric runs; each token adds 1.0 at
    index fnv1a_64(token) mod dim.
    """
    if dim < 8:
        raise ValidationError(f"dim must be >= 8, got {dim}")
    tokens = _TOKEN_RE.findall(text.lower())
    if not tokens:
        raise ValidationError("text has no embeddable tokens")
    values = [0.0] * dim
    for token in tokens:
        values[_fnv1a_64(token.encode("utf-8")) % dim] += 1.0
    norm = math.sqrt(sum(v * v for v in values))
    return EmbeddingVector(tuple(v / norm for v in values))


class Embedder:
    """Embedding client with an in-process cache keyed by (model_name, text).

    Safe to share across request handlers: cache reads are plain dict reads,
    writes are serialized by a lock.
    """

    def __init__(self, cfg: EmbedderConfig):
        self.cfg = cfg
        self._cache: dict[tuple[str, str], EmbeddingVector] = {}
        self._lock = threading.Lock()

    def embed_text(self, text: str) -> EmbeddingVector:
        if not text:
            raise ValidationError("cannot embed empty text")
        key = (self.cfg.model_name, text)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if self.cfg.backend == EmbedderBackend.MOCK:
            vector = mock_embed(text, self.cfg.dim)
        else:
            vector = self._embed_remote(text)
        with self._lock:
            self._cache.setdefault(key, vector)
        return self._cache[key]

    def _embed_remote(self, text: str) -> EmbeddingVector:
        headers = {}
        api_key = os.environ.get("EMBEDDINGS_API_KEY")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = {"model": self.cfg.model_name, "input": [text]}
        try:
            resp = httpx.post(
                self.cfg.endpoint_url, json=body, headers=headers, timeout=self.cfg.timeout
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"embeddings request failed: {exc}") from exc
        if resp.status_code in (401, 403):
            raise AuthError(f"embeddings endpoint rejected credentials: {resp.status_code}")
        if resp.status_code >= 400:
            raise TransportError(f"embeddings endpoint error {resp.status_code}: {resp.text[:200]}")
        payload = resp.json()
        values = payload["data"][0]["embedding"]
        return EmbeddingVector(tuple(float(v) for v in values))
