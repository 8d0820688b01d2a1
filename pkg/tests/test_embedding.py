from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factoryqa.embedding import (
    Embedder,
    EmbedderBackend,
    EmbedderConfig,
    mock_embed,
)
from factoryqa.errors import TransportError, ValidationError


def test_mock_is_deterministic():
    assert mock_embed("jam", 16) == mock_embed("jam", 16)


def test_mock_dim_matches_request():
    assert mock_embed("jam", 16).dim == 16
    assert mock_embed("jam", 32).dim == 32


def test_repeated_token_collapses_under_normalization():
    assert mock_embed("jam jam", 16) == mock_embed("jam", 16)


def test_bag_of_words_is_order_invariant():
    assert mock_embed("a b", 16) == mock_embed("b a", 16)


def test_mock_vectors_are_unit_norm():
    v = mock_embed("filler nozzle", 16)
    assert math.sqrt(sum(x * x for x in v.values)) == pytest.approx(1.0, abs=1e-9)


def test_tokenization_lowercases_and_splits_on_non_alnum():
    assert mock_embed("Valve-42!", 16) == mock_embed("valve 42", 16)


def test_no_tokens_is_an_error():
    with pytest.raises(ValidationError):
        mock_embed("!!! ---", 16)


def test_dim_below_eight_rejected():
    with pytest.raises(ValidationError):
        mock_embed("jam", 4)
    with pytest.raises(ValidationError):
        EmbedderConfig(dim=4)


@given(st.text(alphabet=st.sampled_from(list("abc XYZ0")), min_size=1), st.sampled_from([8, 16, 64]))
@settings(max_examples=100, deadline=None)
def test_mock_self_similarity_is_one(text, dim):
    try:
        v = mock_embed(text, dim)
    except ValidationError:
        return
    dot = sum(x * x for x in v.values)
    assert dot == pytest.approx(1.0, abs=1e-9)


# ------------------------------------------------------------------
# Embedder client
# ------------------------------------------------------------------


def test_embed_text_empty_is_an_error():
    with pytest.raises(ValidationError):
        Embedder(EmbedderConfig(dim=16)).embed_text("")


def test_cache_returns_identical_vectors():
    embedder = Embedder(EmbedderConfig(dim=16))
    first = embedder.embed_text("jam")
    second = embedder.embed_text("jam")
    assert first is second  # cache hit returns the stored object
    assert first == mock_embed("jam", 16)


def test_remote_requires_endpoint_url():
    with pytest.raises(ValidationError):
        EmbedderConfig(backend=EmbedderBackend.REMOTE, endpoint_url="")


def test_remote_unreachable_endpoint_is_a_transport_error():
    cfg = EmbedderConfig(
        backend=EmbedderBackend.REMOTE,
        model_name="text-embedding-ada-002",
        endpoint_url="http://127.0.0.1:1/v1/embeddings",
        timeout=0.2,
    )
    with pytest.raises(TransportError):
        Embedder(cfg).embed_text("valve")
