from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factoryqa.corpus import (
    DocFormat,
    Document,
    Source,
    chunk_document,
    count_tokens,
    load_document,
)
from factoryqa.errors import DecodeError, EmptyDocumentError, ValidationError


# ------------------------------------------------------------------
# load_document
# ------------------------------------------------------------------


def test_load_normalizes_line_endings():
    doc = load_document("m1", DocFormat.TEXT, b"Step 1. Close valve.\r\n", Source.MANUALS)
    assert doc.text == "Step 1. Close valve.\n"


def test_load_csv_renders_rows_with_header_labels():
    doc = load_document("t", DocFormat.CSV, b"issue,fix\njam,reset", Source.SHARED)
    assert doc.text == "issue: jam | fix: reset"


def test_load_csv_multiple_rows_and_ragged_columns():
    raw = b"code,action\nE1,stop\nE2,restart,extra"
    doc = load_document("f", DocFormat.CSV, raw, Source.MANUALS)
    assert doc.text == "code: E1 | action: stop\ncode: E2 | action: restart | col3: extra"


def test_load_empty_document_is_an_error():
    with pytest.raises(EmptyDocumentError):
        load_document("e", DocFormat.TEXT, b"", Source.MANUALS)


def test_load_non_utf8_is_a_decode_error():
    with pytest.raises(DecodeError):
        load_document("b", DocFormat.TEXT, b"\xff\xfe", Source.MANUALS)


def test_doc_id_is_content_addressed():
    a = load_document("a", DocFormat.TEXT, b"same text", Source.MANUALS)
    b = load_document("b", DocFormat.TEXT, b"same text", Source.MANUALS)
    c = load_document("a", DocFormat.TEXT, b"same text", Source.SHARED)
    assert a.doc_id == b.doc_id
    assert a.doc_id != c.doc_id


# ------------------------------------------------------------------
# count_tokens
# ------------------------------------------------------------------


@pytest.mark.parametrize(
    "text,expected",
    [("", 0), ("abcd", 1), ("a" * 1601, 401), ("abc", 1), ("abcde", 2)],
)
def test_count_tokens(text, expected):
    assert count_tokens(text) == expected


def test_count_tokens_uses_utf8_bytes():
    # 3 bytes per CJK char: 2 chars -> 6 bytes -> 2 tokens
    assert count_tokens("水泵") == 2


# ------------------------------------------------------------------
# chunk_document
# ------------------------------------------------------------------


def make_doc(text: str) -> Document:
    return Document(doc_id="d", name="d", source=Source.MANUALS, format=DocFormat.TEXT, text=text)


def test_small_document_fits_one_chunk():
    chunks = chunk_document(make_doc("x" * 100), budget=400)
    assert len(chunks) == 1
    assert chunks[0].token_count == 25


def test_split_prefers_paragraph_boundary():
    para = "word " * 159 + "final"  # 800 bytes
    assert len(para.encode()) == 800
    doc = make_doc(para + "\n\n" + para)
    chunks = chunk_document(doc, budget=400)
    assert len(chunks) == 2
    assert chunks[0].text == para + "\n\n"
    assert chunks[1].text == para


def test_unbroken_word_hard_splits_at_budget():
    doc = make_doc("x" * 3200)
    chunks = chunk_document(doc, budget=400)
    assert [len(c.text.encode()) for c in chunks] == [1600, 1600]


def test_hard_split_never_cuts_a_codepoint():
    doc = make_doc("水" * 2000)  # 6000 bytes of 3-byte chars
    chunks = chunk_document(doc, budget=400)
    assert "".join(c.text for c in chunks) == doc.text
    assert all(len(c.text.encode()) <= 1600 for c in chunks)


def test_invalid_budget_rejected():
    with pytest.raises(ValidationError):
        chunk_document(make_doc("hello"), budget=0)


def test_chunk_metadata_is_consistent():
    doc = make_doc("One sentence. " * 200)
    chunks = chunk_document(doc, budget=50)
    assert [c.chunk_index for c in chunks] == list(range(len(chunks)))
    for c in chunks:
        assert c.token_count == count_tokens(c.text)
        assert c.doc_id == doc.doc_id
        assert c.source == doc.source


# Brute-force oracle: enumerate every admissible split point and check the
# greedy chunker picked the preferred one for its first cut.
def first_cut_oracle(text: str, budget: int) -> int:
    data = text.encode("utf-8")
    window = data[: budget * 4]
    if len(window) == len(data):
        return len(window)
    candidates = [
        (0, i + 2) for i in range(len(window) - 1) if window[i : i + 2] == b"\n\n" and i > 0
    ]
    if not candidates:
        for sep in (b". ", b"! ", b"? "):
            candidates += [
                (1, i + 2) for i in range(len(window) - 1) if window[i : i + 2] == sep and i > 0
            ]
        candidates += [(1, i + 1) for i in range(len(window)) if window[i : i + 1] == b"\n" and i > 0]
    if not candidates:
        cut = len(window)
        while cut > 1 and (data[cut] & 0xC0) == 0x80:
            cut -= 1
        return cut
    return max(c for _, c in candidates)


@pytest.mark.parametrize(
    "text",
    [
        "word " * 159 + "final" + "\n\n" + "word " * 159 + "final",
        "A. B. C. " * 300,
        "no separators at all " * 100,
        "para one\n\npara two\n\npara three " * 60,
    ],
)
def test_first_cut_matches_bruteforce_oracle(text):
    chunks = chunk_document(make_doc(text), budget=50)
    expected = first_cut_oracle(text, 50)
    assert len(chunks[0].text.encode("utf-8")) == expected


# ------------------------------------------------------------------
# Properties
# ------------------------------------------------------------------

documents = st.text(
    alphabet=st.sampled_from(list("ab .!?\né水")), min_size=1, max_size=4000
).filter(lambda t: t.strip())


@given(documents, st.integers(min_value=1, max_value=200))
@settings(max_examples=150, deadline=None)
def test_partition_and_budget_properties(text, budget):
    doc = make_doc(text)
    chunks = chunk_document(doc, budget)
    assert "".join(c.text for c in chunks) == text
    assert all(count_tokens(c.text) <= budget for c in chunks)
    assert chunk_document(doc, budget) == chunks  # determinism


@given(documents, st.integers(min_value=2, max_value=200))
@settings(max_examples=100, deadline=None)
def test_halving_budget_never_decreases_chunk_count(text, budget):
    doc = make_doc(text)
    assert len(chunk_document(doc, budget // 2)) >= len(chunk_document(doc, budget))
