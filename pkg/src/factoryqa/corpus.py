"""Document loading and token-budgeted chunking.

Documents come from two knowledge sources (factory manuals and worker-shared
knowledge) in plain text, Markdown, or CSV. Chunking partitions the document
text byte-exactly: concatenating chunk texts in order reconstructs the
original, and every chunk stays within the token budget.

Token counting is the 4-bytes-per-token heuristic: ceil(utf8_bytes / 4).
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from enum import Enum

from factoryqa.errors import DecodeError, EmptyDocumentError, ValidationError

DEFAULT_TOKEN_BUDGET = 400

# Sentence-level split markers, tried after paragraph breaks ("\n\n") and
# before falling back to a hard byte split. All are suffixes of a chunk.
_SENTENCE_SEPARATORS = (b". ", b"! ", b"? ", b"\n")
_PARAGRAPH_SEPARATOR = b"\n\n"


class Source(str, Enum):
    MANUALS = "manuals"
    SHARED = "shared"


class DocFormat(str, Enum):
    TEXT = "text"
    MARKDOWN = "markdown"
    CSV = "csv"


@dataclass(frozen=True)
class Document:
    doc_id: str
    name: str
    source: Source
    format: DocFormat
    text: str


@dataclass(frozen=True)
class DocumentChunk:
    doc_id: str
    chunk_index: int
    source: Source
    text: str
    token_count: int


def count_tokens(text: str) -> int:
    """Approximate token count: ceil(utf-8 byte length / 4)."""
    n = len(text.encode("utf-8"))
    return (n + 3) // 4


def _render_csv(decoded: str) -> str:
    rows = list(csv.reader(io.StringIO(decoded)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if len(rows) < 2:
        # Header-only or empty CSV carries no data rows.
        return ""
    header = rows[0]
    lines = []
    for row in rows[1:]:
        pairs = []
        for i, value in enumerate(row):
            col = header[i] if i < len(header) else f"col{i + 1}"
            pairs.append(f"{col}: {value}")
        lines.append(" | ".join(pairs))
    return "\n".join(lines)


def load_document(name: str, format: DocFormat, raw: bytes, source: Source) -> Document:
    """Decode and normalize raw bytes into a Document.

    CSV files are flattened one data row per line as "col: value | ...",
    labelled with the header row. The doc_id is a content hash, so loading
    identical bytes under the same source yields the same id.
    """
    try:
        decoded = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(f"{name}: not valid UTF-8: {exc}") from exc

    decoded = decoded.replace("\r\n", "\n").replace("\r", "\n")
    if format == DocFormat.CSV:
        text = _render_csv(decoded)
    else:
        text = decoded
    if not text.strip():
        raise EmptyDocumentError(f"{name}: document is empty")

    digest = hashlib.sha256(f"{source.value}\x00".encode() + text.encode("utf-8"))
    return Document(
        doc_id=digest.hexdigest()[:16],
        name=name,
        source=source,
        format=format,
        text=text,
    )


def _split_point(window: bytes, at_end: bool) -> int:
    """Byte offset to cut `window` at, preferring paragraph then sentence
    boundaries; 0 means no boundary found. `at_end` marks the final window,
    which never needs splitting."""
    if at_end:
        return len(window)
    pos = window.rfind(_PARAGRAPH_SEPARATOR)
    if pos > 0:
        return pos + len(_PARAGRAPH_SEPARATOR)
    best = 0
    for sep in _SENTENCE_SEPARATORS:
        pos = window.rfind(sep)
        if pos > 0:
            best = max(best, pos + len(sep))
    return best


def chunk_document(doc: Document, budget: int = DEFAULT_TOKEN_BUDGET) -> list[DocumentChunk]:
    """Partition doc.text into chunks of at most `budget` tokens.

    Greedy: each chunk takes the longest prefix within budget, cut at the
    last paragraph break in the window, else the last sentence boundary,
    else a hard byte split (backed off to a UTF-8 codepoint boundary).
    Separators stay attached to the chunk they end, so concatenating chunk
    texts reproduces doc.text byte-for-byte.
    """
    if budget < 1:
        raise ValidationError(f"budget must be >= 1, got {budget}")

    data = doc.text.encode("utf-8")
    max_bytes = budget * 4
    chunks: list[DocumentChunk] = []
    start = 0
    while start < len(data):
        end = min(start + max_bytes, len(data))
        window = data[start:end]
        cut = _split_point(window, at_end=(end == len(data)))
        if cut == 0:
            # Hard split; never cut inside a multi-byte codepoint.
            cut = len(window)
            while cut > 1 and (data[start + cut] & 0xC0) == 0x80:
                cut -= 1
        piece = data[start : start + cut].decode("utf-8")
        chunks.append(
            DocumentChunk(
                doc_id=doc.doc_id,
                chunk_index=len(chunks),
                source=doc.source,
                text=piece,
                token_count=count_tokens(piece),
            )
        )
        start += cut
    return chunks
