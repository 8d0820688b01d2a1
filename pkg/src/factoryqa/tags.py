"""Yellow-tag (five-why issue report) capture, logical check, and publication.

Lifecycle is a hard gate: Draft -> Checked -> Published, where the Checked
transition requires a model-backed logical check of the causal chain. Only
Published tags enter the shared-knowledge index, so unreviewed reports cannot
silently become retrievable knowledge.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from factoryqa import gateway
from factoryqa.corpus import DocFormat, Source, chunk_document, load_document
from factoryqa.embedding import Embedder
from factoryqa.errors import CheckFormatError, TagStateError, ValidationError
from factoryqa.gateway import ModelEndpoint
from factoryqa.index import IndexEntry, VectorIndex

MAX_WHYS = 5


class TagStatus(str, Enum):
    DRAFT = "draft"
    CHECKED = "checked"
    PUBLISHED = "published"


class Verdict(str, Enum):
    CONSISTENT = "consistent"
    ISSUES = "issues"


@dataclass(frozen=True)
class WhyStep:
    question: str
    answer: str


@dataclass(frozen=True)
class YellowTag:
    tag_id: str
    title: str
    problem_description: str
    whys: tuple[WhyStep, ...]
    root_cause: str
    countermeasure: str
    author: str
    created_at: str
    status: TagStatus = TagStatus.DRAFT


@dataclass(frozen=True)
class CheckReport:
    tag_id: str
    verdict: Verdict
    findings: tuple[str, ...]
    model_name: str


def create_tag(
    title: str,
    problem_description: str,
    whys: list[tuple[str, str]],
    root_cause: str = "",
    countermeasure: str = "",
    author: str = "",
) -> YellowTag:
    for name, value in (("title", title), ("problem_description", problem_description)):
        if not value.strip():
            raise ValidationError(f"{name} must be nonempty", field=name)
    if not 1 <= len(whys) <= MAX_WHYS:
        raise ValidationError(f"whys must have 1..{MAX_WHYS} steps, got {len(whys)}", field="whys")
    return YellowTag(
        tag_id=uuid.uuid4().hex[:12],
        title=title,
        problem_description=problem_description,
        whys=tuple(WhyStep(q, a) for q, a in whys),
        root_cause=root_cause,
        countermeasure=countermeasure,
        author=author,
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def render_tag_text(tag: YellowTag) -> str:
    """Labeled-line rendering used both for the check prompt and for indexing."""
    lines = [f"Title: {tag.title}", f"Problem: {tag.problem_description}"]
    for i, step in enumerate(tag.whys, start=1):
        lines.append(f"Why {i}: {step.question} Answer: {step.answer}")
    lines.append(f"Root cause: {tag.root_cause}")
    lines.append(f"Countermeasure: {tag.countermeasure}")
    return "\n".join(lines)


def build_check_prompt(tag: YellowTag) -> str:
    return (
        "You are reviewing a factory issue report built with five-why root "
        "cause analysis. Check that each answer in the why-chain plausibly "
        "causes the level above it, and that the countermeasure addresses the "
        "stated root cause.\n"
        "Report:\n"
        f"{render_tag_text(tag)}\n"
        "Reply with the single word CONSISTENT if the chain is coherent. "
        "Otherwise reply with ISSUES: followed by one finding per line, "
        "each starting with '- '."
    )


def parse_check_reply(text: str) -> tuple[Verdict, tuple[str, ...]]:
    stripped = text.strip()
    if stripped.upper().startswith("CONSISTENT"):
        return Verdict.CONSISTENT, ()
    if stripped.upper().startswith("ISSUES"):
        findings = tuple(
            line.strip()[2:].strip()
            for line in stripped.splitlines()
            if line.strip().startswith("- ")
        )
        if findings:
            return Verdict.ISSUES, findings
    raise CheckFormatError(f"unparseable check reply: {stripped[:120]!r}")


class TagStore:
    """One JSON file per tag under a tags directory; filename is tag_id.json."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, tag_id: str) -> Path:
        return self.directory / f"{tag_id}.json"

    def save(self, tag: YellowTag) -> None:
        record = asdict(tag)
        record["status"] = tag.status.value
        record["whys"] = [{"question": w.question, "answer": w.answer} for w in tag.whys]
        self._path(tag.tag_id).write_text(
            json.dumps(record, ensure_ascii=False, indent=2), encoding="utf-8"
        )

    def get(self, tag_id: str) -> YellowTag | None:
        path = self._path(tag_id)
        if not path.exists():
            return None
        record = json.loads(path.read_text(encoding="utf-8"))
        return YellowTag(
            tag_id=record["tag_id"],
            title=record["title"],
            problem_description=record["problem_description"],
            whys=tuple(WhyStep(w["question"], w["answer"]) for w in record["whys"]),
            root_cause=record["root_cause"],
            countermeasure=record["countermeasure"],
            author=record["author"],
            created_at=record["created_at"],
            status=TagStatus(record["status"]),
        )

    def list_tags(self) -> list[YellowTag]:
        tags = [self.get(p.stem) for p in sorted(self.directory.glob("*.json"))]
        return [t for t in tags if t is not None]


def logical_check(
    tag: YellowTag, endpoint: ModelEndpoint, store: TagStore | None = None, chat_fn=None
) -> tuple[YellowTag, CheckReport]:
    """Run the model-backed coherence check; Consistent promotes the tag to Checked."""
    if tag.status != TagStatus.DRAFT:
        raise TagStateError(f"logical_check requires a draft tag, got {tag.status.value}")
    fn = chat_fn or gateway.chat
    completion = fn(endpoint, build_check_prompt(tag))
    verdict, findings = parse_check_reply(completion.text)
    report = CheckReport(
        tag_id=tag.tag_id, verdict=verdict, findings=findings, model_name=endpoint.name
    )
    if verdict == Verdict.CONSISTENT:
        tag = replace(tag, status=TagStatus.CHECKED)
        if store is not None:
            store.save(tag)
    return tag, report


def publish_tag(
    tag: YellowTag,
    index: VectorIndex,
    embedder: Embedder,
    store: TagStore | None = None,
    budget: int = 400,
) -> YellowTag:
    """Chunk, embed, and index a checked tag as shared knowledge. Idempotent."""
    if tag.status == TagStatus.PUBLISHED:
        return tag
    if tag.status != TagStatus.CHECKED:
        raise TagStateError(f"publish requires a checked tag, got {tag.status.value}")
    doc = load_document(
        name=f"yellow-tag-{tag.tag_id}",
        format=DocFormat.TEXT,
        raw=render_tag_text(tag).encode("utf-8"),
        source=Source.SHARED,
    )
    for chunk in chunk_document(doc, budget):
        index.upsert(IndexEntry(chunk, embedder.embed_text(chunk.text)))
    tag = replace(tag, status=TagStatus.PUBLISHED)
    if store is not None:
        store.save(tag)
    return tag
