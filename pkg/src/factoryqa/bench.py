"""Benchmark harness: collect model responses, then score human judgments.

The flow is two-phase on purpose. `run_benchmark` automates collection into a
transcript (one cell per question x endpoint, with the exact prompt and
retrieved snippets), prefilling only the unanswered flag via the refusal
heuristic. Scoring then consumes a human-filled judgments CSV: factuality,
completeness, and hallucination on a 0 / 0.5 / 1 scale, with unanswered
responses scored zero for factuality and completeness and excluded from the
hallucination denominator:

    corrected = hallucination_sum / (n - unanswered) * 100
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path

import yaml

from factoryqa import gateway
from factoryqa.corpus import Source
from factoryqa.embedding import Embedder
from factoryqa.engine import DEFAULT_PERSONA, build_prompt
from factoryqa.errors import (
    FactoryQAError,
    IncompleteJudgmentsError,
    JudgmentError,
    ValidationError,
)
from factoryqa.gateway import ModelEndpoint, is_refusal
from factoryqa.index import VectorIndex

VALID_SCORES = (0.0, 0.5, 1.0)


class Difficulty(str, Enum):
    SIMPLE = "simple"
    DIFFICULT = "difficult"


@dataclass(frozen=True)
class BenchQuestion:
    qid: str
    question: str
    context_doc_ids: tuple[str, ...] = ()
    difficulty: Difficulty = Difficulty.SIMPLE
    reference_answer: str = ""


@dataclass
class TranscriptCell:
    qid: str
    endpoint_name: str
    prompt: str
    snippets: list[dict]
    response_text: str
    word_count: int
    latency_ms: int
    unanswered_prefill: bool
    failed: bool = False


@dataclass(frozen=True)
class Judgment:
    qid: str
    endpoint_name: str
    factuality: float
    completeness: float
    hallucination: float | None
    unanswered: bool


@dataclass(frozen=True)
class ModelReport:
    endpoint_name: str
    factuality: float
    completeness: float
    hallucination: float | None  # None when every question went unanswered
    avg_words: float
    n_questions: int
    n_unanswered: int


def load_questions(path: str | Path) -> list[BenchQuestion]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix in (".yaml", ".yml"):
        records = yaml.safe_load(text)
    else:
        records = json.loads(text)
    questions = []
    seen = set()
    for record in records:
        qid = record["qid"]
        if qid in seen:
            raise ValidationError(f"duplicate qid {qid!r} in question set")
        seen.add(qid)
        questions.append(
            BenchQuestion(
                qid=qid,
                question=record["question"],
                context_doc_ids=tuple(record.get("context_doc_ids", ())),
                difficulty=Difficulty(record.get("difficulty", "simple")),
                reference_answer=record.get("reference_answer", ""),
            )
        )
    return questions


def run_benchmark(
    questions: list[BenchQuestion],
    endpoints: list[ModelEndpoint],
    index: VectorIndex,
    embedder: Embedder,
    k: int = 3,
    persona: str = DEFAULT_PERSONA,
    chat_fn=None,
) -> list[TranscriptCell]:
    """Collect one response per (question, endpoint) cell.

    Questions run in qid order within each endpoint for determinism. Transport
    failures mark the cell failed and the run continues.
    """
    fn = chat_fn or gateway.chat
    cells = []
    ordered = sorted(questions, key=lambda q: q.qid)
    for endpoint in endpoints:
        for question in ordered:
            vector = embedder.embed_text(question.question)
            hits = []
            for source in (Source.MANUALS, Source.SHARED):
                hits.extend(index.search(vector, k, source))
            hits.sort(key=lambda s: (-s.score, s.chunk.doc_id, s.chunk.chunk_index))
            hits = hits[:k]
            bundle = build_prompt(persona, [h.chunk for h in hits], question.question)
            snippets = [
                {
                    "doc_id": h.chunk.doc_id,
                    "chunk_index": h.chunk.chunk_index,
                    "text": h.chunk.text,
                    "score": h.score,
                }
                for h in hits
            ]
            try:
                completion = fn(endpoint, bundle.rendered)
            except FactoryQAError:
                cells.append(
                    TranscriptCell(
                        qid=question.qid,
                        endpoint_name=endpoint.name,
                        prompt=bundle.rendered,
                        snippets=snippets,
                        response_text="",
                        word_count=0,
                        latency_ms=0,
                        unanswered_prefill=False,
                        failed=True,
                    )
                )
                continue
            cells.append(
                TranscriptCell(
                    qid=question.qid,
                    endpoint_name=endpoint.name,
                    prompt=bundle.rendered,
                    snippets=snippets,
                    response_text=completion.text,
                    word_count=completion.word_count,
                    latency_ms=completion.latency_ms,
                    unanswered_prefill=is_refusal(completion.text),
                )
            )
    return cells


def write_transcript(cells: list[TranscriptCell], path: str | Path) -> None:
    lines = [json.dumps(asdict(cell), ensure_ascii=False) for cell in cells]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_transcript(path: str | Path) -> list[TranscriptCell]:
    cells = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            cells.append(TranscriptCell(**json.loads(line)))
    return cells


def validate_judgment(j: Judgment) -> None:
    for name, value in (("factuality", j.factuality), ("completeness", j.completeness)):
        if value not in VALID_SCORES:
            raise JudgmentError(f"{j.qid}/{j.endpoint_name}: {name}={value} not in {{0, 0.5, 1}}")
    if j.unanswered:
        if j.factuality != 0 or j.completeness != 0:
            raise JudgmentError(
                f"{j.qid}/{j.endpoint_name}: unanswered cells must score 0 for "
                "factuality and completeness"
            )
        if j.hallucination is not None:
            raise JudgmentError(
                f"{j.qid}/{j.endpoint_name}: unanswered cells carry no hallucination score"
            )
    else:
        if j.hallucination is None:
            raise JudgmentError(
                f"{j.qid}/{j.endpoint_name}: answered cells require a hallucination score"
            )
        if j.hallucination not in VALID_SCORES:
            raise JudgmentError(
                f"{j.qid}/{j.endpoint_name}: hallucination={j.hallucination} not in {{0, 0.5, 1}}"
            )


JUDGMENTS_HEADER = ["qid", "endpoint_name", "factuality", "completeness", "hallucination", "unanswered"]


def load_judgments(path: str | Path) -> list[Judgment]:
    """CSV with header qid,endpoint_name,factuality,completeness,hallucination,unanswered.

    The hallucination column is blank for unanswered cells.
    """
    judgments = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != JUDGMENTS_HEADER:
            raise JudgmentError(
                f"bad judgments header: expected {JUDGMENTS_HEADER}, got {reader.fieldnames}"
            )
        for row in reader:
            try:
                judgment = Judgment(
                    qid=row["qid"],
                    endpoint_name=row["endpoint_name"],
                    factuality=float(row["factuality"]),
                    completeness=float(row["completeness"]),
                    hallucination=float(row["hallucination"]) if row["hallucination"].strip() else None,
                    unanswered=row["unanswered"].strip().lower() in ("true", "1", "yes"),
                )
            except (KeyError, ValueError, AttributeError) as exc:
                raise JudgmentError(f"malformed judgments row {row}: {exc}") from exc
            validate_judgment(judgment)
            judgments.append(judgment)
    return judgments


def write_judgments(judgments: list[Judgment], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(JUDGMENTS_HEADER)
        for j in judgments:
            writer.writerow(
                [
                    j.qid,
                    j.endpoint_name,
                    j.factuality,
                    j.completeness,
                    "" if j.hallucination is None else j.hallucination,
                    str(j.unanswered).lower(),
                ]
            )


def corrected_hallucination(raw_sum: float, n: int, unanswered: int) -> float | None:
    """Hallucination sum over answered questions only, scaled to 100.

    Returns None (not-applicable) when every question went unanswered.
    """
    if not 0 <= unanswered <= n:
        raise JudgmentError(f"unanswered={unanswered} out of range for n={n}")
    if unanswered == n:
        return None
    if raw_sum > n - unanswered:
        raise JudgmentError(
            f"hallucination sum {raw_sum} exceeds answered count {n - unanswered}"
        )
    return raw_sum / (n - unanswered) * 100.0


def aggregate(
    endpoint_name: str, judgments: list[Judgment], cells: list[TranscriptCell]
) -> ModelReport:
    """Fold one endpoint's judgments and transcript cells into a ModelReport."""
    my_cells = [c for c in cells if c.endpoint_name == endpoint_name and not c.failed]
    by_key = {(j.qid, j.endpoint_name): j for j in judgments if j.endpoint_name == endpoint_name}
    missing = [(c.qid, endpoint_name) for c in my_cells if (c.qid, endpoint_name) not in by_key]
    if missing:
        raise IncompleteJudgmentsError(missing)

    n = len(my_cells)
    if n == 0:
        raise JudgmentError(f"no completed transcript cells for endpoint {endpoint_name!r}")
    mine = [by_key[(c.qid, endpoint_name)] for c in my_cells]
    for j in mine:
        validate_judgment(j)
    n_unanswered = sum(1 for j in mine if j.unanswered)
    h_sum = sum(j.hallucination for j in mine if j.hallucination is not None)
    return ModelReport(
        endpoint_name=endpoint_name,
        factuality=100.0 * sum(j.factuality for j in mine) / n,
        completeness=100.0 * sum(j.completeness for j in mine) / n,
        hallucination=corrected_hallucination(h_sum, n, n_unanswered),
        avg_words=sum(c.word_count for c in my_cells) / n,
        n_questions=n,
        n_unanswered=n_unanswered,
    )


def aggregate_all(judgments: list[Judgment], cells: list[TranscriptCell]) -> list[ModelReport]:
    names = []
    for cell in cells:
        if cell.endpoint_name not in names:
            names.append(cell.endpoint_name)
    return [aggregate(name, judgments, cells) for name in names]


class ReportFormat(str, Enum):
    MARKDOWN = "markdown"
    CSV = "csv"


def _fmt(value: float | None) -> str:
    return "NA" if value is None else f"{value:.1f}"


def render_report(reports: list[ModelReport], format: ReportFormat = ReportFormat.MARKDOWN) -> str:
    """Rows sorted by factuality descending; numbers to one decimal; NA for
    a hallucination score with no answered questions."""
    if not reports:
        raise ValidationError("render_report requires at least one report")
    ordered = sorted(reports, key=lambda r: -r.factuality)
    header = ["Model", "Factuality", "Completeness", "Hallucinations", "Words"]
    rows = [
        [r.endpoint_name, _fmt(r.factuality), _fmt(r.completeness), _fmt(r.hallucination), _fmt(r.avg_words)]
        for r in ordered
    ]
    if format == ReportFormat.CSV:
        lines = [",".join(header)] + [",".join(row) for row in rows]
        return "\n".join(lines) + "\n"
    widths = [max(len(header[i]), *(len(row[i]) for row in rows)) for i in range(len(header))]
    def line(cells_):
        return "| " + " | ".join(c.ljust(widths[i]) for i, c in enumerate(cells_)) + " |"
    out = [line(header), "| " + " | ".join("-" * w for w in widths) + " |"]
    out.extend(line(row) for row in rows)
    return "\n".join(out) + "\n"
