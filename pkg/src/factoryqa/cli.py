"""Command-line entry points: ingest, ask, bench run / bench score, serve.

Exit codes are a stable contract: 0 success, 1 I/O failure, 2 no knowledge
available, 3 judgment-file errors.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from factoryqa.bench import (
    ReportFormat,
    aggregate_all,
    load_judgments,
    load_questions,
    read_transcript,
    render_report,
    run_benchmark,
    write_transcript,
)
from factoryqa.config import AppConfig, load_config
from factoryqa.corpus import DocFormat, Source
from factoryqa.embedding import Embedder
from factoryqa.errors import (
    FactoryQAError,
    IncompleteJudgmentsError,
    JudgmentError,
    NoKnowledgeError,
    ValidationError,
)
from factoryqa.state import AppState

EXIT_OK = 0
EXIT_IO = 1
EXIT_NO_KNOWLEDGE = 2
EXIT_JUDGMENTS = 3

_FORMAT_BY_SUFFIX = {
    ".txt": DocFormat.TEXT,
    ".md": DocFormat.MARKDOWN,
    ".csv": DocFormat.CSV,
}

_SOURCE_NAMES = {"manuals": Source.MANUALS, "shared": Source.SHARED}


def _load_app_config(config: str | None) -> AppConfig:
    return load_config(config) if config else AppConfig()


def _make_state(data_dir: str, config: str | None, endpoint_name: str | None = None) -> AppState:
    cfg = _load_app_config(config)
    endpoint = None
    if cfg.endpoints:
        endpoint = cfg.endpoint_by_name(endpoint_name)
    return AppState(
        data_dir=data_dir,
        embedder=Embedder(cfg.embedder),
        endpoint=endpoint,
        k=cfg.k,
        persona=cfg.persona,
    )


@click.group()
@click.option(
    "--data-dir",
    envvar="DATA_DIR",
    default="./data",
    show_default=True,
    help="Directory holding the index, document catalog, and tags.",
)
@click.option("--config", default=None, help="YAML config with embedder and endpoint settings.")
@click.pass_context
def main(ctx, data_dir, config):
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir
    ctx.obj["config"] = config


@main.command()
@click.option("--dir", "directory", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--source", required=True, type=click.Choice(sorted(_SOURCE_NAMES)))
@click.option("--budget", default=400, show_default=True, type=int)
@click.pass_context
def ingest(ctx, directory, source, budget):
    """Load, chunk, embed, and index every .txt/.md/.csv file in a directory."""
    state = _make_state(ctx.obj["data_dir"], ctx.obj["config"])
    files = sorted(
        p for p in Path(directory).iterdir() if p.suffix.lower() in _FORMAT_BY_SUFFIX
    )
    if not files:
        click.echo("warning: no ingestable files found", err=True)
        sys.exit(EXIT_OK)
    failures = []
    total_chunks = 0
    for path in files:
        try:
            doc_id, n_chunks = state.add_document(
                path.name, _FORMAT_BY_SUFFIX[path.suffix.lower()], path.read_bytes(),
                _SOURCE_NAMES[source], budget,
            )
        except (FactoryQAError, OSError) as exc:
            failures.append((path.name, str(exc)))
            continue
        total_chunks += n_chunks
        click.echo(f"{path.name}: {n_chunks} chunks (doc {doc_id})")
    click.echo(f"total: {len(files) - len(failures)} files, {total_chunks} chunks")
    if failures:
        for name, reason in failures:
            click.echo(f"failed: {name}: {reason}", err=True)
        sys.exit(EXIT_IO)


@main.command()
@click.argument("query")
@click.option("--k", default=None, type=int)
@click.option("--endpoint", "endpoint_name", default=None)
@click.pass_context
def ask(ctx, query, k, endpoint_name):
    """Answer a query from the indexed corpus, one answer per knowledge source."""
    state = _make_state(ctx.obj["data_dir"], ctx.obj["config"], endpoint_name)
    try:
        answer = state.engine.answer_query(query, k)
    except NoKnowledgeError:
        click.echo("error: knowledge base is empty", err=True)
        sys.exit(EXIT_NO_KNOWLEDGE)
    names = {r["doc_id"]: r["name"] for r in state.list_documents()}
    for entry in answer.per_source:
        label = "manuals" if entry.source == Source.MANUALS else "shared knowledge"
        click.echo(f"== From {label} ==")
        if entry.error:
            click.echo(f"(error: {entry.error})")
        elif entry.refused:
            click.echo("(no answer found in this source)")
        else:
            click.echo(entry.answer_text)
        for i, s in enumerate(entry.snippets, start=1):
            name = names.get(s.chunk.doc_id, s.chunk.doc_id)
            click.echo(f"  [{i}] {name}#{s.chunk.chunk_index} (score {s.score:.4f})")
        click.echo("")


@main.group()
def bench():
    """Benchmark collection and scoring."""


@bench.command("run")
@click.option("--questions", "questions_path", required=True, type=click.Path(exists=True))
@click.option("--endpoints", "endpoints_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--k", default=3, show_default=True, type=int)
@click.pass_context
def bench_run(ctx, questions_path, endpoints_path, out_path, k):
    """Collect model responses for every (question, endpoint) cell."""
    state = _make_state(ctx.obj["data_dir"], ctx.obj["config"])
    cfg = load_config(endpoints_path)
    try:
        questions = load_questions(questions_path)
    except (FactoryQAError, OSError, ValueError) as exc:
        click.echo(f"error: cannot load questions: {exc}", err=True)
        sys.exit(EXIT_IO)
    if not state.index.entries():
        click.echo("error: knowledge base is empty; ingest documents first", err=True)
        sys.exit(EXIT_NO_KNOWLEDGE)
    cells = run_benchmark(
        questions, cfg.endpoints, state.index, state.embedder, k=k, persona=cfg.persona
    )
    write_transcript(cells, out_path)
    n_failed = sum(1 for c in cells if c.failed)
    click.echo(f"collected {len(cells)} cells ({n_failed} failed) -> {out_path}")


@bench.command("score")
@click.option("--transcript", "transcript_path", required=True, type=click.Path(exists=True))
@click.option("--judgments", "judgments_path", required=True, type=click.Path(exists=True))
@click.option(
    "--format",
    "format_name",
    default="markdown",
    show_default=True,
    type=click.Choice(["markdown", "csv"]),
)
def bench_score(transcript_path, judgments_path, format_name):
    """Aggregate human judgments over a transcript and print the report table."""
    cells = read_transcript(transcript_path)
    try:
        judgments = load_judgments(judgments_path)
        reports = aggregate_all(judgments, cells)
    except IncompleteJudgmentsError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_JUDGMENTS)
    except JudgmentError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_JUDGMENTS)
    click.echo(render_report(reports, ReportFormat(format_name)), nl=False)


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--endpoint", "endpoint_name", default=None)
@click.pass_context
def serve(ctx, port, host, endpoint_name):
    """Start the HTTP JSON API."""
    import uvicorn

    from factoryqa.api import create_app

    state = _make_state(ctx.obj["data_dir"], ctx.obj["config"], endpoint_name)
    app = create_app(state)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except SystemExit as exc:
        # uvicorn exits 3 when startup fails (e.g. port already bound)
        if exc.code not in (0, None):
            click.echo(f"error: server failed to start on port {port}", err=True)
            sys.exit(EXIT_IO)
    except OSError as exc:
        click.echo(f"error: cannot bind port {port}: {exc}", err=True)
        sys.exit(EXIT_IO)


if __name__ == "__main__":
    main()
