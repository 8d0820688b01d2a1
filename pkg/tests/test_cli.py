from __future__ import annotations

import socket
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest
from click.testing import CliRunner

from conftest import FIXTURES
from factoryqa.cli import main

CONFIG = str(FIXTURES / "endpoints_mock.yaml")


def run_cli(tmp_path, *args):
    runner = CliRunner()
    return runner.invoke(
        main, ["--data-dir", str(tmp_path / "data"), "--config", CONFIG, *args]
    )


def write_corpus(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.txt").write_text("Close the valve before starting the pump.")
    (corpus / "b.md").write_text("# Grease\nGrease the bearing at 80 degrees C.")
    (corpus / "c.csv").write_text("code,action\nE101,refill the tank")
    return corpus


# ------------------------------------------------------------------
# ingest
# ------------------------------------------------------------------


def test_ingest_prints_per_file_counts(tmp_path):
    corpus = write_corpus(tmp_path)
    result = run_cli(tmp_path, "ingest", "--dir", str(corpus), "--source", "manuals")
    assert result.exit_code == 0
    for name in ("a.txt", "b.md", "c.csv"):
        assert name in result.output
    assert "total: 3 files" in result.output


def test_ingest_empty_dir_warns_and_exits_zero(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    result = run_cli(tmp_path, "ingest", "--dir", str(empty), "--source", "manuals")
    assert result.exit_code == 0


def test_ingest_bad_utf8_file_listed_and_exit_one(tmp_path):
    corpus = write_corpus(tmp_path)
    (corpus / "bad.txt").write_bytes(b"\xff\xfe\x00broken")
    result = run_cli(tmp_path, "ingest", "--dir", str(corpus), "--source", "manuals")
    assert result.exit_code == 1
    assert "bad.txt" in result.output


def test_reingest_adds_no_duplicates(tmp_path):
    corpus = write_corpus(tmp_path)
    run_cli(tmp_path, "ingest", "--dir", str(corpus), "--source", "manuals")
    index_lines = (tmp_path / "data" / "index.jsonl").read_text().splitlines()
    run_cli(tmp_path, "ingest", "--dir", str(corpus), "--source", "manuals")
    assert (tmp_path / "data" / "index.jsonl").read_text().splitlines() == index_lines


# ------------------------------------------------------------------
# ask
# ------------------------------------------------------------------


def test_ask_prints_answer_and_numbered_snippets(tmp_path):
    corpus = write_corpus(tmp_path)
    run_cli(tmp_path, "ingest", "--dir", str(corpus), "--source", "manuals")
    result = run_cli(tmp_path, "ask", "valve pump", "--k", "1")
    assert result.exit_code == 0
    assert "== From manuals ==" in result.output
    assert "[1] a.txt#0" in result.output
    assert "[2]" not in result.output  # --k 1 -> exactly one snippet
    # echo endpoint answers with the top snippet
    assert "Close the valve before starting the pump." in result.output


def test_ask_without_index_exits_two(tmp_path):
    result = run_cli(tmp_path, "ask", "anything")
    assert result.exit_code == 2


# ------------------------------------------------------------------
# bench
# ------------------------------------------------------------------


def test_bench_run_and_score_smoke(tmp_path):
    corpus = write_corpus(tmp_path)
    run_cli(tmp_path, "ingest", "--dir", str(corpus), "--source", "manuals")
    out = tmp_path / "transcript.jsonl"
    questions = tmp_path / "q.yaml"
    questions.write_text(
        "- qid: q1\n  question: valve?\n- qid: q2\n  question: grease?\n"
    )
    result = run_cli(
        tmp_path, "bench", "run",
        "--questions", str(questions), "--endpoints", CONFIG, "--out", str(out),
    )
    assert result.exit_code == 0
    assert "collected 4 cells" in result.output

    judgments = tmp_path / "j.csv"
    judgments.write_text(
        "qid,endpoint_name,factuality,completeness,hallucination,unanswered\n"
        "q1,echo,1,1,0,false\n"
        "q2,echo,1,0.5,0,false\n"
        "q1,refusal,0,0,,true\n"
        "q2,refusal,0,0,,true\n"
    )
    result = run_cli(
        tmp_path, "bench", "score", "--transcript", str(out), "--judgments", str(judgments)
    )
    assert result.exit_code == 0
    assert "NA" in result.output  # all-refusal endpoint has no hallucination score
    assert "echo" in result.output


def test_bench_score_missing_judgments_exits_three(tmp_path):
    corpus = write_corpus(tmp_path)
    run_cli(tmp_path, "ingest", "--dir", str(corpus), "--source", "manuals")
    out = tmp_path / "transcript.jsonl"
    questions = tmp_path / "q.yaml"
    questions.write_text("- qid: q1\n  question: valve?\n")
    run_cli(tmp_path, "bench", "run", "--questions", str(questions), "--endpoints", CONFIG, "--out", str(out))
    judgments = tmp_path / "j.csv"
    judgments.write_text(
        "qid,endpoint_name,factuality,completeness,hallucination,unanswered\nq1,echo,1,1,0,false\n"
    )
    result = run_cli(tmp_path, "bench", "score", "--transcript", str(out), "--judgments", str(judgments))
    assert result.exit_code == 3


def test_bench_score_malformed_csv_exits_three(tmp_path):
    out = tmp_path / "transcript.jsonl"
    out.write_text("")
    judgments = tmp_path / "j.csv"
    judgments.write_text("not,a,judgments,file\n1,2,3,4\n")
    result = run_cli(tmp_path, "bench", "score", "--transcript", str(out), "--judgments", str(judgments))
    assert result.exit_code == 3


def test_bench_run_empty_index_exits_two(tmp_path):
    questions = tmp_path / "q.yaml"
    questions.write_text("- qid: q1\n  question: valve?\n")
    result = run_cli(
        tmp_path, "bench", "run",
        "--questions", str(questions), "--endpoints", CONFIG,
        "--out", str(tmp_path / "t.jsonl"),
    )
    assert result.exit_code == 2


# ------------------------------------------------------------------
# serve
# ------------------------------------------------------------------


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def test_serve_responds_then_shuts_down_on_sigterm(tmp_path):
    port = free_port()
    proc = subprocess.Popen(
        [
            sys.executable, "-m", "factoryqa.cli",
            "--data-dir", str(tmp_path / "data"), "--config", CONFIG,
            "serve", "--port", str(port),
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    )
    try:
        deadline = time.time() + 15
        body = None
        while time.time() < deadline:
            try:
                with urllib.request.urlopen(f"http://127.0.0.1:{port}/api/documents") as resp:
                    body = resp.read()
                break
            except OSError:
                if proc.poll() is not None:
                    raise AssertionError(proc.stderr.read().decode())
                time.sleep(0.2)
        assert body == b"[]"
    finally:
        proc.terminate()
        proc.wait(timeout=10)
    # graceful shutdown flushed the index file
    assert (tmp_path / "data" / "index.jsonl").exists()


def test_serve_port_in_use_exits_one(tmp_path):
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        sock.listen(1)
        port = sock.getsockname()[1]
        result = subprocess.run(
            [
                sys.executable, "-m", "factoryqa.cli",
                "--data-dir", str(tmp_path / "data"), "--config", CONFIG,
                "serve", "--port", str(port),
            ],
            capture_output=True,
            timeout=30,
        )
    assert result.returncode == 1
