#!/usr/bin/env python3
"""Regenerate the published-benchmark judgment fixture.

Writes fixtures/table1_transcript.jsonl and fixtures/table1_judgments.csv:
per-cell raw judgments whose aggregates land on the published six-model
benchmark table. Each model's per-question scores are a greedy distribution
of the target sum over 0 / 0.5 / 1 values.

Caveats, verified by exhaustive search over the protocol's reachable values
(sums in 0.5 steps, every unanswered count 0..20, one-decimal rounding):

* The published Guanaco 33B hallucination figure 65.6 is only reachable with
  4 unanswered questions (10.5 / 16 * 100 = 65.625), so this fixture is NOT
  all-zero-unanswered: Llama2 carries 1 unanswered cell and Guanaco 33B
  carries 4.
* Two published cells are unreachable for ANY unanswered count: Llama2
  hallucination 13 (closest: 2.5 / 19 * 100 = 13.2) and Guanaco 65B
  completeness 39.5 (completeness is always over all 20 questions, so only
  multiples of 2.5 are possible; closest: 40.0). The fixture ships the
  closest reachable values.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from factoryqa.bench import Judgment, TranscriptCell, write_judgments, write_transcript

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
N_QUESTIONS = 20

# (endpoint name, factuality sum, completeness sum, hallucination sum,
#  unanswered count, constant per-response word count)
MODELS = [
    ("GPT-4", 19.5, 19.0, 0.0, 0, 69),
    ("StableBeluga2", 19.0, 18.5, 1.5, 0, 58),
    ("GPT-3.5", 18.0, 18.0, 1.0, 0, 89),
    ("Llama2", 15.5, 16.5, 2.5, 1, 128),
    ("Guanaco 65B", 11.0, 8.0, 13.0, 0, 131),
    ("Guanaco 33B", 5.5, 5.5, 10.5, 4, 190),
]

QIDS = [f"q{i:02d}" for i in range(1, N_QUESTIONS + 1)]


def distribute(total: float, cells: int) -> list[float]:
    """Greedy split of `total` into `cells` values from {0, 0.5, 1}."""
    assert 0 <= total <= cells and (total * 2) == int(total * 2)
    values = []
    remaining = total
    for _ in range(cells):
        take = min(1.0, remaining)
        values.append(take)
        remaining -= take
    assert remaining == 0
    return values


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    cells: list[TranscriptCell] = []
    judgments: list[Judgment] = []
    for name, f_sum, c_sum, h_sum, unanswered, words in MODELS:
        answered = N_QUESTIONS - unanswered
        f_vals = distribute(f_sum, answered) + [0.0] * unanswered
        c_vals = distribute(c_sum, answered) + [0.0] * unanswered
        h_vals = distribute(h_sum, answered) + [None] * unanswered
        for i, qid in enumerate(QIDS):
            is_unanswered = i >= answered
            text = (
                "I cannot answer this question."
                if is_unanswered
                else f"Synthetic benchmark response from {name} for {qid}."
            )
            cells.append(
                TranscriptCell(
                    qid=qid,
                    endpoint_name=name,
                    prompt=f"(fixture prompt for {qid})",
                    snippets=[],
                    response_text=text,
                    word_count=words,
                    latency_ms=0,
                    unanswered_prefill=is_unanswered,
                )
            )
            judgments.append(
                Judgment(
                    qid=qid,
                    endpoint_name=name,
                    factuality=f_vals[i],
                    completeness=c_vals[i],
                    hallucination=h_vals[i],
                    unanswered=is_unanswered,
                )
            )
    write_transcript(cells, FIXTURES / "table1_transcript.jsonl")
    write_judgments(judgments, FIXTURES / "table1_judgments.csv")
    print(f"wrote {len(cells)} cells and {len(judgments)} judgments")


if __name__ == "__main__":
    main()
