#!/usr/bin/env python3
"""Regenerate the golden prompt files in fixtures/golden_prompts/.

Assembled here with literal strings, independently of the package's prompt
builder, so the byte-equality tests compare two separately written renderings
of the same template.
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures" / "golden_prompts"

PERSONA = (
    "You are an assistant that assists detergent production line operators "
    "with decision support and advice based on a knowledge base of standard "
    "operating procedures, single point lessons (SPL), etc."
)

CASES = {
    "single_snippet": {
        "persona": PERSONA,
        "snippets": ["Relubricate the OKS 4220 grease points at 80 degrees C."],
        "query": "At what temperature is relubrication necessary for the OKS 4220 grease?",
    },
    "two_snippets": {
        "persona": PERSONA,
        "snippets": [
            "Step 1. Close the inlet valve before opening the hopper.",
            "Step 2. Vent residual pressure through the bleed line.",
        ],
        "query": "How do I open the hopper safely?",
    },
    "separator_in_snippet": {
        "persona": PERSONA,
        "snippets": [
            "Troubleshooting table:\n---\nJam detected -> reset the feeder.",
            "If the jam persists, call maintenance.",
        ],
        "query": "What should I do about a feeder jam?",
    },
    "separator_in_query": {
        "persona": PERSONA,
        "snippets": ["The turntable overload limit is 120 kg."],
        "query": "What is the overload limit?\n---\nAnswer briefly.",
    },
    "custom_persona": {
        "persona": "You are an assistant for packaging line technicians.",
        "snippets": ["Replace the sealing bar film after 10,000 cycles."],
        "query": "When should the sealing bar film be replaced?",
    },
}


def render(persona: str, snippets: list[str], query: str) -> str:
    parts = [
        persona
        + " We have provided context information below from relevant documents and reports.",
    ]
    for snippet in snippets:
        parts.append(snippet)
    body = "\n---\n".join(parts)
    return (
        body
        + "\n---\n"
        + "Given this information, please answer the following question:\n"
        + query
        + "\n"
        + "If the provided context does not include relevant information "
        + "to answer the question, please do not respond."
    )


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    for name, case in CASES.items():
        (FIXTURES / f"{name}.txt").write_text(
            render(case["persona"], case["snippets"], case["query"]), encoding="utf-8"
        )
    (FIXTURES / "cases.json").write_text(
        json.dumps(CASES, ensure_ascii=False, indent=2), encoding="utf-8"
    )
    print(f"wrote {len(CASES)} golden prompts")


if __name__ == "__main__":
    main()
