"""Chat-completion client over OpenAI-compatible HTTP endpoints.

Endpoints whose base_url uses the mock:// scheme are served in-process by
deterministic mock models (echo, refusal, consistent, issues, count), so the
whole pipeline runs offline in tests. Defaults are greedy decoding with a
fixed zero seed for reproducibility.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass, field

import httpx

from factoryqa.errors import AuthError, RateLimitError, TransportError

# Phrases that mark a response as declining to answer. A long answer that
# merely contains one of these is not a refusal, hence the length guard.
REFUSAL_PATTERNS = (
    "cannot answer",
    "can't answer",
    "do not have enough information",
    "does not include relevant information",
    "unable to answer",
)
_REFUSAL_MAX_BYTES = 300

SNIPPET_SEPARATOR = "\n---\n"


@dataclass
class EndpointParams:
    temperature: float = 0.0
    seed: int = 0
    max_tokens: int = 1024


@dataclass
class ModelEndpoint:
    name: str
    base_url: str
    model_id: str = ""
    params: EndpointParams = field(default_factory=EndpointParams)

    @property
    def is_mock(self) -> bool:
        return self.base_url.startswith("mock://")


@dataclass(frozen=True)
class Completion:
    text: str
    endpoint_name: str
    latency_ms: int
    word_count: int


def word_count(text: str) -> int:
    return len(text.split())


def is_refusal(text: str) -> bool:
    """Heuristic prefill only; human judgment files may override it."""
    if len(text.encode("utf-8")) >= _REFUSAL_MAX_BYTES:
        return False
    lowered = text.lower()
    return any(pattern in lowered for pattern in REFUSAL_PATTERNS)


def _first_snippet(prompt: str) -> str:
    """Extract the first context snippet from a rendered prompt, i.e. the text
    between the first pair of snippet separators."""
    parts = prompt.split(SNIPPET_SEPARATOR)
    if len(parts) >= 3:
        return parts[1]
    return prompt


def _mock_reply(kind: str, prompt: str) -> str:
    if kind == "echo":
        return _first_snippet(prompt)
    if kind == "refusal":
        return "I cannot answer this question."
    if kind == "consistent":
        return "CONSISTENT"
    if kind == "issues":
        return (
            "ISSUES:\n"
            "- Why 2 does not follow causally from why 1.\n"
            "- The countermeasure does not address the stated root cause."
        )
    if kind == "count":
        # Stable short answer; callers count invocations via wrappers.
        return "ok"
    if kind == "garbled":
        return "??? unparseable reply ???"
    raise TransportError(f"unknown mock model: {kind}")


def chat(
    endpoint: ModelEndpoint,
    prompt: str,
    *,
    timeout: float = 60.0,
    retries: int = 2,
    backoff: float = 0.5,
) -> Completion:
    """Send a single-user-message chat request and return the full completion.

    Transient transport failures are retried up to `retries` times with
    exponential backoff; auth and rate-limit responses are not retried.
    """
    if not prompt:
        raise ValueError("prompt must be nonempty")
    start = time.monotonic()

    if endpoint.is_mock:
        kind = endpoint.base_url.removeprefix("mock://").strip("/")
        text = _mock_reply(kind, prompt)
    else:
        text = _chat_remote(endpoint, prompt, timeout=timeout, retries=retries, backoff=backoff)

    latency_ms = int((time.monotonic() - start) * 1000)
    return Completion(
        text=text,
        endpoint_name=endpoint.name,
        latency_ms=latency_ms,
        word_count=word_count(text),
    )


def _env_key_name(endpoint_name: str) -> str:
    return "LLM_API_KEY_" + re.sub(r"[^A-Za-z0-9]", "_", endpoint_name).upper()


def _chat_remote(
    endpoint: ModelEndpoint, prompt: str, *, timeout: float, retries: int, backoff: float
) -> str:
    url = endpoint.base_url.rstrip("/") + "/chat/completions"
    body = {
        "model": endpoint.model_id,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": endpoint.params.temperature,
        "seed": endpoint.params.seed,
        "max_tokens": endpoint.params.max_tokens,
    }
    headers = {}
    api_key = os.environ.get(_env_key_name(endpoint.name))
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"

    last_exc: Exception | None = None
    for attempt in range(retries + 1):
        try:
            resp = httpx.post(url, json=body, headers=headers, timeout=timeout)
        except httpx.HTTPError as exc:
            last_exc = exc
            if attempt < retries:
                time.sleep(backoff * (2**attempt))
            continue
        if resp.status_code in (401, 403):
            raise AuthError(f"{endpoint.name}: rejected credentials ({resp.status_code})")
        if resp.status_code == 429:
            retry_after = resp.headers.get("retry-after")
            raise RateLimitError(
                f"{endpoint.name}: rate limited",
                retry_after=float(retry_after) if retry_after else None,
            )
        if resp.status_code >= 400:
            last_exc = TransportError(f"{endpoint.name}: HTTP {resp.status_code}")
            if attempt < retries:
                time.sleep(backoff * (2**attempt))
            continue
        payload = resp.json()
        return payload["choices"][0]["message"]["content"]
    raise TransportError(
        f"{endpoint.name}: chat request failed after {retries + 1} attempts: {last_exc}",
        attempts=retries + 1,
    )
