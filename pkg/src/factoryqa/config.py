"""YAML configuration: embedder settings, model endpoints, default k."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from factoryqa.embedding import EmbedderBackend, EmbedderConfig
from factoryqa.engine import DEFAULT_K, DEFAULT_PERSONA
from factoryqa.errors import ValidationError
from factoryqa.gateway import EndpointParams, ModelEndpoint


@dataclass
class AppConfig:
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)
    endpoints: list[ModelEndpoint] = field(default_factory=list)
    k: int = DEFAULT_K
    persona: str = DEFAULT_PERSONA

    def endpoint_by_name(self, name: str | None) -> ModelEndpoint:
        if not self.endpoints:
            raise ValidationError("no endpoints configured")
        if name is None:
            return self.endpoints[0]
        for endpoint in self.endpoints:
            if endpoint.name == name:
                return endpoint
        raise ValidationError(f"no endpoint named {name!r} in config")


def parse_endpoint(record: dict) -> ModelEndpoint:
    return ModelEndpoint(
        name=record["name"],
        base_url=record["base_url"],
        model_id=record.get("model_id", ""),
        params=EndpointParams(
            temperature=float(record.get("temperature", 0.0)),
            seed=int(record.get("seed", 0)),
            max_tokens=int(record.get("max_tokens", 1024)),
        ),
    )


def load_config(path: str | Path) -> AppConfig:
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    embedder_data = data.get("embedder", {})
    embedder = EmbedderConfig(
        backend=EmbedderBackend(embedder_data.get("backend", "mock")),
        model_name=embedder_data.get("model_name", "mock-bow"),
        endpoint_url=embedder_data.get("endpoint_url", ""),
        dim=int(embedder_data.get("dim", 64)),
    )
    names = [r["name"] for r in data.get("endpoints", [])]
    if len(names) != len(set(names)):
        raise ValidationError("endpoint names must be unique")
    return AppConfig(
        embedder=embedder,
        endpoints=[parse_endpoint(r) for r in data.get("endpoints", [])],
        k=int(data.get("k", DEFAULT_K)),
        persona=data.get("persona", DEFAULT_PERSONA),
    )
