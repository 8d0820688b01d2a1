"""HTTP JSON API for the operator UI and other clients.

Error bodies are always {"code", "message", "details"} with a code from a
closed set: validation, no_knowledge, upstream_llm, not_found, state,
persistence. Answer payloads always include the snippets that were inserted
into the prompt, so clients can show where each answer came from.
"""

from __future__ import annotations

import base64
import binascii
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from factoryqa.corpus import DocFormat, Source
from factoryqa.errors import (
    FactoryQAError,
    NoKnowledgeError,
    TagStateError,
    TransportError,
    ValidationError,
)
from factoryqa.state import AppState
from factoryqa.tags import create_tag, logical_check, publish_tag


class ApiException(Exception):
    def __init__(self, status: int, code: str, message: str, details: dict | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}


class AskRequest(BaseModel):
    query: str
    k: int | None = Field(default=None, ge=1)


class DocumentUpload(BaseModel):
    name: str
    format: str
    source: str
    content_base64: str


class TagCreate(BaseModel):
    title: str
    problem_description: str
    whys: list[dict]
    root_cause: str = ""
    countermeasure: str = ""
    author: str = ""


def _scored_chunk_json(s) -> dict:
    return {
        "doc_id": s.chunk.doc_id,
        "chunk_index": s.chunk.chunk_index,
        "text": s.chunk.text,
        "score": s.score,
    }


def _tag_json(tag) -> dict:
    return {
        "tag_id": tag.tag_id,
        "title": tag.title,
        "problem_description": tag.problem_description,
        "whys": [{"question": w.question, "answer": w.answer} for w in tag.whys],
        "root_cause": tag.root_cause,
        "countermeasure": tag.countermeasure,
        "author": tag.author,
        "created_at": tag.created_at,
        "status": tag.status.value,
    }


def create_app(state: AppState) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        # flush on graceful shutdown, including SIGTERM handled by the server
        state.persist()

    app = FastAPI(title="factoryqa", lifespan=lifespan)
    app.state.app_state = state

    @app.exception_handler(ApiException)
    async def handle_api_exception(request: Request, exc: ApiException):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "details": exc.details},
        )

    @app.post("/api/ask")
    def ask(body: AskRequest):
        if not body.query.strip():
            raise ApiException(400, "validation", "query must be nonempty")
        try:
            answer = state.engine.answer_query(body.query, body.k)
        except NoKnowledgeError as exc:
            raise ApiException(409, "no_knowledge", str(exc))
        if all(a.error is not None for a in answer.per_source):
            raise ApiException(
                502,
                "upstream_llm",
                "all knowledge sources failed upstream",
                {"errors": [a.error for a in answer.per_source]},
            )
        return {
            "per_source": [
                {
                    "source": a.source.value,
                    "answer_text": a.answer_text,
                    "refused": a.refused,
                    "snippets": [_scored_chunk_json(s) for s in a.snippets],
                    "error": a.error,
                }
                for a in answer.per_source
            ]
        }

    @app.post("/api/documents", status_code=201)
    def upload_document(body: DocumentUpload):
        try:
            format = DocFormat(body.format)
            source = Source(body.source)
        except ValueError as exc:
            raise ApiException(400, "validation", f"unsupported format or source: {exc}")
        try:
            raw = base64.b64decode(body.content_base64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise ApiException(400, "validation", f"content_base64 does not decode: {exc}")
        try:
            doc_id, n_chunks = state.add_document(body.name, format, raw, source)
        except ValidationError as exc:
            raise ApiException(400, "validation", str(exc))
        except OSError as exc:
            raise ApiException(507, "persistence", f"failed to persist index: {exc}")
        return {"doc_id": doc_id, "n_chunks": n_chunks}

    @app.get("/api/documents")
    def list_documents():
        return state.list_documents()

    @app.post("/api/tags", status_code=201)
    def post_tag(body: TagCreate):
        try:
            tag = create_tag(
                title=body.title,
                problem_description=body.problem_description,
                whys=[(w.get("question", ""), w.get("answer", "")) for w in body.whys],
                root_cause=body.root_cause,
                countermeasure=body.countermeasure,
                author=body.author,
            )
        except ValidationError as exc:
            raise ApiException(400, "validation", str(exc), {"field": exc.field})
        state.tags.save(tag)
        return _tag_json(tag)

    @app.get("/api/tags")
    def list_tags():
        return [_tag_json(t) for t in state.tags.list_tags()]

    def _get_tag(tag_id: str):
        tag = state.tags.get(tag_id)
        if tag is None:
            raise ApiException(404, "not_found", f"no tag {tag_id!r}")
        return tag

    @app.post("/api/tags/{tag_id}/check")
    def check_tag(tag_id: str):
        tag = _get_tag(tag_id)
        try:
            tag, report = logical_check(
                tag, state.endpoint, store=state.tags, chat_fn=state.chat_fn
            )
        except TagStateError as exc:
            raise ApiException(409, "state", str(exc))
        except (TransportError, FactoryQAError) as exc:
            raise ApiException(502, "upstream_llm", str(exc))
        return {
            "tag_id": report.tag_id,
            "verdict": report.verdict.value.capitalize(),
            "findings": list(report.findings),
            "model_name": report.model_name,
            "status": tag.status.value,
        }

    @app.post("/api/tags/{tag_id}/publish")
    def publish(tag_id: str):
        tag = _get_tag(tag_id)
        try:
            tag = publish_tag(tag, state.index, state.embedder, store=state.tags)
        except TagStateError as exc:
            raise ApiException(409, "state", str(exc))
        state.persist()
        return _tag_json(tag)

    return app
