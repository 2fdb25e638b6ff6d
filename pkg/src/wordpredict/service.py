"""HTTP prediction service exposing stateful typing sessions.

Endpoints (all JSON bodies carry a ``v`` version field):

* ``GET  /configs``                  available preset names
* ``POST /sessions``                 ``{"config": name}`` -> session snapshot
* ``GET  /sessions/{id}``            snapshot (reconnect support)
* ``POST /sessions/{id}/events``     ``{"type": "char"|"select"|"backspace", "value": ...}``
* ``DELETE /sessions/{id}``          drop the session

Models are loaded once and shared read-only; each session serializes its
own events behind a lock.  Idle sessions are evicted lazily.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .combine import CombinerConfig, PredictionPipeline, load_presets
from .corpus import build_vocabulary, tokenize
from .ngram import NGramModel, train_ngram_model
from .semantic import SemanticSpace, build_cooccurrence, build_semantic_space
from .session import InvalidKeyEvent, PipelinePredictor, PredictionSession

DEFAULT_IDLE_TIMEOUT = 30 * 60.0


@dataclass
class _LiveSession:
    session: PredictionSession
    config_name: str
    lock: threading.Lock
    last_used: float


class ServiceEngine:
    """Shared models plus the session registry."""

    def __init__(
        self,
        model: NGramModel,
        space: SemanticSpace | None,
        presets: dict[str, CombinerConfig] | None = None,
        idle_timeout: float = DEFAULT_IDLE_TIMEOUT,
    ):
        self.model = model
        self.space = space
        self.presets = presets or load_presets()
        self.pipelines: dict[str, PredictionPipeline] = {}
        for name, config in self.presets.items():
            if config.uses_space and space is None:
                continue  # space-less deployments only expose what they can run
            self.pipelines[name] = PredictionPipeline(model, space, config)
        self.idle_timeout = idle_timeout
        self.sessions: dict[str, _LiveSession] = {}
        self._registry_lock = threading.Lock()

    def create_session(self, config_name: str) -> tuple[str, _LiveSession]:
        pipeline = self.pipelines.get(config_name)
        if pipeline is None:
            raise KeyError(config_name)
        session = PredictionSession(PipelinePredictor(pipeline))
        live = _LiveSession(session, config_name, threading.Lock(), time.monotonic())
        sid = uuid.uuid4().hex
        with self._registry_lock:
            self._evict_idle()
            self.sessions[sid] = live
        return sid, live

    def get(self, sid: str) -> _LiveSession:
        with self._registry_lock:
            self._evict_idle()
            live = self.sessions.get(sid)
        if live is None:
            raise KeyError(sid)
        live.last_used = time.monotonic()
        return live

    def drop(self, sid: str) -> bool:
        with self._registry_lock:
            return self.sessions.pop(sid, None) is not None

    def _evict_idle(self) -> None:
        now = time.monotonic()
        stale = [
            sid
            for sid, live in self.sessions.items()
            if now - live.last_used > self.idle_timeout
        ]
        for sid in stale:
            del self.sessions[sid]


def _predictions_payload(session: PredictionSession) -> list[dict]:
    return [
        {"word": w, "p": p, "rank": i + 1}
        for i, (w, p) in enumerate(session.last_list)
    ]


def _snapshot(sid: str, live: _LiveSession) -> dict:
    s = live.session
    return {
        "v": 1,
        "id": sid,
        "config": live.config_name,
        "text": s.text,
        "committed_words": s.committed_words,
        "prefix": s.prefix,
        "predictions": _predictions_payload(s),
        "counters": {"kp": s.kp, "ka": s.ka, "ksr": s.ksr},
    }


class CreateSessionBody(BaseModel):
    config: str
    v: int = 1


class EventBody(BaseModel):
    type: str
    value: str | int | None = None
    v: int = 1


def create_app(engine: ServiceEngine) -> FastAPI:
    app = FastAPI(title="wordpredict service")

    @app.get("/configs")
    def configs() -> dict:
        return {"v": 1, "configs": sorted(engine.pipelines)}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        try:
            sid, live = engine.create_session(body.config)
        except KeyError:
            raise HTTPException(404, f"unknown config {body.config!r}")
        return _snapshot(sid, live)

    @app.get("/sessions/{sid}")
    def get_session(sid: str) -> dict:
        try:
            live = engine.get(sid)
        except KeyError:
            raise HTTPException(404, "unknown session")
        with live.lock:
            return _snapshot(sid, live)

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str) -> None:
        if not engine.drop(sid):
            raise HTTPException(404, "unknown session")

    @app.post("/sessions/{sid}/events")
    def post_event(sid: str, body: EventBody) -> dict:
        try:
            live = engine.get(sid)
        except KeyError:
            raise HTTPException(404, "unknown session")
        with live.lock:
            s = live.session
            try:
                if body.type == "char":
                    if not isinstance(body.value, str):
                        raise InvalidKeyEvent("char event needs a string value")
                    s.key_char(body.value)
                elif body.type == "select":
                    if not isinstance(body.value, int):
                        raise InvalidKeyEvent("select event needs an integer rank")
                    s.key_select(body.value - 1)  # payload ranks are 1-based
                elif body.type == "backspace":
                    s.key_backspace()
                else:
                    raise InvalidKeyEvent(f"unknown event type {body.type!r}")
            except InvalidKeyEvent as err:
                raise HTTPException(422, str(err))
            return _snapshot(sid, live)

    return app


def build_demo_models(
    corpus_text: str | None = None,
    order: int = 3,
    dims: int = 24,
    window: int = 10,
    columns: int = 120,
    vocab_size: int = 2000,
) -> tuple[NGramModel, SemanticSpace]:
    """Small in-memory models trained on the synthetic corpus; used by
    ``predictd serve --demo`` and by tests that need a running stack."""
    from importlib import resources

    from .datasets import synthetic_corpus

    text = corpus_text if corpus_text is not None else synthetic_corpus(60, seed=11)
    tokens = tokenize(text)
    stop_ref = resources.files("wordpredict").joinpath("stopwords/english.txt")
    stopwords = {w.strip() for w in stop_ref.read_text(encoding="utf-8").splitlines() if w.strip()}
    vocab = build_vocabulary(tokens, max_size=vocab_size, stopwords=stopwords)
    model = train_ngram_model(tokens, vocab, order=order)
    content = build_vocabulary(
        (t for t in tokens if t.is_word() and t.surface not in stopwords),
        max_size=vocab_size,
    )
    matrix = build_cooccurrence(
        tokens, content, column_count=min(columns, len(content) - 1), window_half_width=window
    )
    space = build_semantic_space(matrix, k=min(dims, min(matrix.counts.shape) - 1))
    return model, space
