"""HTTP advisor service.

Sessions live in memory (optionally snapshotted to --state-dir); each
session handles one request at a time, independent sessions run freely in
parallel.  CORS is open so the browser UI can talk to the service from any
origin.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .advisor import (
    AdvisorSession,
    IllegalMove,
    Scenario,
    SessionStore,
    UnknownSession,
    load_showcase_scenario,
)
from .encoding import Card


class PlayBody(BaseModel):
    seat: int
    card: str


class WhatIfBody(BaseModel):
    card: str


def create_app(state_dir: Optional[str] = None,
               ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="qskat advisor", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(state_dir=state_dir)
    app.state.store = store

    def _session(session_id: str) -> AdvisorSession:
        try:
            return store.get(session_id)
        except UnknownSession:
            raise HTTPException(status_code=404, detail="unknown session")

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "sessions": len(store.sessions)}

    @app.get("/api/fixtures/showcase")
    def showcase_fixture() -> dict:
        return load_showcase_scenario().to_json()

    @app.post("/api/sessions", status_code=200)
    def create_session(scenario: dict) -> dict:
        mode = scenario.get("mode", "oracle")
        if mode not in ("oracle", "exact", "hybrid"):
            raise HTTPException(status_code=400, detail=f"unknown mode {mode!r}")
        try:
            parsed = Scenario.from_json(scenario)
            session = store.create(parsed, mode=mode)
        except (KeyError, ValueError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed scenario: {exc}")
        with session.lock:
            return session.view()

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = _session(session_id)
        with session.lock:
            return session.view()

    @app.post("/api/sessions/{session_id}/play")
    def play(session_id: str, body: PlayBody) -> dict:
        session = _session(session_id)
        with session.lock:
            try:
                card = Card.parse(body.card)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            try:
                row = session.play(body.seat, card)
            except IllegalMove as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            store.persist(session)
            view = session.view()
            if row is not None:
                view["played"] = row.to_json()
            return view

    @app.post("/api/sessions/{session_id}/whatif")
    def whatif(session_id: str, body: WhatIfBody) -> dict:
        session = _session(session_id)
        with session.lock:
            try:
                card = Card.parse(body.card)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            try:
                row = session.evaluate_card(card)
            except IllegalMove as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            return row.to_json()

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str) -> None:
        try:
            store.delete(session_id)
        except UnknownSession:
            raise HTTPException(status_code=404, detail="unknown session")

    ui_path = Path(ui_dir) if ui_dir else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_path.is_dir():  # serve the built advisor UI when present
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_path), html=True), name="ui")

    return app
