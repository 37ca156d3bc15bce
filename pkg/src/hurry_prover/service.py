"""FastAPI service wrapping the prover: one protocol session per connection
or per created session id."""

from __future__ import annotations

import asyncio
import itertools
from pathlib import Path
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse
from pydantic import BaseModel, Field

from .protocol import ProtocolSession

app = FastAPI(title="hurry-prover", version="0.1.0")

_sessions: Dict[str, "SessionSlot"] = {}
_ids = itertools.count(1)


class SessionSlot:
    def __init__(self):
        self.session = ProtocolSession()
        self.lock = asyncio.Lock()


class CreateSessionResponse(BaseModel):
    session_id: str


class ProtocolRequest(BaseModel):
    id: int = Field(description="request id, echoed in the response")
    op: str = Field(description="exec | back | goals | env | about")
    payload: str = ""


class HypView(BaseModel):
    name: str
    type: str


class GoalView(BaseModel):
    hyps: List[HypView]
    concl: str


class ErrorView(BaseModel):
    line: int
    col: int
    message: str


class ProtocolResponse(BaseModel):
    id: int
    status: str
    goals: List[GoalView]
    output: str
    error: Optional[ErrorView] = None


@app.get("/health")
async def health():
    return {"status": "ok"}


@app.post("/sessions", response_model=CreateSessionResponse)
async def create_session():
    sid = f"s{next(_ids)}"
    _sessions[sid] = SessionSlot()
    return CreateSessionResponse(session_id=sid)


@app.delete("/sessions/{sid}")
async def delete_session(sid: str):
    if sid not in _sessions:
        raise HTTPException(status_code=404, detail="no such session")
    del _sessions[sid]
    return {"status": "ok"}


@app.post("/sessions/{sid}/request", response_model=ProtocolResponse)
async def session_request(sid: str, req: ProtocolRequest):
    slot = _sessions.get(sid)
    if slot is None:
        raise HTTPException(status_code=404, detail="no such session")
    async with slot.lock:
        raw = slot.session.handle(req.model_dump_json())
    return ProtocolResponse.model_validate_json(raw)


@app.websocket("/ws")
async def websocket_session(ws: WebSocket):
    """One independent session per connection; each text frame carries one
    newline-delimited JSON protocol record."""
    await ws.accept()
    session = ProtocolSession()
    try:
        while True:
            line = await ws.receive_text()
            for record in line.splitlines():
                if record.strip():
                    await ws.send_text(session.handle(record) + "\n")
    except WebSocketDisconnect:
        pass


_FRONTEND = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"


@app.get("/")
async def index():
    page = _FRONTEND / "index.html"
    if page.exists():
        return FileResponse(page)
    return {"service": "hurry-prover", "ui": "not built"}


@app.get("/assets/{name}")
async def assets(name: str):
    f = _FRONTEND / "assets" / name
    if not f.exists() or not f.resolve().is_relative_to(_FRONTEND.resolve()):
        raise HTTPException(status_code=404)
    return FileResponse(f)
