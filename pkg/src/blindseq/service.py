"""Session-based HTTP advisor for live list and grid games.

One session per game. Draws and placements are separate calls so a human
can deliberate (and override the recommendation); scripted clients pass
``?autoplace=true`` to commit the top slot atomically. Sessions live in
memory with a TTL and a cap — this is a local companion tool, not a
multi-tenant product.

Routes (identical shapes under /api/games and /api/grids):

    POST   /api/games                  create a session
    POST   /api/games/{id}/draws       submit the next raw number (0..999)
    POST   /api/games/{id}/placements  commit a slot/cell for the pending draw
    GET    /api/games/{id}             full session document
    DELETE /api/games/{id}             drop the session

Errors are reported as ``{code, message}``.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Literal, Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import game as game_ops
from . import grid as grid_ops
from .game import GameState
from .grid import GridState
from .strategies import (
    DEFAULT_N_MAX,
    StrategyTable,
    WinProbTable,
    equal_spacing_table,
    risk_tolerant_table,
    win_prob_table,
)

MAX_LIST_LENGTH = DEFAULT_N_MAX
MAX_GRID_SIDE = 8

STATUS_IN_PROGRESS = "InProgress"
STATUS_WON = "Won"
STATUS_ELIMINATED = "Eliminated"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _not_found(session_id: str) -> ApiError:
    return ApiError(404, "unknown_session", f"no session {session_id!r}")


class CreateRequest(BaseModel):
    variant: Literal["list", "grid"] = "list"
    n: Optional[int] = None
    m: Optional[int] = None
    strategy: Literal["rt", "es"] = "rt"
    samples: int = 100_000
    seed: int = 0


class DrawRequest(BaseModel):
    value: int


class PlacementRequest(BaseModel):
    slot: Optional[int] = None
    cell: Optional[tuple[int, int]] = None


@dataclass
class PendingDraw:
    raw: int
    normalized: float
    feasible: list  # slot ints (list) or (row, col) cells (grid)
    recommendations: list[dict]


@dataclass
class Session:
    id: str
    variant: str
    strategy_kind: str
    state: GameState | GridState
    status: str = STATUS_IN_PROGRESS
    created_at: float = field(default_factory=time.time)
    touched_at: float = field(default_factory=time.time)
    draws_submitted: int = 0
    elimination_turn: int | None = None
    pending: PendingDraw | None = None
    samples: int = 100_000
    seed: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """Thread-safe in-memory session map with TTL expiry and a size cap."""

    def __init__(self, cap: int, ttl: float):
        self.cap = cap
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _purge_locked(self) -> None:
        deadline = time.time() - self.ttl
        stale = [sid for sid, s in self._sessions.items() if s.touched_at < deadline]
        for sid in stale:
            del self._sessions[sid]

    def add(self, session: Session) -> None:
        with self._lock:
            self._purge_locked()
            if len(self._sessions) >= self.cap:
                raise ApiError(503, "session_cap", "session capacity reached; retry later")
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge_locked()
            session = self._sessions.get(session_id)
            if session is None:
                raise _not_found(session_id)
            session.touched_at = time.time()
            return session

    def remove(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise _not_found(session_id)
            del self._sessions[session_id]


def _iso(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat()


def create_app(
    ui_dir: str | None = None,
    session_cap: int = 10_000,
    session_ttl: float = 86_400.0,
) -> FastAPI:
    """Build the advisor application with freshly computed strategy tables."""
    rt_table, rt_probs = risk_tolerant_table(MAX_LIST_LENGTH)
    es_table = equal_spacing_table(MAX_LIST_LENGTH)
    es_probs = win_prob_table(es_table)
    tables: dict[str, tuple[StrategyTable, WinProbTable]] = {
        "rt": (rt_table, rt_probs),
        "es": (es_table, es_probs),
    }
    store = SessionStore(cap=session_cap, ttl=session_ttl)

    app = FastAPI(title="blindseq advisor", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"code": "bad_request", "message": str(exc.errors())}
        )

    def session_doc(session: Session) -> dict:
        doc = {
            "id": session.id,
            "variant": session.variant,
            "status": session.status,
            "strategy": session.strategy_kind,
            "state": session.state.to_json_dict(),
            "draws_submitted": session.draws_submitted,
            "elimination_turn": session.elimination_turn,
            "created_at": _iso(session.created_at),
        }
        if session.variant == "list":
            probs = tables[session.strategy_kind][1]
            if session.status == STATUS_ELIMINATED:
                doc["win_prob"] = 0.0
                doc["correct_so_far"] = 0.0
            else:
                doc["win_prob"] = game_ops.win_prob_from_state(session.state, probs)
                doc["correct_so_far"] = game_ops.correct_so_far(session.state)
        else:
            doc["win_prob"] = 0.0 if session.status == STATUS_ELIMINATED else None
            doc["correct_so_far"] = None
        if session.pending is not None:
            key = "feasible_slots" if session.variant == "list" else "feasible_cells"
            doc["pending_draw"] = {
                "value": session.pending.raw,
                "normalized": session.pending.normalized,
                key: session.pending.feasible,
            }
        else:
            doc["pending_draw"] = None
        return doc

    def make_session(req: CreateRequest) -> tuple[Session, dict]:
        if req.variant == "list":
            n = req.n
            if n is None or not 1 <= n <= MAX_LIST_LENGTH:
                raise ApiError(400, "bad_request", f"n must be in 1..{MAX_LIST_LENGTH}")
            session = Session(
                id=uuid.uuid4().hex,
                variant="list",
                strategy_kind=req.strategy,
                state=GameState.empty(n),
                samples=req.samples,
                seed=req.seed,
            )
            boundaries = list(tables[req.strategy][0].row(n))
        else:
            m = req.m
            if m is None or not 1 <= m <= MAX_GRID_SIDE:
                raise ApiError(400, "bad_request", f"m must be in 1..{MAX_GRID_SIDE}")
            if req.samples < 1:
                raise ApiError(400, "bad_request", "samples must be >= 1")
            session = Session(
                id=uuid.uuid4().hex,
                variant="grid",
                strategy_kind="greedy",
                state=GridState.empty(m),
                samples=req.samples,
                seed=req.seed,
            )
            boundaries = None
        store.add(session)
        doc = session_doc(session)
        doc["boundaries"] = boundaries
        return session, doc

    def list_recommendations(session: Session, x: float) -> list[dict]:
        probs = tables[session.strategy_kind][1]
        recs = game_ops.advise(session.state, x, probs)
        return [
            {
                "slot": r.slot,
                "win_prob": r.win_prob,
                "correct_so_far": r.correct_so_far,
                "rank": r.rank,
            }
            for r in recs
        ]

    def grid_recommendations(session: Session, x: float) -> list[dict]:
        ranked = grid_ops.grid_advise(
            session.state,
            x,
            samples=session.samples,
            seed=session.seed + session.draws_submitted,
        )
        return [
            {"cell": list(cell), "probability": prob, "rank": rank}
            for rank, (cell, prob) in enumerate(ranked, start=1)
        ]

    def apply_placement(session: Session, req: PlacementRequest) -> None:
        pending = session.pending
        if pending is None:
            raise ApiError(409, "stale_placement", "no uncommitted draw in this session")
        if session.variant == "list":
            if req.slot is None:
                raise ApiError(400, "bad_request", "placement needs a slot")
            if req.slot not in pending.feasible:
                raise ApiError(
                    409, "infeasible_placement", f"slot {req.slot} is not feasible for the draw"
                )
            session.state = session.state.place(req.slot, pending.normalized)
            finished = session.state.is_full
        else:
            if req.cell is None:
                raise ApiError(400, "bad_request", "placement needs a cell")
            cell = tuple(req.cell)
            if cell not in pending.feasible:
                raise ApiError(
                    409, "infeasible_placement", f"cell {list(cell)} is not feasible for the draw"
                )
            session.state = session.state.place(cell, pending.normalized)
            finished = session.state.filled_count == session.state.m**2
        session.pending = None
        if finished:
            session.status = STATUS_WON

    def handle_create(body: CreateRequest, forced_variant: str | None):
        if forced_variant is not None:
            body = body.model_copy(update={"variant": forced_variant})
        _, doc = make_session(body)
        return JSONResponse(status_code=201, content=doc)

    def handle_draw(session_id: str, body: DrawRequest, autoplace: bool):
        session = store.get(session_id)
        with session.lock:
            if session.status != STATUS_IN_PROGRESS:
                raise ApiError(409, "session_terminated", f"session is {session.status}")
            try:
                x = game_ops.normalize_draw(body.value)
            except ValueError as exc:
                raise ApiError(400, "bad_request", str(exc))
            session.draws_submitted += 1
            if session.variant == "list":
                recs = list_recommendations(session, x)
                feasible = [r["slot"] for r in recs]
                feasible_key = "feasible_slots"
            else:
                recs = grid_recommendations(session, x)
                feasible = [tuple(r["cell"]) for r in recs]
                feasible_key = "feasible_cells"
            eliminated = not recs
            if eliminated:
                session.status = STATUS_ELIMINATED
                session.elimination_turn = session.draws_submitted
                session.pending = None
            else:
                session.pending = PendingDraw(
                    raw=body.value, normalized=x, feasible=feasible, recommendations=recs
                )
                if autoplace:
                    top = recs[0] if session.variant == "grid" else next(
                        r for r in recs if r["rank"] == 1
                    )
                    apply_placement(
                        session,
                        PlacementRequest(
                            slot=top.get("slot"),
                            cell=tuple(top["cell"]) if "cell" in top else None,
                        ),
                    )
            doc = {
                "value": body.value,
                "normalized": x,
                feasible_key: [list(f) if isinstance(f, tuple) else f for f in feasible],
                "recommendations": recs,
                "eliminated": eliminated,
                "autoplaced": autoplace and not eliminated,
                "session": session_doc(session),
            }
            return doc

    def handle_placement(session_id: str, body: PlacementRequest):
        session = store.get(session_id)
        with session.lock:
            if session.status != STATUS_IN_PROGRESS:
                raise ApiError(409, "session_terminated", f"session is {session.status}")
            apply_placement(session, body)
            return session_doc(session)

    def handle_get(session_id: str):
        return session_doc(store.get(session_id))

    def handle_delete(session_id: str):
        store.remove(session_id)
        return Response(status_code=204)

    @app.post("/api/games")
    def create_game(body: CreateRequest):
        return handle_create(body, forced_variant=None)

    @app.post("/api/grids")
    def create_grid(body: CreateRequest):
        return handle_create(body, forced_variant="grid")

    @app.post("/api/games/{session_id}/draws")
    @app.post("/api/grids/{session_id}/draws")
    def submit_draw(session_id: str, body: DrawRequest, autoplace: bool = False):
        return handle_draw(session_id, body, autoplace)

    @app.post("/api/games/{session_id}/placements")
    @app.post("/api/grids/{session_id}/placements")
    def commit_placement(session_id: str, body: PlacementRequest):
        return handle_placement(session_id, body)

    @app.get("/api/games/{session_id}")
    @app.get("/api/grids/{session_id}")
    def get_state(session_id: str):
        return handle_get(session_id)

    @app.delete("/api/games/{session_id}")
    @app.delete("/api/grids/{session_id}")
    def delete_session(session_id: str):
        return handle_delete(session_id)

    @app.get("/api/health")
    def health():
        return {"service": "blindseq", "status": "ok"}

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        def root():
            return {"service": "blindseq advisor", "api": "/api/games"}

    return app
