"""HTTP session API: interactive play (human Bob vs engine Alice) and
stateless what-if payoff queries.

Alice is automated: after every Bob action the service performs her reveal
(and, in quantum mode, her final-round measurement) before responding, so one
round-trip per Bob decision suffices.  Responses never carry the particle
location, the placement, or the seed before a game is resolved; a resolved
response reports the outcome and the true location.

A session accumulates coins across games: once a game resolves, the next
``pick`` starts a fresh round with a placement drawn from the session's
seeded stream.
"""

from __future__ import annotations

import json
import math
import os
import threading
import time
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .equilibrium import sweep_payoff
from .errors import DomainError, ProtocolViolationError, QmontyError
from .game import (
    AliceMeasurementStrategy,
    BobStrategy,
    GameSession,
    Placement,
    expected_payoff,
)

ALICE_MODES = ("classical-honest", "quantum")
PLACEMENT_KINDS = ("classical", "superposed")


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class CreateSessionRequest(BaseModel):
    alice_mode: str = "quantum"
    alpha0: float | None = None
    alpha1: float | None = None
    n_boxes: int = 3
    seed: int | None = None
    placement: str = "classical"


class ActRequest(BaseModel):
    action: str
    box: int | None = None
    decision: str | None = None
    eta: float | None = None
    beta: float | None = None
    target: int | None = None


@dataclass
class SessionRecord:
    id: str
    alice_mode: str
    alice: AliceMeasurementStrategy | None
    n_boxes: int
    placement_kind: str
    seed: int
    rng: np.random.Generator
    game: GameSession
    created: float
    updated: float
    wins: int = 0
    losses: int = 0
    games_played: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def score(self) -> int:
        return self.wins - self.losses


def _new_game(record: SessionRecord) -> GameSession:
    if record.placement_kind == "classical":
        box = int(record.rng.integers(record.n_boxes))
        placement = Placement.classical(box, record.n_boxes)
    else:
        placement = Placement.uniform_superposition(record.n_boxes)
    return GameSession(placement, rng=record.rng)


def _bob_view(record: SessionRecord) -> dict:
    game = record.game
    view = {
        "id": record.id,
        "alice_mode": record.alice_mode,
        "n_boxes": record.n_boxes,
        "phase": game.phase,
        "round": len(game.revealed),
        "pick": game.pick,
        "current_box": game.current_box,
        "revealed": list(game.revealed),
        "open_boxes": sorted(game.unrevealed),
        "final_round": game.is_final_round,
        "score": record.score,
        "wins": record.wins,
        "losses": record.losses,
        "games_played": record.games_played,
    }
    if record.alice is not None:
        view["alpha0"] = record.alice.alpha0
        view["alpha1"] = record.alice.alpha1
    if game.phase == "resolved":
        view["outcome"] = "win" if game.outcome == 1 else "lose"
        view["final_box"] = game.final_box
        view["location"] = game.final_location
    return view


def _parse_bob_strategy(req: ActRequest) -> BobStrategy:
    if req.decision == "stick":
        return BobStrategy.stick()
    if req.decision == "switch":
        return BobStrategy.switch()
    if req.decision == "mix":
        if req.eta is None:
            raise ApiError(400, "invalid_request", "mix decision needs eta")
        return BobStrategy.mix(req.eta)
    if req.decision == "quantum":
        if req.beta is None:
            raise ApiError(400, "invalid_request", "quantum decision needs beta")
        return BobStrategy.quantum(req.beta)
    raise ApiError(400, "invalid_request", f"unknown decision {req.decision!r}")


def create_app() -> FastAPI:
    store: dict[str, SessionRecord] = {}
    store_lock = threading.Lock()

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        _persist_sessions(store, store_lock)

    app = FastAPI(title="qmonty session service", lifespan=lifespan)
    # The browser client is served as a static page from elsewhere.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(ApiError)
    async def api_error_handler(_: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"code": "invalid_request", "message": str(exc)})

    def _get_record(session_id: str) -> SessionRecord:
        with store_lock:
            record = store.get(session_id)
        if record is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        return record

    def _auto_alice(record: SessionRecord) -> None:
        """Run Alice's moves until it is Bob's turn again."""
        game = record.game
        if game.phase == "picked":
            game.do_reveal()
        if (record.alice is not None and game.phase == "revealed"
                and game.is_final_round and not game.measured):
            game.do_measure(record.alice)

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest) -> dict:
        if req.alice_mode not in ALICE_MODES:
            raise ApiError(400, "invalid_request",
                           f"alice_mode must be one of {ALICE_MODES}")
        if req.placement not in PLACEMENT_KINDS:
            raise ApiError(400, "invalid_request",
                           f"placement must be one of {PLACEMENT_KINDS}")
        if req.n_boxes < 3:
            raise ApiError(400, "invalid_request", "the game needs at least 3 boxes")
        alice = None
        if req.alice_mode == "quantum":
            try:
                alice = AliceMeasurementStrategy(
                    math.pi / 4 if req.alpha0 is None else req.alpha0,
                    math.pi / 4 if req.alpha1 is None else req.alpha1)
            except DomainError as exc:
                raise ApiError(400, "invalid_request", str(exc)) from exc
        seed = req.seed if req.seed is not None else int.from_bytes(os.urandom(8), "big")
        rng = np.random.default_rng(seed)
        now = time.time()
        record = SessionRecord(
            id=uuid.uuid4().hex,
            alice_mode=req.alice_mode,
            alice=alice,
            n_boxes=req.n_boxes,
            placement_kind=req.placement,
            seed=seed,
            rng=rng,
            game=None,  # type: ignore[arg-type]
            created=now,
            updated=now,
        )
        record.game = _new_game(record)
        with store_lock:
            store[record.id] = record
        return _bob_view(record)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return _bob_view(_get_record(session_id))

    @app.post("/sessions/{session_id}/act")
    def act(session_id: str, req: ActRequest) -> dict:
        record = _get_record(session_id)
        with record.lock:
            game = record.game
            try:
                if req.action == "pick":
                    if req.box is None:
                        raise ApiError(400, "invalid_request", "pick needs a box")
                    if game.phase == "resolved":
                        record.game = game = _new_game(record)
                    game.do_pick(req.box)
                    _auto_alice(record)
                elif req.action == "decide":
                    strat = _parse_bob_strategy(req)
                    game.do_decide(strat, target=req.target)
                    if game.phase == "picked":
                        _auto_alice(record)
                    elif game.phase == "decided":
                        game.do_resolve()
                        record.games_played += 1
                        if game.outcome == 1:
                            record.wins += 1
                        else:
                            record.losses += 1
                else:
                    raise ApiError(400, "invalid_request",
                                   f"unknown action {req.action!r}")
            except ProtocolViolationError as exc:
                raise ApiError(409, "out_of_phase", str(exc)) from exc
            except DomainError as exc:
                raise ApiError(400, "invalid_request", str(exc)) from exc
            record.updated = time.time()
            return _bob_view(record)

    @app.get("/whatif")
    def whatif(alpha0: float, alpha1: float,
               eta: float | None = None, beta: float | None = None) -> dict:
        if (eta is None) == (beta is None):
            raise ApiError(400, "invalid_request", "give exactly one of eta/beta")
        try:
            alice = AliceMeasurementStrategy(alpha0, alpha1)
            bob = BobStrategy.mix(eta) if eta is not None else BobStrategy.quantum(beta)
            report = expected_payoff(alice, bob)
        except QmontyError as exc:
            raise ApiError(400, "invalid_request", str(exc)) from exc
        return {
            "alpha0": alpha0, "alpha1": alpha1, "eta": eta,
            "beta": None if beta is None else bob.beta,
            "p_win": report.p_win, "gain": report.gain,
            "method": report.method, "stderr": report.stderr,
        }

    @app.get("/sweep")
    def sweep(grid: str = "21x21x11", quantum_bob: bool = False) -> list[dict]:
        try:
            parts = [int(p) for p in grid.lower().split("x")]
        except ValueError:
            parts = []
        if len(parts) != 3:
            raise ApiError(400, "invalid_request",
                           f"grid must look like A0xA1xN, got {grid!r}")
        try:
            if quantum_bob:
                table = sweep_payoff(parts[0], parts[1], beta_steps=parts[2])
            else:
                table = sweep_payoff(parts[0], parts[1], eta_steps=parts[2])
        except QmontyError as exc:
            raise ApiError(400, "invalid_request", str(exc)) from exc
        return table.to_records()

    return app


def _persist_sessions(store: dict[str, SessionRecord], store_lock: threading.Lock) -> None:
    """Optional shutdown dump of session transcripts (QMONTY_SESSION_FILE)."""
    path = os.environ.get("QMONTY_SESSION_FILE")
    if not path:
        return
    with store_lock:
        dump = {
            record.id: {
                "seed": record.seed,
                "alice_mode": record.alice_mode,
                "n_boxes": record.n_boxes,
                "score": record.score,
                "games_played": record.games_played,
                "phase": record.game.phase,
                "actions": record.game.actions,
                "created": record.created,
                "updated": record.updated,
            }
            for record in store.values()
        }
    with open(path, "w") as handle:
        json.dump(dump, handle, indent=2, default=str)


app = create_app()
