"""HTTP match server: create matches, commit sealed bids, stream state.

Endpoints (JSON unless noted):

* ``POST /matches`` — create; body per :class:`CreateMatchRequest`; returns
  the match id plus one secret token per *external* seat.
* ``GET /matches/{id}`` — public snapshot.
* ``POST /matches/{id}/bid`` / ``POST /matches/{id}/move`` — seat actions,
  authorized by token.  Illegal actions are rejected and may be retried;
  they never forfeit (that is the human-seat policy; bots play in-process
  through the referee instead).
* ``GET /matches/{id}/events`` — server-sent events: one ``data:`` line per
  public snapshot, finishing with a ``transcript`` event.
* ``GET /matches/{id}/transcript`` — the serialized transcript (finished
  matches only).
* ``GET /games`` — playable game specs.

Snapshots are rendered deterministically (fixed key order) and contain no
function of any uncommitted bid — only ``bids_committed`` booleans — so
captured snapshot bytes cannot leak a sealed amount.  Finished matches are
persisted as transcript files and are restored, queryable, on restart.
"""

from __future__ import annotations

import json
import queue
import secrets
import threading
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse, Response, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from bidgame.agents import AGENT_IDS, AgentAction
from bidgame.discrete import Bid, DrawPolicy
from bidgame.errors import DomainError, IllegalActionError
from bidgame.games import Game, make_game, known_game_specs
from bidgame.games.base import Player
from bidgame.match import (
    MatchConfig,
    MatchPhase,
    MatchReferee,
    build_seat,
    parse_transcript,
    serialize_transcript,
)

EXTERNAL = "external"
_DONE = object()  # subscriber-queue sentinel: stream is complete


class CreateMatchRequest(BaseModel):
    game: str
    alice_chips: int = Field(default=100, ge=0)
    bob_chips: int = Field(default=100, ge=0)
    star_holder: str = "A"
    draw_policy: str = "draw_is_bob_win"
    seat_a: str = EXTERNAL
    seat_b: str = EXTERNAL
    seed: int = 0
    match_id: str | None = Field(
        default=None,
        pattern=r"^[A-Za-z0-9_-]{1,64}$",
        description="Optional caller-chosen id (reproducible runs); default random.",
    )


class BidRequest(BaseModel):
    token: str
    amount: int
    include_star: bool = False


class MoveRequest(BaseModel):
    token: str
    move: str


class Session:
    """One live match: referee, seats, subscribers, per-round deadline."""

    def __init__(
        self,
        match_id: str,
        game: Game,
        config: MatchConfig,
        clock,
        timeout: float,
        build_seats: bool = True,
    ):
        self.id = match_id
        self.game = game
        self.config = config
        self.referee = MatchReferee(game, config)
        self.clock = clock
        self.timeout = timeout
        self.lock = threading.RLock()
        self.subscribers: list[queue.Queue] = []
        self.tokens: dict[Player, str] = {}
        self.agents: dict[Player, object] = {}
        self._pending_bot_actions: dict[Player, AgentAction] = {}
        self.deadline = clock() + timeout
        if build_seats:
            seat_ids = {Player.ALICE: config.seat_a, Player.BOB: config.seat_b}
            for player, seat_id in seat_ids.items():
                if seat_id == EXTERNAL:
                    self.tokens[player] = secrets.token_hex(16)
                else:
                    self.agents[player] = build_seat(seat_id, player, game, config)

    # -- seat plumbing ------------------------------------------------------

    def seat_for_token(self, token: str) -> Player:
        for player, expected in self.tokens.items():
            if secrets.compare_digest(expected, token):
                return player
        raise HTTPException(status_code=403, detail="unknown seat token")

    # -- bots and timeouts --------------------------------------------------

    def advance_bots(self) -> None:
        """Let bot seats act until the match waits on a human or finishes.

        A bot's bid and its move-on-win are one committed decision: the
        action is computed once per round, its bid goes into the sealed
        buffer, and the stored move is played if the bot wins the auction.
        Referee-rejected actions forfeit the bot (agents get no retries).
        """
        referee = self.referee
        while True:
            if referee.phase is MatchPhase.AWAITING_BIDS:
                waiting = [
                    p for p in Player if p in self.agents and not referee.has_bid(p)
                ]
                if not waiting:
                    return
                for player in waiting:
                    action = self.agents[player].act(referee.position, referee.chips)
                    self._pending_bot_actions[player] = action
                    try:
                        referee.submit_bid(player, action.bid)
                    except IllegalActionError:
                        referee.forfeit(player)
                    self._progress()
                    if referee.phase is not MatchPhase.AWAITING_BIDS:
                        break
            elif referee.phase is MatchPhase.AWAITING_MOVE:
                mover = referee.mover
                if mover not in self.agents:
                    return
                action = self._pending_bot_actions.pop(mover, None)
                if action is None or action.move_if_win is None:
                    referee.forfeit(mover)
                else:
                    try:
                        referee.submit_move(mover, action.move_if_win)
                    except IllegalActionError:
                        referee.forfeit(mover)
                self.round_completed()
            else:
                return

    def round_completed(self) -> None:
        """Bookkeeping after a move (or forfeit) closes the current round."""
        self._pending_bot_actions.clear()
        self._progress()

    def check_timeout(self) -> None:
        """Forfeit the slowest external seat once the deadline passes."""
        referee = self.referee
        if referee.phase is MatchPhase.FINISHED or self.clock() <= self.deadline:
            return
        if referee.phase is MatchPhase.AWAITING_BIDS:
            laggards = [p for p in Player if p in self.tokens and not referee.has_bid(p)]
        else:
            laggards = [referee.mover] if referee.mover in self.tokens else []
        if laggards:
            referee.forfeit(laggards[0])
            self.publish()

    def _progress(self) -> None:
        """Reset the inactivity deadline and notify subscribers."""
        self.deadline = self.clock() + self.timeout
        self.publish()

    # -- snapshots ----------------------------------------------------------

    def snapshot(self) -> dict:
        referee = self.referee
        current = None
        if referee.phase is MatchPhase.AWAITING_MOVE:
            alice_bid, bob_bid = referee.revealed_bids
            current = {
                "bid_a": str(alice_bid),
                "bid_b": str(bob_bid),
                "mover": referee.mover.short,
            }
        finished = referee.phase is MatchPhase.FINISHED
        return {
            "match_id": self.id,
            "game": self.config.game,
            "seats": {"A": self.config.seat_a, "B": self.config.seat_b},
            "seed": self.config.seed,
            "draw_policy": self.config.draw_policy.value,
            "phase": referee.phase.value,
            "round": referee.round_number,
            "position": referee.position,
            "board": self.game.decode(referee.position),
            "chips": {
                "alice": referee.chips.alice_chips,
                "bob": referee.chips.bob_chips,
                "star_holder": referee.chips.star_holder.short,
                "display": str(referee.chips),
            },
            "bids_committed": {p.short: referee.has_bid(p) for p in Player},
            "current_round": current,
            "legal_moves": {
                p.short: [label for label, _ in self.game.legal_moves(referee.position, p)]
                for p in Player
            },
            "past_rounds": [
                {
                    "round": r.index,
                    "bid_a": str(r.alice_bid),
                    "bid_b": str(r.bob_bid),
                    "mover": r.mover.short,
                    "chips": str(r.chips_after),
                    "move": r.move,
                }
                for r in referee.rounds
            ],
            "outcome": referee.outcome.value.lower() if finished else None,
            "forfeited": referee.forfeited.short if referee.forfeited else None,
            "transcript_url": f"/matches/{self.id}/transcript" if finished else None,
        }

    def snapshot_bytes(self) -> bytes:
        return json.dumps(self.snapshot(), separators=(",", ":")).encode()

    def publish(self) -> None:
        payload = self.snapshot_bytes()
        for q in self.subscribers:
            q.put(payload)
        if self.referee.phase is MatchPhase.FINISHED:
            for q in self.subscribers:
                q.put(_DONE)
            self.subscribers = []


class MatchService:
    """Registry of sessions plus transcript persistence."""

    def __init__(self, transcript_dir: Path, timeout: float, clock):
        self.transcript_dir = Path(transcript_dir)
        self.transcript_dir.mkdir(parents=True, exist_ok=True)
        self.timeout = timeout
        self.clock = clock
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()
        self._restore()

    def _restore(self) -> None:
        for path in sorted(self.transcript_dir.glob("*.transcript")):
            try:
                transcript = parse_transcript(path.read_text())
                game = make_game(transcript.config.game, allow_paths=False)
                session = Session(
                    path.stem, game, transcript.config, self.clock, self.timeout,
                    build_seats=False,
                )
                referee = session.referee
                for r in transcript.rounds:
                    referee.submit_bid(Player.ALICE, r.alice_bid)
                    referee.submit_bid(Player.BOB, r.bob_bid)
                    referee.submit_move(r.mover, r.move)
                if transcript.forfeited is not None:
                    referee.forfeit(transcript.forfeited)
            except (ValueError, DomainError):
                continue  # unreadable or non-replayable file: leave it alone
            if referee.phase is MatchPhase.FINISHED:
                self.sessions[path.stem] = session

    def create(self, request: CreateMatchRequest) -> tuple[Session, dict[str, str]]:
        try:
            game = make_game(request.game, allow_paths=False)
            config = MatchConfig(
                game=request.game,
                alice_chips=request.alice_chips,
                bob_chips=request.bob_chips,
                star_holder=Player.from_short(request.star_holder),
                draw_policy=DrawPolicy.from_string(request.draw_policy),
                seat_a=request.seat_a,
                seat_b=request.seat_b,
                seed=request.seed,
            )
            match_id = request.match_id or secrets.token_hex(8)
            with self.lock:
                if match_id in self.sessions:
                    raise HTTPException(status_code=409, detail="match id already exists")
                session = Session(match_id, game, config, self.clock, self.timeout)
                self.sessions[match_id] = session
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        with session.lock:
            session.advance_bots()
            self._persist_if_finished(session)
        tokens = {player.short: token for player, token in session.tokens.items()}
        return session, tokens

    def get(self, match_id: str) -> Session:
        session = self.sessions.get(match_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no match {match_id!r}")
        return session

    def transcript_path(self, match_id: str) -> Path:
        return self.transcript_dir / f"{match_id}.transcript"

    def _persist_if_finished(self, session: Session) -> None:
        if session.referee.phase is MatchPhase.FINISHED:
            text = serialize_transcript(session.referee.transcript())
            self.transcript_path(session.id).write_text(text)

    def poke(self, session: Session) -> None:
        """Apply lazy timeout checks and let bots catch up."""
        with session.lock:
            session.check_timeout()
            session.advance_bots()
            self._persist_if_finished(session)


def create_app(
    transcript_dir: str | Path,
    *,
    timeout_seconds: float = 120.0,
    clock=time.monotonic,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service app (one transcript directory per instance).

    ``ui_dir`` optionally serves a static browser client from ``/`` so the
    whole thing runs same-origin; tokens are the only authorization either
    way, so cross-origin API use is also allowed.
    """
    app = FastAPI(title="bidgame service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    service = MatchService(Path(transcript_dir), timeout_seconds, clock)
    app.state.service = service

    def snapshot_response(session: Session) -> Response:
        with session.lock:
            return Response(session.snapshot_bytes(), media_type="application/json")

    @app.get("/games")
    def list_games():
        return {"games": known_game_specs(), "agents": list(AGENT_IDS)}

    @app.post("/matches", status_code=201)
    def create_match(request: CreateMatchRequest):
        session, tokens = service.create(request)
        with session.lock:
            snapshot = session.snapshot()
        return {"match_id": session.id, "tokens": tokens, "snapshot": snapshot}

    @app.get("/matches/{match_id}")
    def get_state(match_id: str):
        session = service.get(match_id)
        service.poke(session)
        return snapshot_response(session)

    @app.post("/matches/{match_id}/bid")
    def submit_bid(match_id: str, request: BidRequest):
        session = service.get(match_id)
        service.poke(session)
        with session.lock:
            player = session.seat_for_token(request.token)
            try:
                session.referee.submit_bid(player, Bid(request.amount, request.include_star))
            except IllegalActionError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            except DomainError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from None
            session._progress()
            session.advance_bots()
            service._persist_if_finished(session)
            return {"accepted": True, "phase": session.referee.phase.value}

    @app.post("/matches/{match_id}/move")
    def submit_move(match_id: str, request: MoveRequest):
        session = service.get(match_id)
        service.poke(session)
        with session.lock:
            player = session.seat_for_token(request.token)
            referee = session.referee
            if referee.phase is MatchPhase.AWAITING_MOVE and player is not referee.mover:
                raise HTTPException(status_code=403, detail="only the auction winner moves")
            try:
                referee.submit_move(player, request.move)
            except IllegalActionError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            except DomainError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from None
            session.round_completed()
            session.advance_bots()
            service._persist_if_finished(session)
            return {"accepted": True, "phase": referee.phase.value}

    @app.get("/matches/{match_id}/transcript", response_class=PlainTextResponse)
    def get_transcript(match_id: str):
        session = service.sessions.get(match_id)
        if session is not None:
            service.poke(session)
            with session.lock:
                if session.referee.phase is MatchPhase.FINISHED:
                    return serialize_transcript(session.referee.transcript())
                raise HTTPException(status_code=409, detail="match still in progress")
        path = service.transcript_path(match_id)
        if path.is_file():
            return path.read_text()
        raise HTTPException(status_code=404, detail=f"no match {match_id!r}")

    @app.get("/matches/{match_id}/events")
    def subscribe(match_id: str):
        session = service.get(match_id)
        service.poke(session)

        def event_stream():
            q: queue.Queue = queue.Queue()
            with session.lock:
                payload = session.snapshot_bytes()
                finished = session.referee.phase is MatchPhase.FINISHED
                if not finished:
                    session.subscribers.append(q)
            try:
                yield b"data: " + payload + b"\n\n"
                if finished:
                    yield _transcript_event(session.id)
                    return
                while True:
                    try:
                        item = q.get(timeout=0.5)
                    except queue.Empty:
                        yield b": keep-alive\n\n"
                        continue
                    if item is _DONE:
                        yield _transcript_event(session.id)
                        return
                    yield b"data: " + item + b"\n\n"
            finally:
                with session.lock:
                    if q in session.subscribers:
                        session.subscribers.remove(q)

        return StreamingResponse(event_stream(), media_type="text/event-stream")

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _transcript_event(match_id: str) -> bytes:
    ref = json.dumps({"transcript_url": f"/matches/{match_id}/transcript"})
    return b"event: transcript\ndata: " + ref.encode() + b"\n\n"


def main() -> None:  # pragma: no cover - thin uvicorn wrapper
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="Run the bidgame match server")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--transcripts", default="transcripts")
    parser.add_argument("--timeout", type=float, default=120.0)
    parser.add_argument("--ui", default=None, help="serve this static client directory at /")
    args = parser.parse_args()
    uvicorn.run(
        create_app(args.transcripts, timeout_seconds=args.timeout, ui_dir=args.ui),
        host=args.host,
        port=args.port,
    )


if __name__ == "__main__":  # pragma: no cover
    main()
