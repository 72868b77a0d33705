"""Match referee: sealed-bid rounds, chip ledger, transcripts.

The referee is a small state machine (`MatchReferee`) so that in-process
bot matches and the network service share one rules engine.  Sealed bids
are structural: committed bids sit in a private buffer and the auction
resolves only once both are present, so no code path can observe the
opponent's pending bid.  A finished match yields a `MatchTranscript` whose
line format round-trips bit-exactly and which `verify_transcript` can
re-derive from the rules alone; the transcript is the single source of
truth for every other layer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from bidgame.agents import AgentAction, make_agent
from bidgame.discrete import Bid, ChipState, DrawPolicy, resolve_bids, validate_bid
from bidgame.errors import DomainError, IllegalActionError, TranscriptError
from bidgame.games import Game, make_game
from bidgame.games.base import Outcome, Player

TRANSCRIPT_HEADER = "bidding-match v1"
SCRIPT_HEADER = "bid-script v1"


@dataclass(frozen=True)
class MatchConfig:
    """Everything needed to start (or re-derive) one match."""

    game: str
    alice_chips: int = 100
    bob_chips: int = 100
    star_holder: Player = Player.ALICE
    draw_policy: DrawPolicy = DrawPolicy.DRAW_IS_BOB_WIN
    seat_a: str = "external"
    seat_b: str = "external"
    seed: int = 0

    def __post_init__(self):
        if self.alice_chips < 0 or self.bob_chips < 0:
            raise ValueError("chip piles must be nonnegative")

    def initial_chips(self) -> ChipState:
        return ChipState(self.alice_chips, self.bob_chips, self.star_holder)

    @property
    def total_chips(self) -> int:
        return self.alice_chips + self.bob_chips


@dataclass(frozen=True)
class RoundRecord:
    """One completed auction-and-move round, exactly as serialized."""

    index: int
    alice_bid: Bid
    bob_bid: Bid
    mover: Player
    chips_after: ChipState
    move: str


@dataclass(frozen=True)
class MatchTranscript:
    config: MatchConfig
    rounds: tuple[RoundRecord, ...]
    outcome: Outcome
    forfeited: Player | None = None

    @property
    def pile_history(self) -> tuple[str, ...]:
        """The chip column of the ledger, one entry per completed round."""
        return tuple(str(r.chips_after) for r in self.rounds)


class MatchPhase(enum.Enum):
    AWAITING_BIDS = "awaiting-bids"
    AWAITING_MOVE = "awaiting-move"
    FINISHED = "finished"


class MatchReferee:
    """Rules engine for a single match.

    Drive it with ``submit_bid`` (once per seat per round; the second
    commitment resolves the auction) and ``submit_move`` (auction winner
    only).  Illegal submissions raise without changing state — forfeit
    policy belongs to the caller, except that an auction winner with no
    legal move forfeits immediately, since no further input could ever
    finish the round.
    """

    def __init__(self, game: Game, config: MatchConfig):
        self.game = game
        self.config = config
        self.position = game.initial()
        self.chips = config.initial_chips()
        self.rounds: list[RoundRecord] = []
        self.mover: Player | None = None
        self.forfeited: Player | None = None
        self._sealed: dict[Player, Bid] = {}
        self._revealed: tuple[Bid, Bid] | None = None
        outcome = game.outcome(self.position)
        self.outcome = outcome if outcome.is_terminal else None
        self.phase = MatchPhase.FINISHED if outcome.is_terminal else MatchPhase.AWAITING_BIDS

    @property
    def round_number(self) -> int:
        return len(self.rounds) + 1

    @property
    def revealed_bids(self) -> tuple[Bid, Bid] | None:
        """This round's (alice, bob) bids — public once the auction resolved."""
        return self._revealed

    def has_bid(self, player: Player) -> bool:
        """Whether ``player`` has committed this round (never the amount)."""
        return player in self._sealed

    def submit_bid(self, player: Player, bid: Bid) -> None:
        if self.phase is not MatchPhase.AWAITING_BIDS:
            raise DomainError(f"not awaiting bids (phase {self.phase.value})")
        if player in self._sealed:
            raise DomainError(f"{player.value} already committed a bid this round")
        validate_bid(self.chips, player, bid)
        self._sealed[player] = bid
        if len(self._sealed) == 2:
            self._reveal()

    def _reveal(self) -> None:
        alice_bid = self._sealed[Player.ALICE]
        bob_bid = self._sealed[Player.BOB]
        mover, chips_after = resolve_bids(self.chips, alice_bid, bob_bid)
        self._revealed = (alice_bid, bob_bid)
        self.mover = mover
        self.chips = chips_after
        if self.game.legal_moves(self.position, mover):
            self.phase = MatchPhase.AWAITING_MOVE
        else:
            self.forfeit(mover)

    def submit_move(self, player: Player, label: str) -> None:
        if self.phase is not MatchPhase.AWAITING_MOVE:
            raise DomainError(f"not awaiting a move (phase {self.phase.value})")
        if player is not self.mover:
            raise IllegalActionError(
                f"{player.value} lost the auction; only {self.mover.value} may move"
            )
        successors = dict(self.game.legal_moves(self.position, player))
        if label not in successors:
            raise IllegalActionError(f"illegal move {label!r} at {self.position!r}")
        alice_bid, bob_bid = self._revealed
        self.rounds.append(
            RoundRecord(self.round_number, alice_bid, bob_bid, player, self.chips, label)
        )
        self.position = successors[label]
        self.mover = None
        self._sealed = {}
        self._revealed = None
        outcome = self.game.outcome(self.position)
        if outcome.is_terminal:
            self.outcome = outcome
            self.phase = MatchPhase.FINISHED
        else:
            self.phase = MatchPhase.AWAITING_BIDS

    def forfeit(self, player: Player) -> None:
        """End the match against ``player`` (illegal action, stuck, timeout)."""
        if self.phase is MatchPhase.FINISHED:
            raise DomainError("match already finished")
        self.forfeited = player
        self.outcome = Outcome.win_for(player.opponent)
        self.phase = MatchPhase.FINISHED
        self.mover = None
        self._sealed = {}
        self._revealed = None

    def transcript(self) -> MatchTranscript:
        if self.phase is not MatchPhase.FINISHED:
            raise DomainError("match still in progress")
        return MatchTranscript(self.config, tuple(self.rounds), self.outcome, self.forfeited)


def run_match(config: MatchConfig, seat_a, seat_b, game: Game | None = None) -> MatchTranscript:
    """Referee a full match between two in-process seats.

    Seats expose ``act(position, chips) -> AgentAction`` (every agent
    does, as do scripted seats).  Both actions are gathered before either
    bid can influence anything the other seat sees.  A seat whose action
    the referee rejects forfeits on the spot — programmatic seats get no
    retries; human play (with retry) goes through the service instead.
    """
    if game is None:
        game = make_game(config.game)
    referee = MatchReferee(game, config)
    seats = {Player.ALICE: seat_a, Player.BOB: seat_b}
    while referee.phase is not MatchPhase.FINISHED:
        actions: dict[Player, AgentAction] = {}
        for player in Player:
            actions[player] = seats[player].act(referee.position, referee.chips)
        for player in Player:
            try:
                referee.submit_bid(player, actions[player].bid)
            except IllegalActionError:
                referee.forfeit(player)
                break
        if referee.phase is MatchPhase.AWAITING_MOVE:
            mover = referee.mover
            move = actions[mover].move_if_win
            if move is None:
                referee.forfeit(mover)
                continue
            try:
                referee.submit_move(mover, move)
            except IllegalActionError:
                referee.forfeit(mover)
    return referee.transcript()


# ---------------------------------------------------------------------------
# Scripted seats


@dataclass(frozen=True)
class ScriptRound:
    alice_bid: Bid
    bob_bid: Bid
    move: str


def parse_script(text: str) -> tuple[ScriptRound, ...]:
    """Parse a bid-script document: both bids plus the winner's move per round."""
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines or lines[0][1] != SCRIPT_HEADER:
        raise TranscriptError(f"missing {SCRIPT_HEADER!r} header")
    rounds = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 7 or parts[0] != "round" or parts[1] != "bidA" \
                or parts[3] != "bidB" or parts[5] != "move":
            raise TranscriptError(
                f"line {lineno}: expected 'round bidA <bid> bidB <bid> move <label>'"
            )
        try:
            rounds.append(ScriptRound(Bid.parse(parts[2]), Bid.parse(parts[4]), parts[6]))
        except ValueError as exc:
            raise TranscriptError(f"line {lineno}: {exc}") from None
    return tuple(rounds)


class ScriptedSeat:
    """Replays predetermined bids; commits the scripted move for its round."""

    def __init__(self, player: Player, rounds: tuple[ScriptRound, ...]):
        self.player = player
        self.rounds = rounds
        self._next = 0

    def act(self, position: str, chips: ChipState) -> AgentAction:
        if self._next >= len(self.rounds):
            raise DomainError(f"script exhausted after {len(self.rounds)} rounds")
        current = self.rounds[self._next]
        self._next += 1
        bid = current.alice_bid if self.player is Player.ALICE else current.bob_bid
        return AgentAction(bid, current.move)


def run_scripted_match(
    config: MatchConfig, script_text: str, game: Game | None = None
) -> MatchTranscript:
    """Replay a recorded match: both seats driven by one bid-script."""
    rounds = parse_script(script_text)
    return run_match(
        config, ScriptedSeat(Player.ALICE, rounds), ScriptedSeat(Player.BOB, rounds), game
    )


def build_seat(identifier: str, player: Player, game: Game, config: MatchConfig):
    """Resolve a seat identifier from a config into an acting object.

    Accepts any agent identifier plus ``script`` (caller must replay via
    ``run_scripted_match`` instead) and rejects ``external`` seats, which
    exist only behind the service.
    """
    if identifier in ("external", "script"):
        raise ValueError(f"seat {identifier!r} cannot act by itself in-process")
    seed = config.seed * 2 + (0 if player is Player.ALICE else 1)
    return make_agent(
        identifier,
        player,
        game,
        seed=seed,
        total_chips=config.total_chips,
        draw_policy=config.draw_policy,
    )


def run_configured_match(config: MatchConfig, game: Game | None = None) -> MatchTranscript:
    """Build both seats from the config's identifiers and run the match."""
    if game is None:
        game = make_game(config.game)
    seat_a = build_seat(config.seat_a, Player.ALICE, game, config)
    seat_b = build_seat(config.seat_b, Player.BOB, game, config)
    return run_match(config, seat_a, seat_b, game)


# ---------------------------------------------------------------------------
# Transcript serialization and verification


def serialize_transcript(transcript: MatchTranscript) -> str:
    """Render the line format; ``parse_transcript`` inverts it bit-exactly."""
    config = transcript.config
    lines = [
        TRANSCRIPT_HEADER,
        f"game {config.game}",
        f"seatA {config.seat_a}",
        f"seatB {config.seat_b}",
        f"seed {config.seed}",
        f"draw {config.draw_policy.value}",
        f"chips {config.initial_chips()}",
    ]
    for r in transcript.rounds:
        lines.append(
            f"round {r.index} bidA {r.alice_bid} bidB {r.bob_bid} "
            f"mover {r.mover.short} chips {r.chips_after} move {r.move}"
        )
    result = f"result {transcript.outcome.value.lower()}"
    if transcript.forfeited is not None:
        result += f" forfeit {transcript.forfeited.short}"
    lines.append(result)
    return "\n".join(lines) + "\n"


def _parse_field(lineno: int, line: str, key: str) -> str:
    parts = line.split(maxsplit=1)
    if len(parts) != 2 or parts[0] != key:
        raise TranscriptError(f"line {lineno}: expected '{key} <value>', got {line!r}")
    return parts[1]


def parse_transcript(text: str) -> MatchTranscript:
    """Parse the serialized line format.

    Structural errors raise :class:`TranscriptError`; semantic lies (wrong
    chips, illegal moves) parse fine and are left for ``verify_transcript``
    to expose.
    """
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines or lines[0][1] != TRANSCRIPT_HEADER:
        raise TranscriptError(f"missing {TRANSCRIPT_HEADER!r} header")
    if len(lines) < 7:
        raise TranscriptError("truncated transcript header")
    try:
        (n2, game_line), (n3, seat_a_line), (n4, seat_b_line) = lines[1:4]
        (n5, seed_line), (n6, draw_line), (n7, chips_line) = lines[4:7]
        initial = ChipState.parse(_parse_field(n7, chips_line, "chips"))
        config = MatchConfig(
            game=_parse_field(n2, game_line, "game"),
            alice_chips=initial.alice_chips,
            bob_chips=initial.bob_chips,
            star_holder=initial.star_holder,
            draw_policy=DrawPolicy.from_string(_parse_field(n6, draw_line, "draw")),
            seat_a=_parse_field(n3, seat_a_line, "seatA"),
            seat_b=_parse_field(n4, seat_b_line, "seatB"),
            seed=int(_parse_field(n5, seed_line, "seed")),
        )
    except ValueError as exc:
        raise TranscriptError(str(exc)) from None

    rounds = []
    outcome: Outcome | None = None
    forfeited: Player | None = None
    for lineno, line in lines[7:]:
        parts = line.split()
        if parts[0] == "round":
            if outcome is not None:
                raise TranscriptError(f"line {lineno}: round after result line")
            expected = ["round", None, "bidA", None, "bidB", None, "mover", None, "chips", None, "move", None]
            if len(parts) != 12 or any(
                want is not None and got != want for want, got in zip(expected, parts)
            ):
                raise TranscriptError(f"line {lineno}: malformed round line")
            try:
                rounds.append(
                    RoundRecord(
                        index=int(parts[1]),
                        alice_bid=Bid.parse(parts[3]),
                        bob_bid=Bid.parse(parts[5]),
                        mover=Player.from_short(parts[7]),
                        chips_after=ChipState.parse(parts[9]),
                        move=parts[11],
                    )
                )
            except ValueError as exc:
                raise TranscriptError(f"line {lineno}: {exc}") from None
        elif parts[0] == "result":
            if outcome is not None:
                raise TranscriptError(f"line {lineno}: duplicate result line")
            if len(parts) not in (2, 4) or (len(parts) == 4 and parts[2] != "forfeit"):
                raise TranscriptError(f"line {lineno}: malformed result line")
            try:
                outcome = Outcome(parts[1].upper())
                if len(parts) == 4:
                    forfeited = Player.from_short(parts[3])
            except ValueError as exc:
                raise TranscriptError(f"line {lineno}: {exc}") from None
            if outcome is Outcome.ONGOING:
                raise TranscriptError(f"line {lineno}: result cannot be ongoing")
        else:
            raise TranscriptError(f"line {lineno}: unknown directive {parts[0]!r}")
    if outcome is None:
        raise TranscriptError("transcript has no result line")
    return MatchTranscript(config, tuple(rounds), outcome, forfeited)


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of re-deriving a transcript; falsy message means clean."""

    ok: bool
    rounds_checked: int
    failure: str | None = None
    round_index: int | None = None

    def __str__(self) -> str:
        if self.ok:
            return f"transcript verified ({self.rounds_checked} rounds)"
        where = f" at round {self.round_index}" if self.round_index is not None else ""
        return f"transcript FAILED{where}: {self.failure}"


def verify_transcript(transcript: MatchTranscript, game: Game | None = None) -> VerifyReport:
    """Re-derive every round from the rules; report the first divergence.

    Checks bid legality, auction resolution, chip transfers (conservation
    and * uniqueness are structural in :class:`ChipState`), move legality,
    and that the recorded result matches the final position — or, for a
    forfeit, that the game had not already ended.
    """
    checked = 0

    def fail(index, message):
        return VerifyReport(False, checked, message, index)

    if game is None:
        try:
            game = make_game(transcript.config.game)
        except Exception as exc:  # unknown spec, unreadable file, bad document
            return fail(None, f"cannot rebuild game {transcript.config.game!r}: {exc}")
    position = game.initial()
    chips = transcript.config.initial_chips()
    for expected_index, r in enumerate(transcript.rounds, start=1):
        if r.index != expected_index:
            return fail(r.index, f"expected round {expected_index}, transcript says {r.index}")
        if game.outcome(position).is_terminal:
            return fail(r.index, "round recorded after the game already ended")
        try:
            validate_bid(chips, Player.ALICE, r.alice_bid)
            validate_bid(chips, Player.BOB, r.bob_bid)
        except IllegalActionError as exc:
            return fail(r.index, str(exc))
        mover, after = resolve_bids(chips, r.alice_bid, r.bob_bid)
        if mover is not r.mover:
            return fail(
                r.index,
                f"auction resolves to {mover.short}, transcript says {r.mover.short}",
            )
        if after != r.chips_after:
            return fail(r.index, f"chips should be {after}, transcript says {r.chips_after}")
        successors = dict(game.legal_moves(position, mover))
        if r.move not in successors:
            return fail(r.index, f"move {r.move!r} is not legal for {mover.short}")
        position = successors[r.move]
        chips = after
        checked += 1

    final = game.outcome(position)
    if transcript.forfeited is not None:
        if final.is_terminal:
            return fail(None, "forfeit recorded after the game already ended")
        expected = Outcome.win_for(transcript.forfeited.opponent)
        if transcript.outcome is not expected:
            return fail(
                None,
                f"forfeit by {transcript.forfeited.short} must score as {expected.value}",
            )
    else:
        if not final.is_terminal:
            return fail(None, "transcript ends before the game does")
        if final is not transcript.outcome:
            return fail(
                None,
                f"final position is {final.value}, transcript says {transcript.outcome.value}",
            )
    return VerifyReport(True, checked)
