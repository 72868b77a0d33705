"""Abstract game interface shared by every solver and the match referee.

A game is a finite, loop-free two-player structure.  There is no notion of
"whose turn it is": bidding decides who moves, so every position carries a
separate legal-move list for each player.  Positions are canonical strings
(identical positions encode identically) so they can key dictionaries and
cross process boundaries unchanged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from bidgame.errors import CycleError


class Player(enum.Enum):
    ALICE = "ALICE"
    BOB = "BOB"

    @property
    def opponent(self) -> "Player":
        return Player.BOB if self is Player.ALICE else Player.ALICE

    @property
    def short(self) -> str:
        return "A" if self is Player.ALICE else "B"

    @staticmethod
    def from_short(s: str) -> "Player":
        if s == "A":
            return Player.ALICE
        if s == "B":
            return Player.BOB
        raise ValueError(f"unknown player letter {s!r}")


class Outcome(enum.Enum):
    ALICE_WINS = "ALICE_WINS"
    BOB_WINS = "BOB_WINS"
    DRAW = "DRAW"
    ONGOING = "ONGOING"

    @property
    def is_terminal(self) -> bool:
        return self is not Outcome.ONGOING

    @staticmethod
    def win_for(player: Player) -> "Outcome":
        return Outcome.ALICE_WINS if player is Player.ALICE else Outcome.BOB_WINS


# A move is a (label, successor-position) pair.
Move = tuple[str, str]


class Game:
    """Base class for game rules.

    Subclasses provide ``game_id``, ``initial()``, ``legal_moves()`` and
    ``outcome()``.  Instances are immutable after construction and safe to
    share across threads.
    """

    game_id: str = "abstract"

    def initial(self) -> str:
        raise NotImplementedError

    def legal_moves(self, position: str, player: Player) -> list[Move]:
        """Complete, duplicate-free move list for ``player`` at ``position``.

        Empty iff the position is terminal or the player is stuck.
        """
        raise NotImplementedError

    def outcome(self, position: str) -> Outcome:
        raise NotImplementedError

    def is_terminal(self, position: str) -> bool:
        return self.outcome(position).is_terminal


@dataclass
class PositionGraph:
    """Reachable position graph of a game, in a solver-friendly shape.

    ``order`` is a topological order of the reachable positions (parents
    before children); iterating it in reverse visits every successor before
    the position itself.
    """

    initial: str
    order: list[str]
    alice_moves: dict[str, list[Move]] = field(repr=False)
    bob_moves: dict[str, list[Move]] = field(repr=False)
    outcomes: dict[str, Outcome] = field(repr=False)

    def __len__(self) -> int:
        return len(self.order)


def explore(game: Game) -> PositionGraph:
    """Enumerate every position reachable from the initial one.

    Expansion stops at terminal positions.  Raises :class:`CycleError` if the
    reachable graph is not acyclic, since backward induction would then be
    unfounded.
    """
    start = game.initial()
    alice_moves: dict[str, list[Move]] = {}
    bob_moves: dict[str, list[Move]] = {}
    outcomes: dict[str, Outcome] = {}
    successors: dict[str, set[str]] = {}
    indegree: dict[str, int] = {start: 0}

    frontier = [start]
    while frontier:
        pos = frontier.pop()
        if pos in outcomes:
            continue
        out = game.outcome(pos)
        outcomes[pos] = out
        if out.is_terminal:
            alice_moves[pos] = []
            bob_moves[pos] = []
            successors[pos] = set()
            continue
        a_moves = game.legal_moves(pos, Player.ALICE)
        b_moves = game.legal_moves(pos, Player.BOB)
        alice_moves[pos] = a_moves
        bob_moves[pos] = b_moves
        succ = {w for _, w in a_moves} | {w for _, w in b_moves}
        successors[pos] = succ
        for w in succ:
            indegree[w] = indegree.get(w, 0) + 1
            if w not in outcomes:
                frontier.append(w)

    # Kahn's algorithm; leftovers mean a cycle.
    order: list[str] = []
    ready = [p for p in outcomes if indegree.get(p, 0) == 0]
    degree = dict(indegree)
    while ready:
        pos = ready.pop()
        order.append(pos)
        for w in successors[pos]:
            degree[w] -= 1
            if degree[w] == 0:
                ready.append(w)
    if len(order) != len(outcomes):
        raise CycleError(f"game {game.game_id!r} has a cyclic position graph")

    return PositionGraph(
        initial=start,
        order=order,
        alice_moves=alice_moves,
        bob_moves=bob_moves,
        outcomes=outcomes,
    )
