"""Generic finite loop-free games defined by an explicit node/edge document.

Document format (line oriented, UTF-8)::

    dag-game v1
    node <id> <alice_wins|bob_wins|draw|ongoing>
    edge <from> <alice|bob> <label> <to>

The first ``node`` line names the initial position.  Blank lines are
ignored; any other directive is rejected.  Validation refuses cycles,
dangling edge endpoints, terminal nodes with outgoing edges and (by
default) non-terminal nodes where some player has no move.
"""

from __future__ import annotations

import re

from bidgame.errors import CycleError, EncodingError, GameDefinitionError
from bidgame.games.base import Game, Move, Outcome, Player

HEADER = "dag-game v1"
PREFIX = "dag:"

_OUTCOMES = {
    "alice_wins": Outcome.ALICE_WINS,
    "bob_wins": Outcome.BOB_WINS,
    "draw": Outcome.DRAW,
    "ongoing": Outcome.ONGOING,
}
_PLAYERS = {"alice": Player.ALICE, "bob": Player.BOB}
_NAME_RE = re.compile(r"[A-Za-z0-9_.\-]+\Z")


class DagGame(Game):
    """A game given by explicit nodes, per-player edges and terminal labels."""

    def __init__(
        self,
        nodes: dict[str, Outcome],
        edges: dict[tuple[str, Player], list[Move]],
        initial: str,
        name: str = "dag",
        allow_stuck: bool = False,
    ):
        self.game_id = name if name.startswith("dag") else f"dag:{name}"
        self.nodes = dict(nodes)
        self.edges = {k: list(v) for k, v in edges.items()}
        self._initial = initial
        self.allow_stuck = allow_stuck
        self._validate()

    def _validate(self) -> None:
        if self._initial not in self.nodes:
            raise GameDefinitionError(f"initial node {self._initial!r} is not declared")
        for (src, player), moves in self.edges.items():
            if src not in self.nodes:
                raise GameDefinitionError(f"edge from unknown node {src!r}")
            if self.nodes[src].is_terminal and moves:
                raise GameDefinitionError(f"terminal node {src!r} has outgoing edges")
            seen_labels = set()
            for label, dst in moves:
                if dst not in self.nodes:
                    raise GameDefinitionError(f"edge {src!r} -> unknown node {dst!r}")
                if label in seen_labels:
                    raise GameDefinitionError(
                        f"duplicate {player.value.lower()} move label {label!r} at {src!r}"
                    )
                seen_labels.add(label)
        if not self.allow_stuck:
            for node, out in self.nodes.items():
                if out.is_terminal:
                    continue
                for player in Player:
                    if not self.edges.get((node, player)):
                        raise GameDefinitionError(
                            f"non-terminal node {node!r} leaves {player.value} stuck "
                            "(pass allow_stuck to permit)"
                        )
        self._check_acyclic()

    def _check_acyclic(self) -> None:
        # Depth-first search over declared nodes with an explicit stack.
        WHITE, GREY, BLACK = 0, 1, 2
        color = {n: WHITE for n in self.nodes}
        for root in self.nodes:
            if color[root] != WHITE:
                continue
            stack: list[tuple[str, int]] = [(root, 0)]
            color[root] = GREY
            while stack:
                node, i = stack.pop()
                succs = [w for p in Player for _, w in self.edges.get((node, p), [])]
                if i < len(succs):
                    stack.append((node, i + 1))
                    w = succs[i]
                    if color[w] == GREY:
                        raise GameDefinitionError(f"cycle through node {w!r}")
                    if color[w] == WHITE:
                        color[w] = GREY
                        stack.append((w, 0))
                else:
                    color[node] = BLACK

    def initial(self) -> str:
        return PREFIX + self._initial

    def decode(self, position: str) -> str:
        if not position.startswith(PREFIX):
            raise EncodingError(f"not a dag-game position: {position!r}")
        node = position[len(PREFIX):]
        if node not in self.nodes:
            raise EncodingError(f"unknown node {node!r}")
        return node

    def outcome(self, position: str) -> Outcome:
        return self.nodes[self.decode(position)]

    def legal_moves(self, position: str, player: Player) -> list[Move]:
        node = self.decode(position)
        return [(label, PREFIX + dst) for label, dst in self.edges.get((node, player), [])]


def load_dag_game(text: str, name: str = "dag", allow_stuck: bool = False) -> DagGame:
    """Parse a game-definition document into a :class:`DagGame`."""
    lines = text.splitlines()
    stripped = [ln.strip() for ln in lines]
    body = [(i + 1, ln) for i, ln in enumerate(stripped) if ln]
    if not body or body[0][1] != HEADER:
        raise GameDefinitionError(f"missing {HEADER!r} header")

    nodes: dict[str, Outcome] = {}
    edges: dict[tuple[str, Player], list[Move]] = {}
    initial: str | None = None
    for lineno, line in body[1:]:
        parts = line.split()
        if parts[0] == "node":
            if len(parts) != 3:
                raise GameDefinitionError(f"line {lineno}: node takes <id> <outcome>")
            node_id, outcome_word = parts[1], parts[2]
            if not _NAME_RE.match(node_id):
                raise GameDefinitionError(f"line {lineno}: bad node id {node_id!r}")
            if outcome_word not in _OUTCOMES:
                raise GameDefinitionError(f"line {lineno}: unknown outcome {outcome_word!r}")
            if node_id in nodes:
                raise GameDefinitionError(f"line {lineno}: duplicate node {node_id!r}")
            nodes[node_id] = _OUTCOMES[outcome_word]
            if initial is None:
                initial = node_id
        elif parts[0] == "edge":
            if len(parts) != 5:
                raise GameDefinitionError(
                    f"line {lineno}: edge takes <from> <player> <label> <to>"
                )
            src, player_word, label, dst = parts[1:]
            if player_word not in _PLAYERS:
                raise GameDefinitionError(f"line {lineno}: unknown player {player_word!r}")
            if not _NAME_RE.match(label):
                raise GameDefinitionError(f"line {lineno}: bad move label {label!r}")
            edges.setdefault((src, _PLAYERS[player_word]), []).append((label, dst))
        else:
            raise GameDefinitionError(f"line {lineno}: unknown directive {parts[0]!r}")
    if initial is None:
        raise GameDefinitionError("document declares no nodes")
    return DagGame(nodes, edges, initial, name=name, allow_stuck=allow_stuck)


def diamond() -> DagGame:
    """Root where Alice can reach her winning leaf and Bob can reach his."""
    return DagGame(
        nodes={"root": Outcome.ONGOING, "aw": Outcome.ALICE_WINS, "bw": Outcome.BOB_WINS},
        edges={
            ("root", Player.ALICE): [("aw", "aw")],
            ("root", Player.BOB): [("bw", "bw")],
        },
        initial="root",
        name="dag:diamond",
    )


def chain(winner: Player) -> DagGame:
    """Single forced move into a win for ``winner``, whoever moves."""
    leaf = Outcome.win_for(winner)
    return DagGame(
        nodes={"v0": Outcome.ONGOING, "end": leaf},
        edges={
            ("v0", Player.ALICE): [("advance", "end")],
            ("v0", Player.BOB): [("advance", "end")],
        },
        initial="v0",
        name=f"dag:chain-{winner.value.lower()}",
    )
