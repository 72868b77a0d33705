"""Game registry: build rules objects from compact game spec strings."""

from __future__ import annotations

from pathlib import Path

from bidgame.games.base import Game, Move, Outcome, Player, PositionGraph, explore
from bidgame.games.dag import DagGame, chain, diamond, load_dag_game
from bidgame.games.hexgame import Hex
from bidgame.games.tictactoe import TicTacToe

__all__ = [
    "Game",
    "Move",
    "Outcome",
    "Player",
    "PositionGraph",
    "explore",
    "DagGame",
    "chain",
    "diamond",
    "load_dag_game",
    "Hex",
    "TicTacToe",
    "make_game",
    "known_game_specs",
]


def make_game(spec: str, allow_paths: bool = True) -> Game:
    """Build a game from a spec string.

    Accepted forms: ``ttt``, ``hex:<n>``, ``dag:@<fixture>`` and (when
    ``allow_paths``) ``dag:<path>``.  The path form is for local tooling;
    network-facing callers pass ``allow_paths=False``.
    """
    if spec == "ttt":
        return TicTacToe()
    if spec.startswith("hex:"):
        try:
            size = int(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad hex size in {spec!r}") from None
        return Hex(size)
    if spec.startswith("dag:@"):
        from bidgame import fixtures

        return fixtures.load_fixture(spec[len("dag:@"):])
    if spec.startswith("dag:"):
        if not allow_paths:
            raise ValueError(f"file-backed games are not allowed here: {spec!r}")
        path = Path(spec[len("dag:"):])
        return load_dag_game(path.read_text(), name=f"dag:{path.stem}")
    raise ValueError(f"unknown game spec {spec!r}")


def known_game_specs() -> list[str]:
    """Specs the play service offers (no arbitrary file paths)."""
    from bidgame import fixtures

    specs = ["ttt"]
    specs += [f"hex:{n}" for n in range(2, 12)]
    specs += [f"dag:@{name}" for name in fixtures.fixture_names()]
    return specs
