"""Bidding combinatorial games: engines, exact solvers, agents and play server."""

from bidgame.games import Game, Hex, Outcome, Player, TicTacToe, make_game

__version__ = "0.1.0"

__all__ = ["Game", "Hex", "Outcome", "Player", "TicTacToe", "make_game", "__version__"]
