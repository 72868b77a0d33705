"""Bidding Tic-Tac-Toe.

Alice plays X, Bob plays O.  A move places the mover's own mark in any empty
cell; because bidding allows one player to move several times in a row, any
mix of mark counts can occur.  Boards where both players have completed a
line can never arise (play stops at the first terminal position) and are
rejected as malformed.
"""

from __future__ import annotations

from bidgame.errors import EncodingError
from bidgame.games.base import Game, Move, Outcome, Player

SIZE = 3
PREFIX = "ttt:"

LINES = (
    (0, 1, 2),
    (3, 4, 5),
    (6, 7, 8),
    (0, 3, 6),
    (1, 4, 7),
    (2, 5, 8),
    (0, 4, 8),
    (2, 4, 6),
)

MARKS = {Player.ALICE: "X", Player.BOB: "O"}


def cell_label(index: int) -> str:
    row, col = divmod(index, SIZE)
    return f"{chr(ord('a') + col)}{row + 1}"


def label_index(label: str) -> int:
    col = ord(label[0]) - ord("a")
    row = int(label[1:]) - 1
    return row * SIZE + col


class TicTacToe(Game):
    game_id = "ttt"

    def initial(self) -> str:
        return PREFIX + "." * 9

    def decode(self, position: str) -> str:
        """Return the 9-character board, validating the encoding."""
        if not position.startswith(PREFIX):
            raise EncodingError(f"not a tic-tac-toe position: {position!r}")
        board = position[len(PREFIX):]
        if len(board) != 9 or any(c not in "XO." for c in board):
            raise EncodingError(f"malformed board: {position!r}")
        if self._has_line(board, "X") and self._has_line(board, "O"):
            raise EncodingError(f"board with two winners is unreachable: {position!r}")
        return board

    @staticmethod
    def _has_line(board: str, mark: str) -> bool:
        return any(all(board[i] == mark for i in line) for line in LINES)

    def outcome(self, position: str) -> Outcome:
        board = self.decode(position)
        if self._has_line(board, "X"):
            return Outcome.ALICE_WINS
        if self._has_line(board, "O"):
            return Outcome.BOB_WINS
        if "." not in board:
            return Outcome.DRAW
        return Outcome.ONGOING

    def legal_moves(self, position: str, player: Player) -> list[Move]:
        board = self.decode(position)
        if self.outcome(position).is_terminal:
            return []
        mark = MARKS[player]
        moves = []
        for i, c in enumerate(board):
            if c == ".":
                moves.append((cell_label(i), PREFIX + board[:i] + mark + board[i + 1:]))
        return moves


def alternating_positions() -> set[str]:
    """Positions reachable when marks must alternate with X first.

    This is the classic alternating-play state space (5478 boards for the
    3x3 game); the bidding game reaches strictly more positions.  Kept as a
    cross-check for the enumeration machinery.
    """
    game = TicTacToe()
    seen: set[str] = set()
    frontier = [game.initial()]
    while frontier:
        pos = frontier.pop()
        if pos in seen:
            continue
        seen.add(pos)
        if game.outcome(pos).is_terminal:
            continue
        board = pos[len(PREFIX):]
        mover = Player.ALICE if board.count("X") == board.count("O") else Player.BOB
        for _, succ in game.legal_moves(pos, mover):
            frontier.append(succ)
    return seen
