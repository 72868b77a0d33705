"""Bidding Hex on an n-by-n rhombus.

Alice owns the left and right sides and wins by connecting them with her
stones; Bob owns top and bottom.  Cells are hexagonally adjacent: the two
straight neighbours on each axis plus the up-right and down-left diagonals.
A completely filled board always has exactly one winner, so Hex has no
draws.  Winner detection unions same-coloured adjacent cells with two
virtual border nodes per player.
"""

from __future__ import annotations

from bidgame.errors import EncodingError
from bidgame.games.base import Game, Move, Outcome, Player

MIN_SIZE = 2
MAX_SIZE = 11
MAX_EXACT_SIZE = 7

NEIGHBOR_DELTAS = ((-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1))

STONES = {Player.ALICE: "A", Player.BOB: "B"}


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


def cell_label(index: int, size: int) -> str:
    row, col = divmod(index, size)
    return f"{chr(ord('a') + col)}{row + 1}"


class Hex(Game):
    def __init__(self, size: int):
        if not MIN_SIZE <= size <= MAX_SIZE:
            raise ValueError(f"hex size must be in {MIN_SIZE}..{MAX_SIZE}, got {size}")
        self.size = size
        self.game_id = f"hex:{size}"
        self._prefix = f"hex{size}:"

    def initial(self) -> str:
        return self._prefix + "." * (self.size * self.size)

    def decode(self, position: str) -> str:
        if not position.startswith(self._prefix):
            raise EncodingError(f"not a {self.size}x{self.size} hex position: {position!r}")
        board = position[len(self._prefix):]
        if len(board) != self.size * self.size or any(c not in "AB." for c in board):
            raise EncodingError(f"malformed board: {position!r}")
        return board

    def neighbors(self, index: int) -> list[int]:
        n = self.size
        row, col = divmod(index, n)
        out = []
        for dr, dc in NEIGHBOR_DELTAS:
            r, c = row + dr, col + dc
            if 0 <= r < n and 0 <= c < n:
                out.append(r * n + c)
        return out

    def _connected(self, board: str, stone: str) -> bool:
        """Whether ``stone``'s two sides are linked through its cells."""
        n = self.size
        side_a, side_b = n * n, n * n + 1
        uf = UnionFind(n * n + 2)
        for i, c in enumerate(board):
            if c != stone:
                continue
            row, col = divmod(i, n)
            if stone == "A":
                if col == 0:
                    uf.union(side_a, i)
                if col == n - 1:
                    uf.union(side_b, i)
            else:
                if row == 0:
                    uf.union(side_a, i)
                if row == n - 1:
                    uf.union(side_b, i)
            for j in self.neighbors(i):
                if board[j] == stone:
                    uf.union(i, j)
        return uf.find(side_a) == uf.find(side_b)

    def outcome(self, position: str) -> Outcome:
        board = self.decode(position)
        if self._connected(board, "A"):
            return Outcome.ALICE_WINS
        if self._connected(board, "B"):
            return Outcome.BOB_WINS
        return Outcome.ONGOING

    def legal_moves(self, position: str, player: Player) -> list[Move]:
        board = self.decode(position)
        if self.outcome(position).is_terminal:
            return []
        stone = STONES[player]
        prefix = self._prefix
        moves = []
        for i, c in enumerate(board):
            if c == ".":
                moves.append(
                    (cell_label(i, self.size), prefix + board[:i] + stone + board[i + 1:])
                )
        return moves
