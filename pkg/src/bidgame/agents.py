"""Bot players.

Every agent exposes ``act(position, chips) -> AgentAction``: a sealed bid
plus the move it commits to making if that bid wins the auction.  Agents
never see the opponent's pending bid; all randomness comes from injected,
seeded generators, so a fixed seed reproduces a match exactly.

Available strengths:

* ``RichmanAgent`` — plays the continuous-solution line: optimal move by
  exact position value, bid the value gap as a rounded chip amount.
* ``DiscreteAgent`` — exact play for the integer-chip game from a solved
  winner table; never loses a theoretically won state.
* ``MonteCarloHexAgent`` — samples random completions of a Hex board and
  plays the most pivotal cell, bidding its pivotality.  No game tables, so
  it scales to boards the exact solvers cannot touch.
* ``RandomAgent`` — uniform baseline.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import ndimage

from bidgame.discrete import (
    Bid,
    ChipState,
    DiscreteState,
    DiscreteTable,
    DrawPolicy,
    discrete_optimal_actions,
)
from bidgame.errors import DomainError
from bidgame.games.base import Game, Player
from bidgame.games.hexgame import Hex, cell_label
from bidgame.richman import ValueTable, solve_richman

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class AgentAction:
    """A sealed round decision: the bid, and the move should the bid win.

    ``move_if_win`` is None only when the seat has no legal move; such an
    agent bids zero hoping to lose the auction, and forfeits if it wins.
    """

    bid: Bid
    move_if_win: str | None

    @staticmethod
    def concede() -> "AgentAction":
        return AgentAction(Bid(0, False), None)


def _round_bid(exact: Fraction, pile: int, holds_star: bool) -> Bid:
    """Round an exact chip amount to a playable bid.

    Nearest integer (halves up), clamped to the pile; the * rides along
    when the agent holds it and rounding lost part of the exact amount —
    the * wins ties, which is roughly the half chip that was dropped.
    """
    amount = int(exact + HALF)  # floor(x + 1/2): round half up, exact arithmetic
    amount = min(amount, pile)
    include_star = holds_star and amount < exact
    return Bid(amount, include_star)


class Agent:
    """Base class fixing the seat and the acting interface."""

    def __init__(self, player: Player):
        self.player = player

    def act(self, position: str, chips: ChipState) -> AgentAction:
        raise NotImplementedError


class RichmanAgent(Agent):
    """Optimal continuous-bidding play, rounded to whole chips."""

    def __init__(self, player: Player, table: ValueTable):
        super().__init__(player)
        self.table = table

    def act(self, position: str, chips: ChipState) -> AgentAction:
        entry = self.table.entry(position)
        if entry.terminal:
            raise DomainError(f"no action at terminal position {position!r}")
        moves = entry.alice_moves if self.player is Player.ALICE else entry.bob_moves
        if not moves:
            return AgentAction.concede()
        exact = abs(entry.bob_best - entry.alice_best) * HALF * chips.total
        bid = _round_bid(exact, chips.pile(self.player), chips.holds_star(self.player))
        return AgentAction(bid, min(moves))


class DiscreteAgent(Agent):
    """Exact integer-chip play from a solved winner table."""

    def __init__(self, player: Player, table: DiscreteTable, fallback_values: ValueTable | None = None):
        super().__init__(player)
        self.table = table
        if fallback_values is None:
            fallback_values = solve_richman(
                table.game, draw_value=table.draw_policy.draw_value, graph=table.graph
            )
        self.fallback_values = fallback_values

    def act(self, position: str, chips: ChipState) -> AgentAction:
        graph = self.table.graph
        moves = graph.alice_moves if self.player is Player.ALICE else graph.bob_moves
        if position in moves and not moves[position]:
            return AgentAction.concede()
        state = DiscreteState(position, chips)
        bid, move = discrete_optimal_actions(
            self.table, state, self.player, fallback_values=self.fallback_values
        )
        return AgentAction(bid, move)


@dataclass
class PivotalEstimate:
    """Monte Carlo summary of a Hex position under random completion.

    ``cell_pivotality`` maps each empty cell's label to the fraction of
    sampled completions in which flipping that one cell flips the winner;
    ``alice_win_estimate`` is the fraction of completions Alice won.
    """

    cell_pivotality: dict[str, float]
    samples: int
    alice_win_estimate: float


# Hexagonal adjacency as a 3x3 stencil: straight neighbours plus the
# up-right and down-left diagonals.
_HEX_STRUCTURE = np.array([[0, 1, 1], [1, 1, 1], [1, 1, 0]], dtype=bool)

_NEIGHBOR_SHIFTS = ((-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1))


def _shift2d(arr: np.ndarray, dr: int, dc: int) -> np.ndarray:
    """Shift a 2-D boolean array, filling vacated cells with False."""
    out = np.zeros_like(arr)
    rows, cols = arr.shape
    src_r = slice(max(0, -dr), rows - max(0, dr))
    dst_r = slice(max(0, dr), rows - max(0, -dr))
    src_c = slice(max(0, -dc), cols - max(0, dc))
    dst_c = slice(max(0, dc), cols - max(0, -dc))
    out[dst_r, dst_c] = arr[src_r, src_c]
    return out


def _label_flags(labels: np.ndarray, rows_mask: np.ndarray) -> np.ndarray:
    """Per-cell flag: this cell's component touches a flagged cell."""
    touched = np.zeros(labels.max() + 1, dtype=bool)
    touched[np.unique(labels[rows_mask])] = True
    touched[0] = False
    return touched[labels]


def estimate_pivotality(
    game: Hex, position: str, samples: int, rng: np.random.Generator
) -> PivotalEstimate:
    """Estimate per-cell pivotality by uniform random completions.

    All ``samples`` boards are labelled in one pass: samples are stacked
    vertically with a blank spacer row, so connected components never leak
    between them.  A cell is pivotal in a sample when it belongs to the
    winning side and handing it to the loser would give the loser a
    crossing through it — the loser's components adjacent to the cell
    (plus the cell itself) touch both of the loser's sides.
    """
    if samples <= 0:
        raise ValueError(f"sample count must be positive, got {samples}")
    board = game.decode(position)
    if game.outcome(position).is_terminal:
        raise DomainError(f"no completions to sample at terminal {position!r}")
    n = game.size
    grid = np.frombuffer(board.encode(), dtype="S1").reshape(n, n)
    alice_fixed, bob_fixed = grid == b"A", grid == b"B"
    empty = grid == b"."

    k = samples
    coin = rng.random((k, n, n)) < 0.5
    alice_own = alice_fixed | (empty & coin)

    period = n + 1  # board rows plus one spacer row
    block = np.zeros((k, period, n), dtype=bool)
    block[:, :n, :] = alice_own
    stacked_a = block.reshape(k * period, n)
    block = np.zeros((k, period, n), dtype=bool)
    block[:, :n, :] = ~alice_own
    block[:, n, :] = False
    stacked_b = block.reshape(k * period, n)

    labels_a, _ = ndimage.label(stacked_a, structure=_HEX_STRUCTURE)
    labels_b, _ = ndimage.label(stacked_b, structure=_HEX_STRUCTURE)

    row_in_sample = np.arange(k * period) % period
    top_rows = (row_in_sample == 0)[:, None] & np.ones(n, dtype=bool)
    bottom_rows = (row_in_sample == n - 1)[:, None] & np.ones(n, dtype=bool)
    left_col = np.zeros(n, dtype=bool)
    left_col[0] = True
    right_col = np.zeros(n, dtype=bool)
    right_col[n - 1] = True
    left_cols = np.ones((k * period, 1), dtype=bool) & left_col
    right_cols = np.ones((k * period, 1), dtype=bool) & right_col

    # Alice spans left-right; Bob spans top-bottom.
    spans_a = _label_flags(labels_a, left_cols) & _label_flags(labels_a, right_cols)
    alice_won = spans_a.reshape(k, period, n).any(axis=(1, 2))

    def near(flag: np.ndarray) -> np.ndarray:
        out = flag.copy()
        for dr, dc in _NEIGHBOR_SHIFTS:
            out |= _shift2d(flag, dr, dc)
        return out

    # Flip an Alice cell in an Alice-won sample: Bob wins iff his groups
    # around the cell reach both top and bottom (the cell may itself sit
    # on a border row).
    bob_top = near(_label_flags(labels_b, top_rows)) | top_rows
    bob_bottom = near(_label_flags(labels_b, bottom_rows)) | bottom_rows
    alice_left = near(_label_flags(labels_a, left_cols)) | left_cols
    alice_right = near(_label_flags(labels_a, right_cols)) | right_cols

    won_rows = np.repeat(alice_won, period)[:, None]
    pivotal = stacked_a & bob_top & bob_bottom & won_rows
    pivotal |= stacked_b & alice_left & alice_right & ~won_rows

    counts = pivotal.reshape(k, period, n)[:, :n, :].sum(axis=0)
    flat_empty = empty.reshape(-1)
    flat_counts = counts.reshape(-1)
    cell_pivotality = {
        cell_label(i, n): int(flat_counts[i]) / k for i in range(n * n) if flat_empty[i]
    }
    return PivotalEstimate(cell_pivotality, k, float(alice_won.mean()))


class MonteCarloHexAgent(Agent):
    """Plays the most pivotal cell of random completions, bids its pivotality."""

    def __init__(self, player: Player, game: Hex, samples: int, seed=0):
        if not isinstance(game, Hex):
            raise ValueError("the Monte Carlo agent only plays Hex")
        if samples <= 0:
            raise ValueError(f"sample count must be positive, got {samples}")
        super().__init__(player)
        self.game = game
        self.samples = samples
        self.rng = np.random.default_rng(seed)

    def act(self, position: str, chips: ChipState) -> AgentAction:
        estimate = estimate_pivotality(self.game, position, self.samples, self.rng)
        best = max(estimate.cell_pivotality.values())
        move = min(c for c, p in estimate.cell_pivotality.items() if p == best)
        # The pivotality of the played cell estimates the value swing of
        # moving versus being moved against, i.e. the bid-worthy gap.
        exact = Fraction(best).limit_denominator(2 * self.samples) * HALF * chips.total
        bid = _round_bid(exact, chips.pile(self.player), chips.holds_star(self.player))
        return AgentAction(bid, move)


class RandomAgent(Agent):
    """Uniform random legal play: baseline opponent."""

    def __init__(self, player: Player, game: Game, seed=0):
        super().__init__(player)
        self.game = game
        self.rng = random.Random(seed)

    def act(self, position: str, chips: ChipState) -> AgentAction:
        moves = self.game.legal_moves(position, self.player)
        if not moves:
            return AgentAction.concede()
        label, _ = self.rng.choice(moves)
        pile = chips.pile(self.player)
        amount = self.rng.randint(0, pile)
        include_star = chips.holds_star(self.player) and self.rng.random() < 0.5
        return AgentAction(Bid(amount, include_star), label)


AGENT_IDS = ("richman", "discrete", "mc-hex:<samples>", "random")


def make_agent(
    identifier: str,
    player: Player,
    game: Game,
    *,
    seed=0,
    total_chips: int | None = None,
    draw_policy: DrawPolicy = DrawPolicy.DRAW_IS_BOB_WIN,
    graph=None,
) -> Agent:
    """Build an agent from its identifier string.

    ``richman`` and ``discrete`` solve the game up front (``discrete``
    needs ``total_chips``); ``mc-hex:<samples>`` works only on Hex;
    ``random`` plays uniformly.  Draws are scored per ``draw_policy`` so
    table-backed agents optimize what the referee will award.
    """
    from bidgame.discrete import solve_discrete

    if identifier == "richman":
        table = solve_richman(game, draw_value=draw_policy.draw_value, graph=graph)
        return RichmanAgent(player, table)
    if identifier == "discrete":
        if total_chips is None:
            raise ValueError("the discrete agent needs the match chip total")
        table = solve_discrete(game, total_chips, draw_policy, graph=graph)
        return DiscreteAgent(player, table)
    if identifier.startswith("mc-hex:"):
        try:
            samples = int(identifier.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad sample count in {identifier!r}") from None
        if not isinstance(game, Hex):
            raise ValueError(f"{identifier!r} only plays Hex, not {game.game_id!r}")
        return MonteCarloHexAgent(player, game, samples, seed=seed)
    if identifier == "random":
        return RandomAgent(player, game, seed=seed)
    raise ValueError(f"unknown agent {identifier!r}; known: {', '.join(AGENT_IDS)}")
