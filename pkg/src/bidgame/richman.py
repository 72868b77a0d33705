"""Exact continuous-bidding values by backward induction.

For every reachable position the solver records the critical chip fraction
(the Richman value): Alice wins with a larger share of the chips and loses
with a smaller one, under real-valued bidding.  Terminal positions anchor
the recursion at 0 (Alice's win), 1 (Bob's win) or a configurable draw
value; each interior position averages the best successor value of each
player.  All arithmetic is exact rational: in draw-free loop-free games the
values are dyadic and theorem checks demand exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from bidgame.errors import DomainError
from bidgame.games.base import Game, Outcome, Player, PositionGraph, explore

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PositionValue:
    """Solved data for one position.

    ``alice_best`` is the minimum successor value over Alice's moves and
    ``bob_best`` the maximum over Bob's; a stuck player is scored as an
    immediate loss.  Terminal positions carry their own value in all three
    slots and empty optimal-move sets.
    """

    value: Fraction
    bob_best: Fraction
    alice_best: Fraction
    alice_moves: frozenset[str]
    bob_moves: frozenset[str]
    terminal: bool


class ValueTable:
    """Richman values for every position reachable in one game."""

    def __init__(self, game: Game, draw_value: Fraction, entries: dict[str, PositionValue]):
        self.game = game
        self.draw_value = draw_value
        self.entries = entries

    def __contains__(self, position: str) -> bool:
        return position in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, position: str) -> PositionValue:
        try:
            return self.entries[position]
        except KeyError:
            raise DomainError(f"position not in value table: {position!r}") from None

    def value(self, position: str) -> Fraction:
        return self.entry(position).value

    def positions(self) -> list[str]:
        return list(self.entries)

    def export_lines(self) -> list[str]:
        return [
            f"value {pos} {format_fraction(e.value)} "
            f"{format_fraction(e.bob_best)} {format_fraction(e.alice_best)}"
            for pos, e in sorted(self.entries.items())
        ]


def format_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def parse_value_lines(text: str) -> dict[str, tuple[Fraction, Fraction, Fraction]]:
    """Parse exported value lines back to (value, bob_best, alice_best)."""
    table = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        kind, pos, v, hi, lo = line.split()
        if kind != "value":
            raise ValueError(f"unexpected line type {kind!r}")
        table[pos] = (Fraction(v), Fraction(hi), Fraction(lo))
    return table


def _as_draw_value(draw_value) -> Fraction:
    dv = Fraction(draw_value)
    if not ZERO <= dv <= ONE:
        raise ValueError(f"draw value must lie in [0,1], got {dv}")
    return dv


def solve_richman(
    game: Game,
    draw_value=HALF,
    graph: PositionGraph | None = None,
) -> ValueTable:
    """Backward-induct exact bidding values over the reachable graph.

    Evaluation runs in reverse topological order with an explicit table, so
    arbitrarily deep games cannot overflow the call stack.  Refuses cyclic
    games (``CycleError`` from the graph exploration).
    """
    dv = _as_draw_value(draw_value)
    if graph is None:
        graph = explore(game)

    entries: dict[str, PositionValue] = {}
    empty: frozenset[str] = frozenset()
    for pos in reversed(graph.order):
        out = graph.outcomes[pos]
        if out is not Outcome.ONGOING:
            value = {Outcome.ALICE_WINS: ZERO, Outcome.BOB_WINS: ONE, Outcome.DRAW: dv}[out]
            entries[pos] = PositionValue(value, value, value, empty, empty, True)
            continue
        a_moves = graph.alice_moves[pos]
        b_moves = graph.bob_moves[pos]
        if a_moves:
            alice_best = min(entries[w].value for _, w in a_moves)
            alice_opt = frozenset(l for l, w in a_moves if entries[w].value == alice_best)
        else:
            alice_best, alice_opt = ONE, empty  # stuck mover loses
        if b_moves:
            bob_best = max(entries[w].value for _, w in b_moves)
            bob_opt = frozenset(l for l, w in b_moves if entries[w].value == bob_best)
        else:
            bob_best, bob_opt = ZERO, empty
        value = (bob_best + alice_best) * HALF
        entries[pos] = PositionValue(value, bob_best, alice_best, alice_opt, bob_opt, False)
    return ValueTable(game, dv, entries)


def optimal_bid(table: ValueTable, position: str) -> Fraction:
    """Optimal bid at ``position`` as an exact fraction of the chip pool."""
    entry = table.entry(position)
    if entry.terminal:
        raise DomainError(f"terminal position has no bid: {position!r}")
    return abs(entry.bob_best - entry.alice_best) * HALF


def richman_winner(table: ValueTable, position: str, alice_fraction) -> Player | None:
    """Predicted winner when Alice holds ``alice_fraction`` of the chips.

    Returns ``None`` on the knife edge: theory fixes the winner only
    strictly above or below the critical fraction.
    """
    share = Fraction(alice_fraction)
    if not ZERO <= share <= ONE:
        raise ValueError(f"chip fraction must lie in [0,1], got {share}")
    value = table.value(position)
    if share > value:
        return Player.ALICE
    if share < value:
        return Player.BOB
    return None
