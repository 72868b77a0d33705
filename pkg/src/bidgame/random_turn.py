"""Random-turn solving and the bidding/random-turn equivalence check.

In random-turn play a fair coin picks the mover each round.  Alice's
optimal win probability satisfies the mirrored recursion of the bidding
value (her half maximises, Bob's half minimises), so the two must agree as
value = 1 - probability with identical optimal-move sets.  This module
computes the probabilities on its own code path -- no memo or recursion is
shared with the bidding solver -- so the equivalence report is a genuine
cross-check of both implementations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from bidgame.errors import DomainError
from bidgame.games.base import Game, Outcome, PositionGraph, explore
from bidgame.richman import HALF, ONE, ZERO, solve_richman


@dataclass(frozen=True)
class PositionProbability:
    """Alice's optimal win probability and both optimal-move label sets."""

    win_probability: Fraction
    alice_moves: frozenset[str]
    bob_moves: frozenset[str]
    terminal: bool


class ProbabilityTable:
    def __init__(self, game: Game, draw_weight: Fraction, entries: dict[str, PositionProbability]):
        self.game = game
        self.draw_weight = draw_weight
        self.entries = entries

    def __contains__(self, position: str) -> bool:
        return position in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, position: str) -> PositionProbability:
        try:
            return self.entries[position]
        except KeyError:
            raise DomainError(f"position not in probability table: {position!r}") from None

    def win_probability(self, position: str) -> Fraction:
        return self.entry(position).win_probability

    def positions(self) -> list[str]:
        return list(self.entries)


def solve_random_turn(
    game: Game,
    draw_weight=HALF,
    graph: PositionGraph | None = None,
) -> ProbabilityTable:
    """Optimal-play win probabilities for Alice under fair-coin turn order.

    Terminal draws count as ``draw_weight`` of a win (default one half).  A
    player picked by the coin with no legal move loses on the spot.
    """
    dw = Fraction(draw_weight)
    if not ZERO <= dw <= ONE:
        raise ValueError(f"draw weight must lie in [0,1], got {dw}")
    if graph is None:
        graph = explore(game)

    entries: dict[str, PositionProbability] = {}
    empty: frozenset[str] = frozenset()
    for pos in reversed(graph.order):
        out = graph.outcomes[pos]
        if out is not Outcome.ONGOING:
            p = {Outcome.ALICE_WINS: ONE, Outcome.BOB_WINS: ZERO, Outcome.DRAW: dw}[out]
            entries[pos] = PositionProbability(p, empty, empty, True)
            continue
        a_moves = graph.alice_moves[pos]
        b_moves = graph.bob_moves[pos]
        if a_moves:
            a_val = max(entries[w].win_probability for _, w in a_moves)
            a_opt = frozenset(l for l, w in a_moves if entries[w].win_probability == a_val)
        else:
            a_val, a_opt = ZERO, empty
        if b_moves:
            b_val = min(entries[w].win_probability for _, w in b_moves)
            b_opt = frozenset(l for l, w in b_moves if entries[w].win_probability == b_val)
        else:
            b_val, b_opt = ONE, empty
        entries[pos] = PositionProbability((a_val + b_val) * HALF, a_opt, b_opt, False)
    return ProbabilityTable(game, dw, entries)


@dataclass
class TheoremReport:
    """Outcome of the position-by-position equivalence verification."""

    game_id: str
    draw_value: Fraction
    positions_checked: int
    value_mismatches: list[tuple[str, Fraction, Fraction]] = field(default_factory=list)
    move_set_mismatches: list[tuple[str, str, frozenset, frozenset]] = field(default_factory=list)
    coverage_mismatch: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.value_mismatches or self.move_set_mismatches or self.coverage_mismatch)

    def summary(self, verbose: bool = False) -> str:
        lines = [
            f"game {self.game_id}: checked {self.positions_checked} positions "
            f"(draw value {self.draw_value})",
            f"value identity (bid value = 1 - win probability): "
            f"{len(self.value_mismatches)} mismatches",
            f"optimal move sets: {len(self.move_set_mismatches)} mismatches",
        ]
        if self.coverage_mismatch:
            lines.append(f"tables cover different positions: {len(self.coverage_mismatch)}")
        lines.append("verdict: " + ("PASS" if self.ok else "FAIL"))
        if verbose:
            for pos, value, complement in self.value_mismatches:
                lines.append(f"  value {pos}: {value} != 1 - P = {complement}")
            for pos, side, r_set, p_set in self.move_set_mismatches:
                lines.append(f"  moves {pos} [{side}]: bidding {sorted(r_set)} vs "
                             f"random-turn {sorted(p_set)}")
            for pos in self.coverage_mismatch:
                lines.append(f"  only one table covers {pos}")
        return "\n".join(lines)


def verify_richman_theorem(game: Game, draw_value=HALF) -> TheoremReport:
    """Solve both ways and report every disagreement (an empty report passes).

    Draws are scored consistently on the two sides: a draw worth ``d`` to
    the bidding value is worth ``1 - d`` as a win probability.
    """
    dv = Fraction(draw_value)
    values = solve_richman(game, dv)
    probabilities = solve_random_turn(game, ONE - dv)

    report = TheoremReport(game.game_id, dv, positions_checked=len(values))
    r_keys = set(values.entries)
    p_keys = set(probabilities.entries)
    report.coverage_mismatch = sorted(r_keys ^ p_keys)
    for pos in r_keys & p_keys:
        value_entry = values.entries[pos]
        prob_entry = probabilities.entries[pos]
        complement = ONE - prob_entry.win_probability
        if value_entry.value != complement:
            report.value_mismatches.append((pos, value_entry.value, complement))
        if value_entry.alice_moves != prob_entry.alice_moves:
            report.move_set_mismatches.append(
                (pos, "alice", value_entry.alice_moves, prob_entry.alice_moves)
            )
        if value_entry.bob_moves != prob_entry.bob_moves:
            report.move_set_mismatches.append(
                (pos, "bob", value_entry.bob_moves, prob_entry.bob_moves)
            )
    return report
