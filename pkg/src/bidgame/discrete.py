"""Integer-chip bidding with the * tiebreaker, solved exactly.

The playable rules: both players hold whole chips, one of them additionally
holds the * chip.  Sealed bids are compared by amount; a tied auction goes
to whoever included * in their bid, and if * was withheld, to the player
who does NOT hold it.  The auction winner pays their bid amount to the
loser and moves; * travels with a bid that included it and never moves
otherwise.

``solve_discrete`` labels every (position, chip split, * holder) state with
its winner: Alice wins exactly when she has a safe bid, one for which every
legal reply by Bob leads to a continuation she still wins, with each
auction winner moving to their best successor.  The solver works backward
through the position graph, keeping per-position bitmasks (one bit per
Alice pile size, one mask per * holder), which turns the safe-bid
existence test for a whole pile column into a handful of integer
operations:

With Alice holding ``a`` of ``n`` chips, her bid ``x`` beats Bob's ``y``
when ``x > y``, plus ties by the * rule; her continuation after winning
sits at bit ``a - x`` of the OR of her successors' masks, while every Bob
reply ``y`` she fails to beat needs bit ``a + y`` of the AND of his
successors' masks.  The Bob replies form a suffix of the pile axis, so
"all replies covered" collapses to "mask is all-ones from some index up",
precomputed per mask.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction

from bidgame.errors import DomainError, IllegalActionError
from bidgame.games.base import Game, Outcome, Player, PositionGraph, explore


@dataclass(frozen=True)
class ChipState:
    """One side of the table's view of the chips: two piles and the * holder."""

    alice_chips: int
    bob_chips: int
    star_holder: Player

    def __post_init__(self):
        if self.alice_chips < 0 or self.bob_chips < 0:
            raise ValueError(f"negative chip pile in {self}")

    @property
    def total(self) -> int:
        return self.alice_chips + self.bob_chips

    def pile(self, player: Player) -> int:
        return self.alice_chips if player is Player.ALICE else self.bob_chips

    def holds_star(self, player: Player) -> bool:
        return self.star_holder is player

    def __str__(self) -> str:
        a_star = "*" if self.star_holder is Player.ALICE else ""
        b_star = "*" if self.star_holder is Player.BOB else ""
        return f"{self.alice_chips}{a_star}/{self.bob_chips}{b_star}"

    @classmethod
    def parse(cls, text: str) -> "ChipState":
        """Inverse of ``str``: ``"113*/87"`` → piles 113/87, * with Alice."""
        match = re.fullmatch(r"(\d+)(\*?)/(\d+)(\*?)", text)
        if match is None or match.group(2) == match.group(4):
            raise ValueError(f"bad chip state {text!r}; expected e.g. 113*/87")
        holder = Player.ALICE if match.group(2) else Player.BOB
        return cls(int(match.group(1)), int(match.group(3)), holder)


@dataclass(frozen=True)
class Bid:
    """A sealed bid: a chip amount, optionally sweetened with *."""

    amount: int
    include_star: bool = False

    def __str__(self) -> str:
        return f"{self.amount}{'*' if self.include_star else ''}"

    @classmethod
    def parse(cls, text: str) -> "Bid":
        """Inverse of ``str``: ``"11*"`` → amount 11 with the * included."""
        match = re.fullmatch(r"(\d+)(\*?)", text)
        if match is None:
            raise ValueError(f"bad bid {text!r}; expected e.g. 11 or 11*")
        return cls(int(match.group(1)), bool(match.group(2)))


@dataclass(frozen=True)
class DiscreteState:
    position: str
    chips: ChipState


def validate_bid(chips: ChipState, player: Player, bid: Bid) -> None:
    if bid.amount < 0:
        raise IllegalActionError(f"negative bid {bid} by {player.value}")
    if bid.amount > chips.pile(player):
        raise IllegalActionError(
            f"{player.value} bid {bid} exceeds pile of {chips.pile(player)}"
        )
    if bid.include_star and not chips.holds_star(player):
        raise IllegalActionError(f"{player.value} bid * without holding it")


def resolve_bids(chips: ChipState, alice_bid: Bid, bob_bid: Bid) -> tuple[Player, ChipState]:
    """Decide the auction and transfer chips.

    Higher amount wins.  On equal amounts the bid that includes * wins; if
    * was withheld, its holder loses the tie.  The winner gives the bid
    amount to the loser; * changes hands exactly when the winning bid
    included it.
    """
    validate_bid(chips, Player.ALICE, alice_bid)
    validate_bid(chips, Player.BOB, bob_bid)

    if alice_bid.amount != bob_bid.amount:
        mover = Player.ALICE if alice_bid.amount > bob_bid.amount else Player.BOB
    elif alice_bid.include_star:
        mover = Player.ALICE
    elif bob_bid.include_star:
        mover = Player.BOB
    else:
        mover = chips.star_holder.opponent

    winning_bid = alice_bid if mover is Player.ALICE else bob_bid
    if mover is Player.ALICE:
        alice = chips.alice_chips - winning_bid.amount
        bob = chips.bob_chips + winning_bid.amount
    else:
        alice = chips.alice_chips + winning_bid.amount
        bob = chips.bob_chips - winning_bid.amount
    star = chips.star_holder.opponent if winning_bid.include_star else chips.star_holder
    return mover, ChipState(alice, bob, star)


class DrawPolicy(enum.Enum):
    """Who takes a drawn terminal when play is win-or-lose chips."""

    DRAW_IS_BOB_WIN = "draw_is_bob_win"
    DRAW_IS_ALICE_WIN = "draw_is_alice_win"

    @staticmethod
    def from_string(s: str) -> "DrawPolicy":
        for policy in DrawPolicy:
            if policy.value == s:
                return policy
        raise ValueError(f"unknown draw policy {s!r}")

    @property
    def draw_winner(self) -> Player:
        return Player.BOB if self is DrawPolicy.DRAW_IS_BOB_WIN else Player.ALICE

    @property
    def draw_value(self) -> Fraction:
        """The matching terminal value for the continuous solver."""
        return Fraction(1) if self is DrawPolicy.DRAW_IS_BOB_WIN else Fraction(0)


# Index helpers for the per-position mask pair: [star with Alice, star with Bob].
_STAR_A, _STAR_B = 0, 1


def _suffix_all_from(mask: int, width: int) -> int:
    """Least index i such that bits i..width-1 of ``mask`` are all set.

    Ranges from 0 (mask is all ones) to ``width`` (top bit clear); queries
    with an index >= the returned value denote an all-ones (or empty) span.
    """
    gaps = ~mask & ((1 << width) - 1)
    return gaps.bit_length()


class DiscreteTable:
    """Winner of every (position, Alice pile, * holder) state of one game.

    Alice-winning piles are stored as bitmasks; winners and certifying safe
    bids are read back on demand.
    """

    def __init__(
        self,
        game: Game,
        total_chips: int,
        draw_policy: DrawPolicy,
        graph: PositionGraph,
        masks: dict[str, list[int]],
    ):
        self.game = game
        self.total_chips = total_chips
        self.draw_policy = draw_policy
        self.graph = graph
        self._masks = masks
        self._width = total_chips + 1

    def positions(self) -> list[str]:
        return list(self.graph.order)

    def _state_bit(self, position: str, alice_chips: int, star_holder: Player) -> bool:
        if not 0 <= alice_chips <= self.total_chips:
            raise DomainError(
                f"alice pile {alice_chips} outside 0..{self.total_chips}"
            )
        try:
            masks = self._masks[position]
        except KeyError:
            raise DomainError(f"position not in discrete table: {position!r}") from None
        star = _STAR_A if star_holder is Player.ALICE else _STAR_B
        return bool(masks[star] >> alice_chips & 1)

    def winner(self, position: str, alice_chips: int, star_holder: Player) -> Player:
        if self._state_bit(position, alice_chips, star_holder):
            return Player.ALICE
        return Player.BOB

    def winner_of(self, state: DiscreteState) -> Player:
        if state.chips.total != self.total_chips:
            raise DomainError(
                f"chip total {state.chips.total} does not match table total {self.total_chips}"
            )
        return self.winner(state.position, state.chips.alice_chips, state.chips.star_holder)

    def _continuations(self, position: str) -> tuple[list[int], list[int]]:
        """(OR of Alice-successor masks, AND of Bob-successor masks) by * index.

        A stuck auction winner loses: no Alice move means she can reach no
        winning continuation (OR over nothing = 0), no Bob move means every
        continuation is fine for Alice (AND over nothing = all ones).
        """
        full = (1 << self._width) - 1
        cont_a, cont_b = [0, 0], [full, full]
        for _, succ in self.graph.alice_moves[position]:
            cont_a[_STAR_A] |= self._masks[succ][_STAR_A]
            cont_a[_STAR_B] |= self._masks[succ][_STAR_B]
        for _, succ in self.graph.bob_moves[position]:
            cont_b[_STAR_A] &= self._masks[succ][_STAR_A]
            cont_b[_STAR_B] &= self._masks[succ][_STAR_B]
        return cont_a, cont_b

    def alice_safe_bid(self, position: str, alice_chips: int, star_holder: Player) -> Bid | None:
        """Smallest certifying safe bid for Alice, or None if she is losing.

        Plain amounts are scanned upward before *-sweetened ones, so the
        certificate conserves the * whenever a chips-only bid suffices.
        """
        if not self._state_bit(position, alice_chips, star_holder):
            return None
        if self.graph.outcomes[position].is_terminal:
            return None
        a = alice_chips
        cont_a, cont_b = self._continuations(position)
        for x in range(a + 1):
            if star_holder is Player.ALICE:
                # Withholding *: Bob takes every tie, so replies y >= x all
                # go to him; * stays with Alice either way.  A plain 0 bid
                # never wins any auction, so only Bob's side must hold up.
                own_ok = x == 0 or cont_a[_STAR_A] >> (a - x) & 1
                if own_ok and self._covers(cont_b[_STAR_A], a + x):
                    return Bid(x, False)
            else:
                # Bob holds *.  Alice takes starless ties; Bob beats her
                # with y > x (either way) or a tie that spends * (then *
                # arrives at Alice's side).
                if (
                    (cont_a[_STAR_B] >> (a - x) & 1)
                    and self._covers(cont_b[_STAR_B], a + x + 1)
                    and self._covers(cont_b[_STAR_A], a + x)
                ):
                    return Bid(x, False)
        if star_holder is Player.ALICE:
            for x in range(a + 1):
                # Spending *: Alice takes the tie but * moves to Bob.
                if (cont_a[_STAR_B] >> (a - x) & 1) and self._covers(cont_b[_STAR_A], a + x + 1):
                    return Bid(x, True)
        raise AssertionError(f"winner mask and certificate scan disagree at {position!r}")

    def bob_safe_bid(self, position: str, alice_chips: int, star_holder: Player) -> Bid | None:
        """Smallest certifying safe bid for Bob, or None if he is losing."""
        if self._state_bit(position, alice_chips, star_holder):
            return None
        if self.graph.outcomes[position].is_terminal:
            return None
        a = alice_chips
        cont_a, cont_b = self._continuations(position)
        for y in range(self.total_chips - a + 1):
            if star_holder is Player.BOB:
                # Withholding *: Alice takes the tie, so x >= y beat Bob; a
                # plain 0 bid never wins an auction for him.
                own_ok = y == 0 or not (cont_b[_STAR_B] >> (a + y) & 1)
                if own_ok and self._clear_below(cont_a[_STAR_B], a - y):
                    return Bid(y, False)
            else:
                # Alice holds *: she beats y with x > y, either spending or
                # keeping *, or by spending it on the tie.
                if (
                    not (cont_b[_STAR_A] >> (a + y) & 1)
                    and self._clear_below(cont_a[_STAR_A], a - y - 1)
                    and self._clear_below(cont_a[_STAR_B], a - y)
                ):
                    return Bid(y, False)
        if star_holder is Player.BOB:
            for y in range(self.total_chips - a + 1):
                if (
                    not (cont_b[_STAR_A] >> (a + y) & 1)
                    and self._clear_below(cont_a[_STAR_B], a - y - 1)
                ):
                    return Bid(y, True)
        raise AssertionError(f"winner mask and certificate scan disagree at {position!r}")

    def _covers(self, mask: int, start: int) -> bool:
        """Bits start..total of ``mask`` all set (vacuously true past the top)."""
        return start >= self._width or (mask >> start) == (1 << (self._width - start)) - 1

    @staticmethod
    def _clear_below(mask: int, top: int) -> bool:
        """Bits 0..top of ``mask`` all clear (vacuously true for top < 0)."""
        return top < 0 or (mask & ((1 << (top + 1)) - 1)) == 0

    def export_lines(self) -> list[str]:
        lines = []
        for pos in sorted(self._masks):
            for star, letter in ((Player.ALICE, "A"), (Player.BOB, "B")):
                for a in range(self._width):
                    w = self.winner(pos, a, star).short
                    lines.append(f"dwin {pos} {a} {letter} {w}")
        return lines


def solve_discrete(
    game: Game,
    total_chips: int,
    draw_policy: DrawPolicy = DrawPolicy.DRAW_IS_BOB_WIN,
    graph: PositionGraph | None = None,
) -> DiscreteTable:
    """Backward-induct the winner of every chip state of ``game``.

    ``total_chips`` may be zero: the auctions are then decided purely by
    the * rule.
    """
    if total_chips < 0:
        raise ValueError(f"total chips must be nonnegative, got {total_chips}")
    if graph is None:
        graph = explore(game)

    width = total_chips + 1
    full = (1 << width) - 1
    table = DiscreteTable(game, total_chips, draw_policy, graph, {})
    masks = table._masks
    alice_takes_draws = draw_policy.draw_winner is Player.ALICE

    for pos in reversed(graph.order):
        out = graph.outcomes[pos]
        if out is not Outcome.ONGOING:
            if out is Outcome.ALICE_WINS or (out is Outcome.DRAW and alice_takes_draws):
                masks[pos] = [full, full]
            else:
                masks[pos] = [0, 0]
            continue

        cont_a, cont_b = table._continuations(pos)
        # Least index from which the Bob-side AND masks are solid ones.
        solid_a = _suffix_all_from(cont_b[_STAR_A], width)
        solid_b = _suffix_all_from(cont_b[_STAR_B], width)

        mask_star_a = 0
        mask_star_b = 0
        for a in range(width):
            # Alice holds *.  Passing (plain 0) hands Bob every auction, so
            # it is safe as soon as all his continuations are; a winning
            # bid x (keeping *) needs x >= solid_a - a plus her own
            # continuation at bit a-x of the keep-* OR mask; spending *
            # shifts the reply suffix one step right.
            if a >= solid_a:
                mask_star_a |= 1 << a
            else:
                top = min(2 * a - solid_a, a)
                if top >= 0 and cont_a[_STAR_A] & ((1 << (top + 1)) - 1):
                    mask_star_a |= 1 << a
                else:
                    top = min(2 * a - solid_a + 1, a)
                    if top >= 0 and cont_a[_STAR_B] & ((1 << (top + 1)) - 1):
                        mask_star_a |= 1 << a
            # Bob holds *: Alice's bid must survive his plain overbids, his
            # *-sweetened overbids AND his *-sweetened tie.
            top = min(2 * a - solid_b + 1, 2 * a - solid_a, a)
            if top >= 0 and cont_a[_STAR_B] & ((1 << (top + 1)) - 1):
                mask_star_b |= 1 << a
        masks[pos] = [mask_star_a, mask_star_b]
    return table


@dataclass(frozen=True)
class Threshold:
    """Least Alice pile that wins, on the axis 0 < 0* < 1 < 1* < 2 < ..."""

    amount: int
    with_star: bool

    def __str__(self) -> str:
        return f"{self.amount}{'*' if self.with_star else ''}"

    def fraction(self, total_chips: int) -> Fraction:
        """Pile as a fraction of the total, counting * as half a chip."""
        if total_chips <= 0:
            raise ValueError("threshold fraction needs a positive chip total")
        f = Fraction(self.amount, total_chips)
        if self.with_star:
            f += Fraction(1, 2 * total_chips)
        return f


def discrete_threshold(
    game: Game,
    position: str,
    total_chips: int,
    draw_policy: DrawPolicy = DrawPolicy.DRAW_IS_BOB_WIN,
    table: DiscreteTable | None = None,
) -> Threshold | None:
    """Least winning Alice pile at ``position``, or None if she never wins.

    Piles are ordered with the * worth less than a whole chip: a pile of k
    chips plus * sits between k and k+1.
    """
    if table is None:
        table = solve_discrete(game, total_chips, draw_policy)
    for amount in range(total_chips + 1):
        if table.winner(position, amount, Player.BOB) is Player.ALICE:
            return Threshold(amount, False)
        if table.winner(position, amount, Player.ALICE) is Player.ALICE:
            return Threshold(amount, True)
    return None


def threshold_line(position: str, total_chips: int, threshold: Threshold | None) -> str:
    tail = "none" if threshold is None else str(threshold)
    return f"dthresh {position} {total_chips} {tail}"


def safe_first_moves(
    table: DiscreteTable, position: str, alice_chips: int, star_holder: Player
) -> set[str]:
    """Alice moves that a winning committed bid-plus-move strategy can open with.

    A label m qualifies when some bid wins at least one auction and, with
    Alice committed to answering any auction win by playing m, every Bob
    reply still leads to a state Alice wins.  Empty when Bob wins the state
    outright or Alice's only safety is conceding every auction.
    """
    if table.graph.outcomes[position].is_terminal:
        raise DomainError(f"terminal position has no first move: {position!r}")
    a = alice_chips
    _, cont_b = table._continuations(position)
    labels = set()
    for label, succ in table.graph.alice_moves[position]:
        own = table._masks[succ]
        for x in range(a + 1):
            if star_holder is Player.ALICE:
                if (
                    x > 0
                    and (own[_STAR_A] >> (a - x) & 1)
                    and table._covers(cont_b[_STAR_A], a + x)
                ):
                    break
                if (own[_STAR_B] >> (a - x) & 1) and table._covers(cont_b[_STAR_A], a + x + 1):
                    break
            else:
                if (
                    (own[_STAR_B] >> (a - x) & 1)
                    and table._covers(cont_b[_STAR_B], a + x + 1)
                    and table._covers(cont_b[_STAR_A], a + x)
                ):
                    break
        else:
            continue
        labels.add(label)
    return labels


def discrete_optimal_actions(
    table: DiscreteTable,
    state: DiscreteState,
    player: Player,
    fallback_values=None,
) -> tuple[Bid, str]:
    """Advise ``player``: a certifying bid and the move to make on winning.

    On the winning side this returns the stored safe bid and a successor
    that preserves the win.  On the losing side there is nothing to
    certify; the advice is to bid nothing and move along the continuous
    solver's best line (``fallback_values``, solved on demand), banking on
    opponent error.
    """
    if state.chips.total != table.total_chips:
        raise DomainError(
            f"chip total {state.chips.total} does not match table total {table.total_chips}"
        )
    position, chips = state.position, state.chips
    try:
        outcome = table.graph.outcomes[position]
    except KeyError:
        raise DomainError(f"position not in discrete table: {position!r}") from None
    if outcome.is_terminal:
        raise DomainError(f"no action at terminal position {position!r}")

    winner = table.winner_of(state)
    if player is winner:
        if player is Player.ALICE:
            bid = table.alice_safe_bid(position, chips.alice_chips, chips.star_holder)
        else:
            bid = table.bob_safe_bid(position, chips.alice_chips, chips.star_holder)
        # A plain 0 bid by the * holder concedes every auction; the safe
        # bid then never leads to a move of ours, and any legal committed
        # move will do (the heuristic one, for uniformity).
        passes = bid.amount == 0 and not bid.include_star and chips.holds_star(player)
        if not passes:
            pay = bid.amount if player is Player.ALICE else -bid.amount
            star = chips.star_holder.opponent if bid.include_star else chips.star_holder
            after_a = chips.alice_chips - pay
            moves = (
                table.graph.alice_moves[position]
                if player is Player.ALICE
                else table.graph.bob_moves[position]
            )
            for label, succ in moves:
                if table.winner(succ, after_a, star) is player:
                    return bid, label
            raise AssertionError(f"no winning move behind safe bid at {position!r}")
    else:
        bid = Bid(0)

    from bidgame.richman import solve_richman  # local import to avoid a cycle

    if fallback_values is None:
        fallback_values = solve_richman(
            table.game, draw_value=table.draw_policy.draw_value, graph=table.graph
        )
    entry = fallback_values.entry(position)
    moves = entry.alice_moves if player is Player.ALICE else entry.bob_moves
    if not moves:  # stuck: any forced move label would be illegal anyway
        raise DomainError(f"{player.value} has no legal move at {position!r}")
    return bid, min(moves)
