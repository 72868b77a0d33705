"""Command-line front door for solving, playing and verifying bidding games.

Subcommands::

    bidgame solve    --game ttt                 exact bid-value table
    bidgame solve    --game hex:3 --verify-theorem
    bidgame discrete --game dag:@diamond --total 8
    bidgame match    --game ttt --seat-a richman --seat-b random --seed 3
    bidgame verify   match.transcript
    bidgame serve    --port 8000

Games are named ``ttt``, ``hex:<n>``, ``dag:@<fixture>`` or ``dag:<path>``
(a path to a game-definition document).  Exit codes: 0 on success or a
passing verification, 1 when a verification fails, 2 for usage errors
(unknown games, malformed files, cyclic graphs, bad flags).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from fractions import Fraction
from pathlib import Path

from bidgame.discrete import (
    DrawPolicy,
    discrete_threshold,
    safe_first_moves,
    solve_discrete,
    threshold_line,
)
from bidgame.errors import BidgameError
from bidgame.games import known_game_specs, make_game
from bidgame.games.base import Outcome, Player, explore
from bidgame.match import (
    MatchConfig,
    parse_transcript,
    run_configured_match,
    run_scripted_match,
    serialize_transcript,
    verify_transcript,
)
from bidgame.random_turn import verify_richman_theorem
from bidgame.richman import format_fraction, solve_richman

OK = 0
VERIFICATION_FAILED = 1
USAGE_ERROR = 2


# ---------------------------------------------------------------------------
# argparse plumbing


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}")
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"draw value must lie in [0, 1], got {text}")
    return value


def _draw_policy(text: str) -> DrawPolicy:
    for policy in DrawPolicy:
        if policy.value == text:
            return policy
    choices = ", ".join(p.value for p in DrawPolicy)
    raise argparse.ArgumentTypeError(f"unknown draw policy {text!r} (choices: {choices})")


def _chip_totals(text: str) -> list[int]:
    try:
        totals = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of totals: {text!r}")
    if not totals or any(n < 0 for n in totals):
        raise argparse.ArgumentTypeError("chip totals must be non-negative integers")
    return totals


def _player(text: str) -> Player:
    try:
        return Player.from_short(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"star holder must be A or B, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bidgame",
        description="Solve, play and verify bidding (Richman) combinatorial games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_game(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument(
            "--game",
            required=required,
            help="ttt | hex:<n> | dag:@<fixture> | dag:<path>",
        )

    solve = sub.add_parser("solve", help="export exact bid-value tables")
    add_game(solve)
    solve.add_argument("--draw-value", type=_fraction, default=Fraction(1, 2),
                       help="value of a drawn game, as a fraction in [0,1] (default 1/2)")
    solve.add_argument("--output", "-o", help="write the value table here instead of stdout")
    solve.add_argument("--verify-theorem", action="store_true",
                       help="also solve by random-turn play and check the two agree")
    solve.add_argument("--verbose", action="store_true",
                       help="list each discrepancy the theorem check finds")

    discrete = sub.add_parser("discrete", help="solve with whole-chip bidding and the * tiebreak")
    add_game(discrete)
    discrete.add_argument("--total", type=int, help="total chips in play")
    discrete.add_argument("--draw-policy", type=_draw_policy,
                          default=DrawPolicy.DRAW_IS_BOB_WIN,
                          help="who a drawn game counts for "
                               "(draw_is_bob_win | draw_is_alice_win)")
    discrete.add_argument("--thresholds", action="store_true",
                          help="also export the least winning pile per position")
    discrete.add_argument("--first-moves", type=_chip_totals, metavar="N1,N2,...",
                          help="print the optimal opening moves at each chip total")
    discrete.add_argument("--output", "-o", help="write tables here instead of stdout")

    match = sub.add_parser("match", help="run matches and replay transcripts")
    add_game(match, required=False)
    match.add_argument("--seat-a", default="richman", help="agent id for Alice")
    match.add_argument("--seat-b", default="richman", help="agent id for Bob")
    match.add_argument("--alice-chips", type=int, default=100)
    match.add_argument("--bob-chips", type=int, default=100)
    match.add_argument("--star", type=_player, default=Player.ALICE,
                       help="initial tiebreaker holder, A or B (default A)")
    match.add_argument("--draw-policy", type=_draw_policy,
                       default=DrawPolicy.DRAW_IS_BOB_WIN)
    match.add_argument("--seed", type=int, default=0)
    match.add_argument("--script", help="drive both seats from a bid-script file")
    match.add_argument("--repeat", type=int, default=1, metavar="N",
                       help="play N matches at consecutive seeds and print a summary")
    match.add_argument("--replay", metavar="TRANSCRIPT",
                       help="verify a recorded transcript instead of playing")
    match.add_argument("--output", "-o", help="write the transcript here")

    verify = sub.add_parser("verify", help="re-derive a transcript and report divergences")
    verify.add_argument("transcript", help="path to a bidding-match transcript")

    serve = sub.add_parser("serve", help="run the HTTP match server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--transcripts", default="transcripts",
                       help="directory for finished-match transcripts")
    serve.add_argument("--timeout", type=float, default=120.0,
                       help="seconds of seat inactivity before a forfeit")
    serve.add_argument("--ui", default=None,
                       help="serve this static client directory at /")

    sub.add_parser("games", help="list the built-in game specs")

    return parser


def _emit(lines: list[str], path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    game = make_game(args.game)
    if args.verify_theorem:
        report = verify_richman_theorem(game, args.draw_value)
        print(report.summary(verbose=args.verbose))
        return OK if report.ok else VERIFICATION_FAILED
    table = solve_richman(game, args.draw_value)
    _emit(table.export_lines(), args.output)
    if args.output:
        root = game.initial()
        print(f"wrote {len(table)} positions to {args.output} "
              f"(root {root} = {format_fraction(table.value(root))})")
    return OK


def cmd_discrete(args) -> int:
    game = make_game(args.game)
    if args.first_moves is not None:
        _emit(_first_move_lines(game, args.first_moves, args.draw_policy), args.output)
        return OK
    if args.total is None:
        raise CliUsageError("--total is required (or use --first-moves)")
    table = solve_discrete(game, args.total, args.draw_policy)
    lines = table.export_lines()
    if args.thresholds:
        for position in sorted(table.graph.outcomes):
            threshold = discrete_threshold(game, position, args.total,
                                           args.draw_policy, table=table)
            lines.append(threshold_line(position, args.total, threshold))
    _emit(lines, args.output)
    return OK


def _first_move_lines(game, totals: list[int], policy: DrawPolicy) -> list[str]:
    """One line per chip total: the least winning root pile and the opening
    moves a committed winning strategy can start with there."""
    graph = explore(game)
    root = game.initial()
    lines = []
    for total in totals:
        table = solve_discrete(game, total, policy, graph=graph)
        threshold = discrete_threshold(game, root, total, policy, table=table)
        if threshold is None:
            lines.append(f"firstmoves {root} {total} none -")
            continue
        holder = Player.ALICE if threshold.with_star else Player.BOB
        moves = sorted(safe_first_moves(table, root, threshold.amount, holder))
        lines.append(f"firstmoves {root} {total} {threshold} {','.join(moves) or '-'}")
    return lines


def cmd_match(args) -> int:
    if args.replay:
        return _verify_file(args.replay)
    if args.game is None:
        raise CliUsageError("--game is required unless --replay is given")
    if args.repeat < 1:
        raise CliUsageError("--repeat must be at least 1")
    game = make_game(args.game)
    config = MatchConfig(
        game=args.game,
        alice_chips=args.alice_chips,
        bob_chips=args.bob_chips,
        star_holder=args.star,
        draw_policy=args.draw_policy,
        seat_a="script" if args.script else args.seat_a,
        seat_b="script" if args.script else args.seat_b,
        seed=args.seed,
    )
    if args.script:
        if args.repeat != 1:
            raise CliUsageError("--repeat does not combine with --script")
        transcript = run_scripted_match(config, Path(args.script).read_text(), game)
        return _report_match(transcript, args.output)
    if args.repeat > 1:
        if args.output:
            raise CliUsageError("--repeat prints a summary; --output takes no transcript")
        return _run_series(config, game, args.repeat)
    transcript = run_configured_match(config, game)
    return _report_match(transcript, args.output)


def _report_match(transcript, output: str | None) -> int:
    text = serialize_transcript(transcript)
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)
        print(text.rstrip("\n").splitlines()[-1])  # the result line
    return OK


def _run_series(config: MatchConfig, game, repeat: int) -> int:
    wins = {Outcome.ALICE_WINS: 0, Outcome.BOB_WINS: 0, Outcome.DRAW: 0}
    for offset in range(repeat):
        round_config = dataclasses.replace(config, seed=config.seed + offset)
        wins[run_configured_match(round_config, game).outcome] += 1
    rate = wins[Outcome.ALICE_WINS] / repeat
    print(f"matches {repeat} alice {wins[Outcome.ALICE_WINS]} "
          f"bob {wins[Outcome.BOB_WINS]} draw {wins[Outcome.DRAW]} "
          f"alice_rate {rate:.1%}")
    return OK


def _verify_file(path: str) -> int:
    transcript = parse_transcript(Path(path).read_text())
    report = verify_transcript(transcript)
    print(report)
    return OK if report.ok else VERIFICATION_FAILED


def cmd_games(args) -> int:
    print("\n".join(known_game_specs()))
    return OK


def cmd_serve(args) -> int:
    import uvicorn

    from bidgame.service import create_app

    app = create_app(args.transcripts, timeout_seconds=args.timeout, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return OK


class CliUsageError(Exception):
    """A flag combination the parser itself cannot reject."""


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return int(exc.code or 0)
    handlers = {
        "solve": cmd_solve,
        "discrete": cmd_discrete,
        "match": cmd_match,
        "verify": lambda a: _verify_file(a.transcript),
        "serve": cmd_serve,
        "games": cmd_games,
    }
    try:
        return handlers[args.command](args)
    except (CliUsageError, BidgameError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
