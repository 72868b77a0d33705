// Pure view-model helpers: everything here is a function of the latest
// server snapshot plus this client's own uncommitted form state.

import type { Seat, Snapshot } from "./types.js";

export const STAR_TOOLTIP =
  "The * breaks tied bids: a bid that includes it beats an equal bid, " +
  "but the * then moves to your opponent along with the chips you pay. " +
  "If the bids tie and the * was held back, the side without it wins the auction.";

export function opponent(seat: Seat): Seat {
  return seat === "A" ? "B" : "A";
}

export function seatName(seat: Seat): string {
  return seat === "A" ? "Alice" : "Bob";
}

export function pileOf(snapshot: Snapshot, seat: Seat): number {
  return seat === "A" ? snapshot.chips.alice : snapshot.chips.bob;
}

export function holdsStar(snapshot: Snapshot, seat: Seat): boolean {
  return snapshot.chips.star_holder === seat;
}

/** Client-side bid validation; the server re-validates regardless. */
export function validateBid(raw: string, pile: number): string | null {
  if (raw.trim() === "") return "enter a bid amount";
  const amount = Number(raw);
  if (!Number.isInteger(amount)) return "bids are whole chips";
  if (amount < 0) return "bids cannot be negative";
  if (amount > pile) return `you only have ${pile} chips`;
  return null;
}

export interface BidFormView {
  visible: boolean;
  pile: number;
  starAvailable: boolean; // checkbox offered only to the * holder
  committed: boolean; // commit control disables after submission
  waitingOn: Seat | null;
}

export function bidFormView(snapshot: Snapshot, seat: Seat): BidFormView {
  const committed = snapshot.bids_committed[seat];
  const other = opponent(seat);
  return {
    visible: snapshot.phase === "awaiting-bids",
    pile: pileOf(snapshot, seat),
    starAvailable: holdsStar(snapshot, seat),
    committed,
    waitingOn: snapshot.bids_committed[other] ? null : other,
  };
}

export interface MoveFormView {
  visible: boolean;
  mine: boolean; // move selection only for the auction winner
  moves: string[];
}

export function moveFormView(snapshot: Snapshot, seat: Seat): MoveFormView {
  const mine =
    snapshot.phase === "awaiting-move" && snapshot.current_round?.mover === seat;
  return {
    visible: snapshot.phase === "awaiting-move",
    mine,
    moves: mine ? snapshot.legal_moves[seat] : [],
  };
}

/** One sentence telling this seat what is happening right now. */
export function statusLine(snapshot: Snapshot, seat: Seat | null): string {
  if (snapshot.phase === "finished") {
    const base =
      snapshot.outcome === "draw"
        ? "Match over: draw"
        : `Match over: ${snapshot.outcome === "alice_wins" ? "Alice" : "Bob"} wins`;
    return snapshot.forfeited
      ? `${base} (${seatName(snapshot.forfeited)} forfeited)`
      : base;
  }
  if (snapshot.phase === "awaiting-move") {
    const mover = snapshot.current_round!.mover;
    if (seat === null) return `${seatName(mover)} won the auction and moves next`;
    return mover === seat
      ? "You won the auction — choose a move"
      : `${seatName(mover)} won the auction and is choosing a move`;
  }
  if (seat === null) return `Round ${snapshot.round}: waiting for sealed bids`;
  return snapshot.bids_committed[seat]
    ? "Bid committed — waiting for your opponent"
    : `Round ${snapshot.round}: enter your sealed bid`;
}

export interface PileParts {
  amount: string;
  star: boolean;
}

/** Split a pile display like "113*" into amount and * flag. */
export function splitPile(text: string): PileParts {
  const star = text.endsWith("*");
  return { amount: star ? text.slice(0, -1) : text, star };
}

/** Split a chip-state display ("113*" and "87" either side of the slash). */
export function splitChips(display: string): { alice: PileParts; bob: PileParts } {
  const [a, b] = display.split("/");
  return { alice: splitPile(a), bob: splitPile(b) };
}
