// Mirrors of the server's JSON schemas, field for field.

export type Seat = "A" | "B";
export type Phase = "awaiting-bids" | "awaiting-move" | "finished";

export interface ChipsView {
  alice: number;
  bob: number;
  star_holder: Seat;
  display: string;
}

export interface RevealedRound {
  bid_a: string; // e.g. "11" or "11*"
  bid_b: string;
  mover: Seat;
}

export interface PastRound {
  round: number;
  bid_a: string;
  bid_b: string;
  mover: Seat;
  chips: string; // e.g. "113*/87"
  move: string;
}

export interface Snapshot {
  match_id: string;
  game: string;
  seats: Record<Seat, string>;
  seed: number;
  draw_policy: string;
  phase: Phase;
  round: number;
  position: string;
  board: string;
  chips: ChipsView;
  bids_committed: Record<Seat, boolean>;
  current_round: RevealedRound | null;
  legal_moves: Record<Seat, string[]>;
  past_rounds: PastRound[];
  outcome: string | null;
  forfeited: Seat | null;
  transcript_url: string | null;
}

export interface CreateMatchResponse {
  match_id: string;
  tokens: Partial<Record<Seat, string>>;
  snapshot: Snapshot;
}

export interface GamesResponse {
  games: string[];
  agents: string[];
}

export interface ActionResponse {
  accepted: boolean;
  phase: Phase;
}
