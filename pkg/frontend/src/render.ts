// HTML renderers: pure functions from snapshot (+ this seat's form state)
// to markup strings.  main.ts owns the DOM and event wiring.

import type { PastRound, Seat, Snapshot } from "./types.js";
import {
  STAR_TOOLTIP,
  bidFormView,
  moveFormView,
  seatName,
  splitChips,
  splitPile,
  statusLine,
} from "./state.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function starBadge(): string {
  return `<span class="star" title="${esc(STAR_TOOLTIP)}">*</span>`;
}

function pileHtml(text: string): string {
  const { amount, star } = splitPile(text);
  return esc(amount) + (star ? starBadge() : "");
}

function chipsHtml(display: string): string {
  const { alice, bob } = splitChips(display);
  return (
    esc(alice.amount) + (alice.star ? starBadge() : "") + "/" +
    esc(bob.amount) + (bob.star ? starBadge() : "")
  );
}

// -- boards -----------------------------------------------------------------

function cellLabel(index: number, size: number): string {
  return "abcdefghijk"[index % size] + String(Math.floor(index / size) + 1);
}

function clickable(label: string, active: boolean, legal: string[]): string {
  return active && legal.includes(label) ? ` data-move="${esc(label)}"` : "";
}

function tttBoard(board: string, active: boolean, legal: string[]): string {
  const rows = [];
  for (let r = 0; r < 3; r++) {
    const cells = [];
    for (let c = 0; c < 3; c++) {
      const index = r * 3 + c;
      const mark = board[index];
      const label = cellLabel(index, 3);
      const cls = mark === "X" ? "alice" : mark === "O" ? "bob" : "empty";
      cells.push(
        `<td class="${cls}"${clickable(label, active && mark === ".", legal)}>` +
          `${mark === "." ? "" : mark}</td>`,
      );
    }
    rows.push(`<tr>${cells.join("")}</tr>`);
  }
  return `<table class="ttt">${rows.join("")}</table>`;
}

function hexBoard(board: string, size: number, active: boolean, legal: string[]): string {
  // Pointy-top hexes; each row shifts half a cell right, so Alice's sides
  // are the left/right slants and Bob's are the top/bottom edges.
  const R = 20;
  const w = Math.sqrt(3) * R;
  const corners = (cx: number, cy: number) =>
    [0, 1, 2, 3, 4, 5]
      .map((i) => {
        const angle = (Math.PI / 180) * (60 * i - 30);
        return `${(cx + R * Math.sin(angle)).toFixed(1)},${(cy - R * Math.cos(angle)).toFixed(1)}`;
      })
      .join(" ");
  const cells = [];
  for (let index = 0; index < size * size; index++) {
    const r = Math.floor(index / size);
    const c = index % size;
    const cx = w * (c + r / 2) + w;
    const cy = 1.5 * R * r + 1.5 * R;
    const stone = board[index];
    const cls = stone === "A" ? "alice" : stone === "B" ? "bob" : "empty";
    const label = cellLabel(index, size);
    cells.push(
      `<polygon class="cell ${cls}" points="${corners(cx, cy)}"` +
        clickable(label, active && stone === ".", legal) +
        `><title>${esc(label)}</title></polygon>`,
    );
  }
  const width = w * (1.5 * size + 1);
  const height = 1.5 * R * (size + 1);
  const sideA = `<rect class="side alice" x="0" y="0" width="6" height="${height}"/>` +
    `<rect class="side alice" x="${width - 6}" y="0" width="6" height="${height}"/>`;
  const sideB = `<rect class="side bob" x="0" y="0" width="${width}" height="6"/>` +
    `<rect class="side bob" x="0" y="${height - 6}" width="${width}" height="6"/>`;
  return (
    `<svg class="hex" viewBox="0 0 ${width} ${height}">` +
    sideB + sideA + cells.join("") +
    `</svg>`
  );
}

function dagBoard(snapshot: Snapshot, active: boolean, legal: string[]): string {
  const moves = (seat: Seat) =>
    snapshot.legal_moves[seat]
      .map((label) => {
        const attrs = clickable(label, active, legal);
        return attrs
          ? `<button class="move"${attrs}>${esc(label)}</button>`
          : `<span class="move">${esc(label)}</span>`;
      })
      .join(" ") || "<em>none</em>";
  return (
    `<div class="dag">` +
    `<p>position <code>${esc(snapshot.board)}</code></p>` +
    `<p>Alice's moves: ${moves("A")}</p>` +
    `<p>Bob's moves: ${moves("B")}</p>` +
    `</div>`
  );
}

export function renderBoard(snapshot: Snapshot, seat: Seat | null): string {
  const move = seat === null ? { mine: false, moves: [] } : moveFormView(snapshot, seat);
  if (snapshot.game === "ttt") {
    return tttBoard(snapshot.board, move.mine, move.moves);
  }
  if (snapshot.game.startsWith("hex:")) {
    const size = Number(snapshot.game.slice(4));
    return hexBoard(snapshot.board, size, move.mine, move.moves);
  }
  return dagBoard(snapshot, move.mine, move.moves);
}

// -- ledger -----------------------------------------------------------------

function ledgerRow(round: PastRound): string {
  return (
    `<tr><td>${round.round}</td>` +
    `<td>${pileHtml(round.bid_a)}</td>` +
    `<td>${pileHtml(round.bid_b)}</td>` +
    `<td>${seatName(round.mover)}</td>` +
    `<td>${esc(round.move)}</td>` +
    `<td class="chips">${chipsHtml(round.chips)}</td></tr>`
  );
}

function currentRow(snapshot: Snapshot): string {
  if (snapshot.phase === "awaiting-bids") {
    const sealed = (seat: Seat) =>
      snapshot.bids_committed[seat] ? `<em>sealed</em>` : `<em>pending</em>`;
    return (
      `<tr class="current"><td>${snapshot.round}</td>` +
      `<td>${sealed("A")}</td><td>${sealed("B")}</td>` +
      `<td></td><td></td><td class="chips">${chipsHtml(snapshot.chips.display)}</td></tr>`
    );
  }
  if (snapshot.phase === "awaiting-move" && snapshot.current_round) {
    const r = snapshot.current_round;
    return (
      `<tr class="current"><td>${snapshot.round}</td>` +
      `<td>${pileHtml(r.bid_a)}</td><td>${pileHtml(r.bid_b)}</td>` +
      `<td>${seatName(r.mover)}</td><td><em>choosing</em></td>` +
      `<td class="chips">${chipsHtml(snapshot.chips.display)}</td></tr>`
    );
  }
  return "";
}

export function renderLedger(snapshot: Snapshot): string {
  const header =
    `<tr><th>Round</th><th>Alice bid</th><th>Bob bid</th>` +
    `<th>Auction</th><th>Move</th><th>Chips</th></tr>`;
  const rows = snapshot.past_rounds.map(ledgerRow).join("");
  return `<table class="ledger">${header}${rows}${currentRow(snapshot)}</table>`;
}

// -- forms ------------------------------------------------------------------

export function renderBidForm(snapshot: Snapshot, seat: Seat, error: string | null): string {
  const view = bidFormView(snapshot, seat);
  if (!view.visible) return "";
  const star = view.starAvailable
    ? `<label class="star-option"><input type="checkbox" id="bid-star"` +
      `${view.committed ? " disabled" : ""}> include ${starBadge()}</label>`
    : "";
  return (
    `<form id="bid-form" data-action="bid">` +
    `<label>Sealed bid (0&ndash;${view.pile}):` +
    ` <input type="number" id="bid-amount" min="0" max="${view.pile}"` +
    `${view.committed ? " disabled" : ""}></label> ${star}` +
    `<button type="submit"${view.committed ? " disabled" : ""}>` +
    `${view.committed ? "Committed" : "Commit bid"}</button>` +
    (error ? `<span class="error">${esc(error)}</span>` : "") +
    `</form>`
  );
}

export function renderMoveForm(snapshot: Snapshot, seat: Seat, error: string | null): string {
  const view = moveFormView(snapshot, seat);
  if (!view.visible) return "";
  if (!view.mine) return `<p class="wait">The auction winner is choosing a move.</p>`;
  const buttons = view.moves
    .map((label) => `<button class="move" data-move="${esc(label)}">${esc(label)}</button>`)
    .join(" ");
  return (
    `<div id="move-form">Your move: ${buttons}` +
    (error ? ` <span class="error">${esc(error)}</span>` : "") +
    `</div>`
  );
}

// -- whole view -------------------------------------------------------------

export function renderMatch(
  snapshot: Snapshot,
  seat: Seat | null,
  error: string | null,
): string {
  const seatLine =
    seat === null
      ? `<p class="seat">Watching as a spectator</p>`
      : `<p class="seat">You are ${seatName(seat)} (${seat})</p>`;
  const finished =
    snapshot.phase === "finished" && snapshot.transcript_url
      ? `<p class="end"><a href="${esc(snapshot.transcript_url)}">transcript</a></p>`
      : "";
  const forms =
    seat === null
      ? ""
      : renderBidForm(snapshot, seat, error) + renderMoveForm(snapshot, seat, error);
  return (
    `<section class="match">` +
    `<h2>${esc(snapshot.game)} &mdash; match ${esc(snapshot.match_id)}</h2>` +
    seatLine +
    `<p class="status">${esc(statusLine(snapshot, seat))}</p>` +
    `<p class="piles">Chips: ${chipsHtml(snapshot.chips.display)}</p>` +
    renderBoard(snapshot, seat) +
    forms +
    renderLedger(snapshot) +
    finished +
    `</section>`
  );
}
