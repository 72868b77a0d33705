// DOM wiring: lobby (create/join), then one live match view fed by the
// snapshot stream.  All match markup comes from render.ts as strings.

import { Api, ApiError, subscribe, type Subscription } from "./api.js";
import { renderMatch } from "./render.js";
import { pileOf, validateBid } from "./state.js";
import type { Seat, Snapshot } from "./types.js";

interface AppState {
  matchId: string | null;
  seat: Seat | null;
  token: string | null;
  snapshot: Snapshot | null;
  error: string | null;
  subscription: Subscription | null;
}

const state: AppState = {
  matchId: null,
  seat: null,
  token: null,
  snapshot: null,
  error: null,
  subscription: null,
};

// A different API origin can be supplied as ?api=http://host:port
const apiBase = new URLSearchParams(window.location.search).get("api") ?? "";
const api = new Api(apiBase);

function app(): HTMLElement {
  return document.getElementById("app")!;
}

function draw(): void {
  if (state.snapshot === null) return;
  app().innerHTML = renderMatch(state.snapshot, state.seat, state.error);
}

function showSnapshot(snapshot: Snapshot): void {
  if (snapshot.round !== state.snapshot?.round) state.error = null;
  state.snapshot = snapshot;
  draw();
}

function enterMatch(matchId: string, seat: Seat | null, token: string | null): void {
  state.subscription?.close();
  Object.assign(state, { matchId, seat, token, snapshot: null, error: null });
  state.subscription = subscribe(api, matchId, {
    onSnapshot: showSnapshot,
    onTranscript: () => void api.snapshot(matchId).then(showSnapshot),
  });
}

async function act(action: () => Promise<unknown>): Promise<void> {
  try {
    await action();
    state.error = null;
  } catch (failure) {
    // server rejections stay inline; the form remains usable for a retry
    state.error = failure instanceof ApiError ? failure.message : String(failure);
  }
  if (state.matchId) showSnapshot(await api.snapshot(state.matchId));
}

function submitBid(): void {
  const { matchId, seat, token, snapshot } = state;
  if (!matchId || !seat || !token || !snapshot) return;
  const amountField = document.getElementById("bid-amount") as HTMLInputElement;
  const starField = document.getElementById("bid-star") as HTMLInputElement | null;
  const problem = validateBid(amountField.value, pileOf(snapshot, seat));
  if (problem !== null) {
    state.error = problem;
    draw();
    return;
  }
  void act(() =>
    api.bid(matchId, token, Number(amountField.value), starField?.checked ?? false),
  );
}

function submitMove(label: string): void {
  const { matchId, token } = state;
  if (!matchId || !token) return;
  void act(() => api.move(matchId, token, label));
}

function wireMatchEvents(): void {
  app().addEventListener("submit", (event) => {
    const form = event.target as HTMLElement;
    if (form.id === "bid-form") {
      event.preventDefault();
      submitBid();
    }
  });
  app().addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-move]");
    if (target && state.seat !== null) submitMove(target.dataset.move!);
  });
}

// -- lobby ------------------------------------------------------------------

async function createMatch(form: HTMLFormElement): Promise<void> {
  const data = new FormData(form);
  const seatChoice = (name: string) => String(data.get(name) || "external");
  try {
    const created = await api.create({
      game: String(data.get("game")),
      seat_a: seatChoice("seat_a"),
      seat_b: seatChoice("seat_b"),
      alice_chips: Number(data.get("chips") || 100),
      bob_chips: Number(data.get("chips") || 100),
    });
    const mySeat: Seat | null = created.tokens.A ? "A" : created.tokens.B ? "B" : null;
    reportTokens(created.match_id, created.tokens);
    enterMatch(created.match_id, mySeat, mySeat ? created.tokens[mySeat]! : null);
  } catch (failure) {
    reportLobbyError(failure);
  }
}

function reportTokens(matchId: string, tokens: Partial<Record<Seat, string>>): void {
  const box = document.getElementById("lobby-result")!;
  const lines = [`match <code>${matchId}</code> created`];
  for (const [seat, token] of Object.entries(tokens)) {
    lines.push(`seat ${seat} token: <code>${token}</code>`);
  }
  lines.push("share the other token with your opponent before play begins");
  box.innerHTML = lines.join("<br>");
}

function reportLobbyError(failure: unknown): void {
  const box = document.getElementById("lobby-result")!;
  box.textContent =
    failure instanceof ApiError ? failure.message : "could not reach the server";
}

async function joinMatch(form: HTMLFormElement): Promise<void> {
  const data = new FormData(form);
  const matchId = String(data.get("match_id"));
  const token = String(data.get("token") || "");
  const seat = String(data.get("seat") || "");
  const asSeat = seat === "A" || seat === "B" ? (seat as Seat) : null;
  enterMatch(matchId, token ? asSeat : null, token || null);
}

async function fillGameOptions(): Promise<void> {
  try {
    const listing = await api.games();
    const select = document.getElementById("game-select") as HTMLSelectElement;
    select.innerHTML = listing.games
      .map((game) => `<option value="${game}">${game}</option>`)
      .join("");
    for (const id of ["seat-a-select", "seat-b-select"]) {
      const seatSelect = document.getElementById(id) as HTMLSelectElement;
      seatSelect.innerHTML =
        `<option value="external">human</option>` +
        listing.agents.map((agent) => `<option value="${agent}">${agent}</option>`).join("");
    }
  } catch (failure) {
    reportLobbyError(failure);
  }
}

window.addEventListener("DOMContentLoaded", () => {
  wireMatchEvents();
  void fillGameOptions();
  document.getElementById("create-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    void createMatch(event.target as HTMLFormElement);
  });
  document.getElementById("join-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    void joinMatch(event.target as HTMLFormElement);
  });
});
