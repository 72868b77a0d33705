// Thin typed client for the match service; all endpoints, nothing else.

import type {
  ActionResponse,
  CreateMatchResponse,
  GamesResponse,
  Snapshot,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }
}

export interface CreateMatchBody {
  game: string;
  alice_chips?: number;
  bob_chips?: number;
  star_holder?: string;
  draw_policy?: string;
  seat_a?: string;
  seat_b?: string;
  seed?: number;
  match_id?: string;
}

async function parseError(response: Response): Promise<never> {
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body: keep the status line
  }
  throw new ApiError(response.status, detail);
}

export class Api {
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  games(): Promise<GamesResponse> {
    return this.request("/games");
  }

  create(body: CreateMatchBody): Promise<CreateMatchResponse> {
    return this.post("/matches", body);
  }

  snapshot(matchId: string): Promise<Snapshot> {
    return this.request(`/matches/${encodeURIComponent(matchId)}`);
  }

  bid(matchId: string, token: string, amount: number, includeStar: boolean): Promise<ActionResponse> {
    return this.post(`/matches/${encodeURIComponent(matchId)}/bid`, {
      token,
      amount,
      include_star: includeStar,
    });
  }

  move(matchId: string, token: string, move: string): Promise<ActionResponse> {
    return this.post(`/matches/${encodeURIComponent(matchId)}/move`, { token, move });
  }

  eventsUrl(matchId: string): string {
    return `${this.base}/matches/${encodeURIComponent(matchId)}/events`;
  }

  transcriptUrl(matchId: string): string {
    return `${this.base}/matches/${encodeURIComponent(matchId)}/transcript`;
  }
}

// -- server-sent events -----------------------------------------------------

export interface EventSourceLike {
  onmessage: ((event: MessageEvent) => void) | null;
  onerror: ((event: Event) => void) | null;
  addEventListener(type: string, handler: (event: MessageEvent) => void): void;
  close(): void;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

export interface SubscribeHandlers {
  onSnapshot(snapshot: Snapshot): void;
  onTranscript?(url: string): void;
}

export interface Subscription {
  close(): void;
}

const RECONNECT_DELAY_MS = 2000;

/**
 * Follow a match's snapshot stream, resubscribing after connection loss.
 * Ends by itself once the server sends the final transcript event.
 */
export function subscribe(
  api: Api,
  matchId: string,
  handlers: SubscribeHandlers,
  factory: EventSourceFactory = (url) => new EventSource(url),
): Subscription {
  let source: EventSourceLike | null = null;
  let timer: ReturnType<typeof setTimeout> | null = null;
  let closed = false;

  const open = () => {
    source = factory(api.eventsUrl(matchId));
    source.onmessage = (event) => {
      handlers.onSnapshot(JSON.parse(event.data) as Snapshot);
    };
    source.addEventListener("transcript", (event) => {
      const body = JSON.parse(event.data) as { transcript_url: string };
      handlers.onTranscript?.(body.transcript_url);
      stop();
    });
    source.onerror = () => {
      // dropped connection: rebuild the stream and re-render from its
      // first snapshot (the server always opens with the current state)
      source?.close();
      source = null;
      if (!closed) timer = setTimeout(open, RECONNECT_DELAY_MS);
    };
  };

  const stop = () => {
    closed = true;
    if (timer !== null) clearTimeout(timer);
    source?.close();
    source = null;
  };

  open();
  return { close: stop };
}
