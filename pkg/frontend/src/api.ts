/** Typed client for the qmonty session service JSON API. */

export interface ServerView {
  id: string;
  alice_mode: string;
  n_boxes: number;
  phase: "placed" | "picked" | "revealed" | "decided" | "resolved";
  round: number;
  pick: number | null;
  current_box: number | null;
  revealed: number[];
  open_boxes: number[];
  final_round: boolean;
  score: number;
  wins: number;
  losses: number;
  games_played: number;
  alpha0?: number;
  alpha1?: number;
  outcome?: "win" | "lose";
  final_box?: number | null;
  location?: number;
}

export interface WhatIfReport {
  alpha0: number;
  alpha1: number;
  eta: number | null;
  beta: number | null;
  p_win: number;
  gain: number;
  method: string;
  stderr: number;
}

export interface SweepRow {
  alpha0: number;
  alpha1: number;
  eta: number | null;
  beta: number | null;
  p_win: number;
  gain: number;
}

export interface SessionConfig {
  alice_mode?: "classical-honest" | "quantum";
  alpha0?: number;
  alpha1?: number;
  n_boxes?: number;
  seed?: number;
  placement?: "classical" | "superposed";
}

export type BobDecision =
  | { decision: "stick" }
  | { decision: "switch"; target?: number }
  | { decision: "mix"; eta: number }
  | { decision: "quantum"; beta: number };

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseResponse<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const code = body && typeof body.code === "string" ? body.code : "http_error";
    const message =
      body && typeof body.message === "string" ? body.message : response.statusText;
    throw new ApiError(response.status, code, message);
  }
  return body as T;
}

export class QmontyClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string, params?: Record<string, string | number | boolean>): string {
    const url = new URL(path, this.baseUrl);
    if (params) {
      for (const [key, value] of Object.entries(params)) {
        url.searchParams.set(key, String(value));
      }
    }
    return url.toString();
  }

  async createSession(config: SessionConfig = {}): Promise<ServerView> {
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    });
    return parseResponse<ServerView>(response);
  }

  async getSession(id: string): Promise<ServerView> {
    return parseResponse<ServerView>(await fetch(this.url(`/sessions/${id}`)));
  }

  async pick(id: string, box: number): Promise<ServerView> {
    const response = await fetch(this.url(`/sessions/${id}/act`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ action: "pick", box }),
    });
    return parseResponse<ServerView>(response);
  }

  async decide(id: string, decision: BobDecision): Promise<ServerView> {
    const response = await fetch(this.url(`/sessions/${id}/act`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ action: "decide", ...decision }),
    });
    return parseResponse<ServerView>(response);
  }

  /** Expected payoff for an eta-mixture; every displayed probability comes from here. */
  async whatIfMixture(alpha0: number, alpha1: number, eta: number): Promise<WhatIfReport> {
    return parseResponse<WhatIfReport>(
      await fetch(this.url("/whatif", { alpha0, alpha1, eta })),
    );
  }

  async whatIfQuantum(alpha0: number, alpha1: number, beta: number): Promise<WhatIfReport> {
    return parseResponse<WhatIfReport>(
      await fetch(this.url("/whatif", { alpha0, alpha1, beta })),
    );
  }

  async sweep(grid: string, quantumBob = false): Promise<SweepRow[]> {
    return parseResponse<SweepRow[]>(
      await fetch(this.url("/sweep", { grid, quantum_bob: quantumBob })),
    );
  }
}
