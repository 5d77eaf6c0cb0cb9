// Typed client for the advisor service. Every probability shown in the UI
// comes from these response payloads verbatim; nothing is recomputed here.

export type Variant = "list" | "grid";
export type StrategyKind = "rt" | "es";
export type SessionStatus = "InProgress" | "Won" | "Eliminated";

export interface ListStateDoc {
  n: number;
  slots: (number | null)[];
  history: number[];
}

export interface GridStateDoc {
  m: number;
  cells: (number | null)[][];
}

export interface PendingDraw {
  value: number;
  normalized: number;
  feasible_slots?: number[];
  feasible_cells?: [number, number][];
}

export interface SessionDoc {
  id: string;
  variant: Variant;
  status: SessionStatus;
  strategy: string;
  state: ListStateDoc | GridStateDoc;
  draws_submitted: number;
  elimination_turn: number | null;
  win_prob: number | null;
  correct_so_far: number | null;
  pending_draw: PendingDraw | null;
  created_at: string;
}

export interface CreatedSession extends SessionDoc {
  boundaries: number[] | null;
}

export interface SlotRecommendation {
  slot: number;
  win_prob: number;
  correct_so_far: number;
  rank: number;
}

export interface CellRecommendation {
  cell: [number, number];
  probability: number;
  rank: number;
}

export type Recommendation = SlotRecommendation | CellRecommendation;

export interface DrawResponse {
  value: number;
  normalized: number;
  feasible_slots?: number[];
  feasible_cells?: [number, number][];
  recommendations: Recommendation[];
  eliminated: boolean;
  autoplaced: boolean;
  session: SessionDoc;
}

export interface Placement {
  slot?: number;
  cell?: [number, number];
}

export interface CreateOptions {
  variant: Variant;
  n?: number;
  m?: number;
  strategy?: StrategyKind;
  samples?: number;
  seed?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export function isSlotRecommendation(rec: Recommendation): rec is SlotRecommendation {
  return "slot" in rec;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class AdvisorClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  private prefix(variant: Variant): string {
    return `${this.baseUrl}/api/${variant === "grid" ? "grids" : "games"}`;
  }

  private async request<T>(url: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(url, init);
    } catch (error) {
      throw new ApiError(0, "unreachable", `advisor service unreachable: ${String(error)}`);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(
        response.status,
        (body as { code?: string }).code ?? "error",
        (body as { message?: string }).message ?? response.statusText,
      );
    }
    return body as T;
  }

  private post<T>(url: string, payload: unknown): Promise<T> {
    return this.request<T>(url, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createGame(options: CreateOptions): Promise<CreatedSession> {
    return this.post(this.prefix(options.variant), options);
  }

  submitDraw(
    variant: Variant,
    sessionId: string,
    value: number,
    autoplace = false,
  ): Promise<DrawResponse> {
    const query = autoplace ? "?autoplace=true" : "";
    return this.post(`${this.prefix(variant)}/${sessionId}/draws${query}`, { value });
  }

  commitPlacement(variant: Variant, sessionId: string, placement: Placement): Promise<SessionDoc> {
    return this.post(`${this.prefix(variant)}/${sessionId}/placements`, placement);
  }

  getState(variant: Variant, sessionId: string): Promise<SessionDoc> {
    return this.request(`${this.prefix(variant)}/${sessionId}`);
  }

  deleteGame(variant: Variant, sessionId: string): Promise<void> {
    return this.request(`${this.prefix(variant)}/${sessionId}`, { method: "DELETE" });
  }
}
