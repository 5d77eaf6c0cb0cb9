// View model: the board always mirrors the last session document returned
// by the service, and recommendations are shown verbatim from the last
// draw response. All transitions are awaited service calls.

import {
  AdvisorClient,
  ApiError,
  CreateOptions,
  DrawResponse,
  Placement,
  SessionDoc,
} from "./api.js";

/** What the view model needs from the client; stubs satisfy it structurally. */
export type AdvisorClientLike = Pick<
  AdvisorClient,
  "createGame" | "submitDraw" | "commitPlacement" | "getState"
>;

export type Phase = "setup" | "playing" | "won" | "eliminated";

export interface UiSessionView {
  phase: Phase;
  session: SessionDoc | null;
  boundaries: number[] | null;
  lastDraw: DrawResponse | null;
  banner: string | null;
  inputError: string | null;
  busy: boolean;
}

const INITIAL_VIEW: UiSessionView = {
  phase: "setup",
  session: null,
  boundaries: null,
  lastDraw: null,
  banner: null,
  inputError: null,
  busy: false,
};

function phaseOf(session: SessionDoc): Phase {
  if (session.status === "Won") return "won";
  if (session.status === "Eliminated") return "eliminated";
  return "playing";
}

export class AdvisorApp {
  view: UiSessionView = INITIAL_VIEW;

  constructor(
    private readonly client: AdvisorClientLike,
    private readonly onChange: (view: UiSessionView) => void = () => {},
  ) {}

  private update(patch: Partial<UiSessionView>): void {
    this.view = { ...this.view, ...patch };
    this.onChange(this.view);
  }

  async newGame(options: CreateOptions): Promise<void> {
    this.update({ busy: true, banner: null, inputError: null });
    try {
      const created = await this.client.createGame(options);
      this.update({
        phase: "playing",
        session: created,
        boundaries: created.boundaries,
        lastDraw: null,
        banner: null,
        inputError: null,
        busy: false,
      });
    } catch (error) {
      this.update({ busy: false, banner: describeError(error) });
    }
  }

  /** Submit a typed number; non-integers outside 0..999 never reach the wire. */
  async enterDraw(raw: number | string): Promise<void> {
    const session = this.view.session;
    if (session === null || this.view.phase !== "playing") return;
    const text = typeof raw === "string" ? raw.trim() : String(raw);
    const value = Number(text);
    if (!/^\d+$/.test(text) || !Number.isInteger(value) || value < 0 || value > 999) {
      this.update({ inputError: "enter a whole number between 0 and 999" });
      return;
    }
    this.update({ busy: true, inputError: null, banner: null });
    try {
      const draw = await this.client.submitDraw(session.variant, session.id, value);
      this.update({
        session: draw.session,
        lastDraw: draw,
        phase: phaseOf(draw.session),
        busy: false,
      });
    } catch (error) {
      this.update({ busy: false, banner: describeError(error) });
    }
  }

  /** Commit any feasible slot/cell; the recommendation is advice, not law. */
  async commit(placement: Placement): Promise<void> {
    const session = this.view.session;
    if (session === null || this.view.phase !== "playing") return;
    this.update({ busy: true, banner: null });
    try {
      const updated = await this.client.commitPlacement(session.variant, session.id, placement);
      this.update({
        session: updated,
        lastDraw: null,
        phase: phaseOf(updated),
        busy: false,
      });
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // stale or infeasible: surface the conflict and resync the board
        let fresh = session;
        try {
          fresh = await this.client.getState(session.variant, session.id);
        } catch {
          // keep the last known state if the refetch also fails
        }
        this.update({
          busy: false,
          banner: `placement rejected: ${error.message}`,
          session: fresh,
          phase: phaseOf(fresh),
        });
        return;
      }
      this.update({ busy: false, banner: describeError(error) });
    }
  }

  reset(): void {
    this.view = INITIAL_VIEW;
    this.onChange(this.view);
  }
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return error.status === 0
      ? "cannot reach the advisor service"
      : `${error.code}: ${error.message}`;
  }
  return String(error);
}
