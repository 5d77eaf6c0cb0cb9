import { describe, expect, it } from "vitest";

import {
  ApiError,
  CreatedSession,
  DrawResponse,
  SessionDoc,
} from "../src/api.js";
import { AdvisorClientLike } from "../src/state.js";
import { mountApp } from "./helpers.js";

function listSession(overrides: Partial<SessionDoc> = {}): SessionDoc {
  return {
    id: "s1",
    variant: "list",
    status: "InProgress",
    strategy: "rt",
    state: { n: 3, slots: [null, null, null], history: [] },
    draws_submitted: 0,
    elimination_turn: null,
    win_prob: 0.5192837465564738,
    correct_so_far: 1.0,
    pending_draw: null,
    created_at: "2026-01-01T00:00:00+00:00",
    ...overrides,
  };
}

function stub(overrides: Partial<AdvisorClientLike>): AdvisorClientLike {
  const base: AdvisorClientLike = {
    createGame: async () =>
      ({ ...listSession(), boundaries: [0, 3 / 11, 8 / 11, 1] }) as CreatedSession,
    submitDraw: async () => {
      throw new Error("not stubbed");
    },
    commitPlacement: async () => {
      throw new Error("not stubbed");
    },
    getState: async () => listSession(),
  };
  return { ...base, ...overrides };
}

describe("draw entry validation", () => {
  it("rejects out-of-range and non-integer input without a network call", async () => {
    let called = false;
    const { app, root } = mountApp(
      stub({
        submitDraw: async () => {
          called = true;
          throw new Error("should not be reached");
        },
      }),
    );
    await app.newGame({ variant: "list", n: 3, strategy: "rt" });
    for (const bad of ["1000", "-3", "3.5", "abc", ""]) {
      await app.enterDraw(bad);
      expect(root.querySelector(".input-error")?.textContent).toContain("0 and 999");
    }
    expect(called).toBe(false);
  });
});

describe("recommendation rendering", () => {
  it("highlights exactly the rank-1 slot from the response", async () => {
    const draw: DrawResponse = {
      value: 300,
      normalized: 0.3005,
      feasible_slots: [1, 2, 3],
      recommendations: [
        { slot: 1, win_prob: 0.3, correct_so_far: 0.4, rank: 2 },
        { slot: 2, win_prob: 0.35, correct_so_far: 0.45, rank: 1 },
        { slot: 3, win_prob: 0.1, correct_so_far: 0.2, rank: 3 },
      ],
      eliminated: false,
      autoplaced: false,
      session: listSession({ draws_submitted: 1 }),
    };
    const { app, root } = mountApp(stub({ submitDraw: async () => draw }));
    await app.newGame({ variant: "list", n: 3, strategy: "rt" });
    await app.enterDraw("300");
    const best = root.querySelectorAll("button.commit.best");
    expect(best.length).toBe(1);
    expect((best[0] as HTMLElement).dataset.slot).toBe("2");
    expect(best[0].querySelector(".win-prob")?.getAttribute("data-win-prob")).toBe("0.35");
  });
});

describe("conflict handling", () => {
  it("shows a banner and refetches state on a stale placement", async () => {
    let refetched = false;
    const { app, root } = mountApp(
      stub({
        commitPlacement: async () => {
          throw new ApiError(409, "stale_placement", "no uncommitted draw");
        },
        getState: async () => {
          refetched = true;
          return listSession({ draws_submitted: 2 });
        },
        submitDraw: async () => ({
          value: 1,
          normalized: 0.0015,
          feasible_slots: [1],
          recommendations: [{ slot: 1, win_prob: 0.1, correct_so_far: 0.1, rank: 1 }],
          eliminated: false,
          autoplaced: false,
          session: listSession({ draws_submitted: 1 }),
        }),
      }),
    );
    await app.newGame({ variant: "list", n: 3, strategy: "rt" });
    await app.enterDraw("1");
    await app.commit({ slot: 1 });
    expect(root.querySelector(".banner")?.textContent).toContain("placement rejected");
    expect(refetched).toBe(true);
    expect(app.view.session?.draws_submitted).toBe(2);
  });

  it("shows a connection banner when the service is unreachable", async () => {
    const { app, root } = mountApp(
      stub({
        createGame: async () => {
          throw new ApiError(0, "unreachable", "connect ECONNREFUSED");
        },
      }),
    );
    await app.newGame({ variant: "list", n: 5, strategy: "rt" });
    expect(root.querySelector(".banner")?.textContent).toContain("cannot reach");
    expect(app.view.phase).toBe("setup");
  });
});
