import { describe, expect, it } from "vitest";

import type { ServerView } from "../src/api.js";
import {
  applyError,
  applyServerView,
  beginAction,
  initialState,
  replayTranscript,
} from "../src/state.js";

function view(overrides: Partial<ServerView>): ServerView {
  return {
    id: "abc",
    alice_mode: "quantum",
    n_boxes: 3,
    phase: "placed",
    round: 0,
    pick: null,
    current_box: null,
    revealed: [],
    open_boxes: [0, 1, 2],
    final_round: false,
    score: 0,
    wins: 0,
    losses: 0,
    games_played: 0,
    ...overrides,
  };
}

/** A recorded one-game transcript: place, pick+reveal, resolve. */
const TRANSCRIPT: ServerView[] = [
  view({}),
  view({ phase: "revealed", round: 1, pick: 0, current_box: 0, revealed: [2],
         open_boxes: [0, 1], final_round: true }),
  view({ phase: "resolved", round: 1, pick: 0, current_box: 0, revealed: [2],
         open_boxes: [0, 1], final_round: true, outcome: "win", final_box: 1,
         location: 1, score: 1, wins: 1, losses: 0, games_played: 1 }),
];

describe("state reducer", () => {
  it("derives box views only from the response", () => {
    const state = applyServerView(initialState, TRANSCRIPT[1]!);
    expect(state.boxes.map((b) => b.revealed)).toEqual([false, false, true]);
    expect(state.boxes[0]!.isPick).toBe(true);
    expect(state.boxes.every((b) => !b.isLocation)).toBe(true);
  });

  it("marks the particle only after resolution", () => {
    const state = applyServerView(initialState, TRANSCRIPT[2]!);
    expect(state.boxes[1]!.isLocation).toBe(true);
  });

  it("extends the score history once per resolved game", () => {
    let state = replayTranscript(TRANSCRIPT);
    expect(state.scoreHistory).toEqual([1]);
    // A second resolved game appends; non-resolving views do not.
    state = applyServerView(state, view({ phase: "revealed", games_played: 1, score: 1, wins: 1 }));
    expect(state.scoreHistory).toEqual([1]);
    state = applyServerView(
      state,
      view({ phase: "resolved", outcome: "lose", location: 0, score: 0,
             wins: 1, losses: 1, games_played: 2 }),
    );
    expect(state.scoreHistory).toEqual([1, 0]);
  });

  it("replays a transcript to an identical final state", () => {
    const first = replayTranscript(TRANSCRIPT);
    const second = replayTranscript(TRANSCRIPT);
    expect(second).toEqual(first);
  });

  it("rolls back busy on error and keeps the confirmed session", () => {
    const confirmed = applyServerView(initialState, TRANSCRIPT[1]!);
    const pending = beginAction(confirmed);
    expect(pending.busy).toBe(true);
    const failed = applyError(pending, "out_of_phase: nope");
    expect(failed.busy).toBe(false);
    expect(failed.error).toContain("out_of_phase");
    expect(failed.session).toEqual(confirmed.session);
    expect(failed.boxes).toEqual(confirmed.boxes);
  });
});
