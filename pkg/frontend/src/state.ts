/** UI game state: a pure fold over server responses.
 *
 * The reducer never invents game information: every field shown in the UI is
 * either a verbatim server value or a projection of one, so replaying a
 * recorded response transcript always rebuilds the identical state.
 */

import type { ServerView } from "./api.js";

export interface BoxView {
  index: number;
  revealed: boolean;
  isPick: boolean;
  isCurrent: boolean;
  /** Only ever true after resolution; pre-resolution responses carry no location. */
  isLocation: boolean;
}

export interface UiGameState {
  session: ServerView | null;
  boxes: BoxView[];
  /** Cumulative score after each resolved game, in order of play. */
  scoreHistory: number[];
  busy: boolean;
  error: string | null;
}

export const initialState: UiGameState = {
  session: null,
  boxes: [],
  scoreHistory: [],
  busy: false,
  error: null,
};

export function deriveBoxes(view: ServerView): BoxView[] {
  const boxes: BoxView[] = [];
  for (let index = 0; index < view.n_boxes; index += 1) {
    boxes.push({
      index,
      revealed: view.revealed.includes(index),
      isPick: view.pick === index,
      isCurrent: view.current_box === index,
      isLocation: view.location !== undefined && view.location === index,
    });
  }
  return boxes;
}

/** Merge a confirmed server response into the state. */
export function applyServerView(state: UiGameState, view: ServerView): UiGameState {
  const scoreHistory =
    view.games_played > state.scoreHistory.length
      ? [...state.scoreHistory, view.score]
      : state.scoreHistory;
  return {
    session: view,
    boxes: deriveBoxes(view),
    scoreHistory,
    busy: false,
    error: null,
  };
}

export function beginAction(state: UiGameState): UiGameState {
  return { ...state, busy: true, error: null };
}

/** Roll back to the last confirmed phase, surfacing the failure inline. */
export function applyError(state: UiGameState, message: string): UiGameState {
  return { ...state, busy: false, error: message };
}

/** Fold a recorded transcript of server responses into a final state. */
export function replayTranscript(views: ServerView[]): UiGameState {
  let state = initialState;
  for (const view of views) {
    state = applyServerView(state, view);
  }
  return state;
}

export function winCount(state: UiGameState): number {
  return state.session ? state.session.wins : 0;
}
