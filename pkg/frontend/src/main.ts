/** Browser entry point: wires the session service to the page.
 *
 * One action is in flight at a time (controls disable while waiting), every
 * displayed probability is fetched from the service, and the page state is
 * rebuilt from server responses only.
 */

import { ApiError, QmontyClient, type BobDecision, type SweepRow } from "./api.js";
import { formatGain, formatProbability } from "./format.js";
import { availableEtas, buildHeatmap, nearestEta, probabilityColor } from "./heatmap.js";
import {
  applyError,
  applyServerView,
  beginAction,
  initialState,
  type UiGameState,
} from "./state.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8000";

const client = new QmontyClient(SERVICE_URL);

let state: UiGameState = initialState;
let sweepCache: SweepRow[] | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function sliderValue(id: string): number {
  return Number(el<HTMLInputElement>(id).value);
}

async function runAction(action: () => Promise<void>): Promise<void> {
  if (state.busy) {
    return;
  }
  state = beginAction(state);
  render();
  try {
    await action();
  } catch (error) {
    const message =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    state = applyError(state, message);
  }
  render();
}

async function newSession(): Promise<void> {
  await runAction(async () => {
    const mode = el<HTMLSelectElement>("alice-mode").value as
      | "classical-honest"
      | "quantum";
    const view = await client.createSession({
      alice_mode: mode,
      alpha0: sliderValue("alice-alpha0"),
      alpha1: sliderValue("alice-alpha1"),
      n_boxes: Number(el<HTMLInputElement>("n-boxes").value),
    });
    state = applyServerView({ ...initialState }, view);
  });
}

async function pickBox(index: number): Promise<void> {
  const session = state.session;
  if (!session) {
    return;
  }
  await runAction(async () => {
    state = applyServerView(state, await client.pick(session.id, index));
  });
}

async function decide(decision: BobDecision): Promise<void> {
  const session = state.session;
  if (!session) {
    return;
  }
  await runAction(async () => {
    state = applyServerView(state, await client.decide(session.id, decision));
  });
}

async function refreshWhatIf(): Promise<void> {
  const alpha0 = sliderValue("whatif-alpha0");
  const alpha1 = sliderValue("whatif-alpha1");
  const useQuantum = el<HTMLInputElement>("whatif-quantum").checked;
  try {
    const report = useQuantum
      ? await client.whatIfQuantum(alpha0, alpha1, sliderValue("whatif-beta"))
      : await client.whatIfMixture(alpha0, alpha1, sliderValue("whatif-eta"));
    el("whatif-pwin").textContent = formatProbability(report.p_win);
    el("whatif-gain").textContent = formatGain(report.gain);
  } catch (error) {
    el("whatif-pwin").textContent = "—";
    el("whatif-gain").textContent =
      error instanceof ApiError ? `${error.code}` : "error";
  }
}

async function refreshHeatmap(): Promise<void> {
  const banner = el("heatmap-error");
  banner.textContent = "";
  try {
    if (!sweepCache) {
      sweepCache = await client.sweep("25x25x11");
    }
    const eta = nearestEta(sweepCache, sliderValue("heatmap-eta"));
    const data = buildHeatmap(sweepCache, eta);
    el("heatmap-eta-label").textContent = `η = ${eta.toFixed(2)}`;
    const table = el<HTMLTableElement>("heatmap");
    table.innerHTML = "";
    for (let i = data.alpha0Values.length - 1; i >= 0; i -= 1) {
      const row = table.insertRow();
      for (let j = 0; j < data.alpha1Values.length; j += 1) {
        const cell = row.insertCell();
        const p = data.cells[i]![j]!;
        cell.style.backgroundColor = probabilityColor(p);
        cell.title = `α₀=${data.alpha0Values[i]!.toFixed(3)} α₁=${data.alpha1Values[j]!.toFixed(3)} → ${formatProbability(p)}`;
      }
    }
  } catch (error) {
    banner.textContent = error instanceof Error ? error.message : String(error);
  }
}

function renderBoxes(): void {
  const host = el("boxes");
  host.innerHTML = "";
  const session = state.session;
  if (!session) {
    return;
  }
  for (const box of state.boxes) {
    const button = document.createElement("button");
    button.className = "box";
    if (box.revealed) {
      button.classList.add("revealed");
      button.textContent = "∅";
    } else {
      button.textContent = String(box.index);
    }
    if (box.isCurrent) {
      button.classList.add("current");
    }
    if (box.isLocation) {
      button.classList.add("particle");
      button.textContent = "◉";
    }
    const canPick = session.phase === "placed" || session.phase === "resolved";
    const canRetarget =
      session.phase === "revealed" &&
      !session.final_round &&
      !box.revealed &&
      !box.isCurrent;
    button.disabled = state.busy || box.revealed || !(canPick || canRetarget);
    button.addEventListener("click", () => {
      if (canPick) {
        void pickBox(box.index);
      } else if (canRetarget) {
        void decide({ decision: "switch", target: box.index });
      }
    });
    host.appendChild(button);
  }
}

function renderScoreChart(): void {
  const svg = el("score-chart");
  const history = state.scoreHistory;
  const width = 360;
  const height = 80;
  if (history.length === 0) {
    svg.innerHTML = "";
    return;
  }
  const span = Math.max(1, ...history.map((s) => Math.abs(s)));
  const points = history
    .map((score, i) => {
      const x = history.length === 1 ? width : (i / (history.length - 1)) * width;
      const y = height / 2 - (score / span) * (height / 2 - 4);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  svg.innerHTML =
    `<line x1="0" y1="${height / 2}" x2="${width}" y2="${height / 2}" class="axis"/>` +
    `<polyline points="${points}" class="trace"/>`;
}

function render(): void {
  const session = state.session;
  el("status").textContent = session
    ? `phase: ${session.phase}${session.outcome ? ` — you ${session.outcome}` : ""}`
    : "no session";
  el("score").textContent = session
    ? `score ${session.score >= 0 ? "+" : ""}${session.score} (${session.wins}W/${session.losses}L over ${session.games_played} games)`
    : "";
  el("error").textContent = state.error ?? "";
  const inFinalDecision = !!session && session.phase === "revealed";
  for (const id of ["btn-stick", "btn-switch", "btn-mix", "btn-quantum"]) {
    el<HTMLButtonElement>(id).disabled = state.busy || !inFinalDecision;
  }
  el<HTMLButtonElement>("btn-new-session").disabled = state.busy;
  renderBoxes();
  renderScoreChart();
}

function wireControls(): void {
  el("btn-new-session").addEventListener("click", () => void newSession());
  el("btn-stick").addEventListener("click", () => void decide({ decision: "stick" }));
  el("btn-switch").addEventListener("click", () => void decide({ decision: "switch" }));
  el("btn-mix").addEventListener("click", () =>
    void decide({ decision: "mix", eta: sliderValue("bob-eta") }),
  );
  el("btn-quantum").addEventListener("click", () =>
    void decide({ decision: "quantum", beta: sliderValue("bob-beta") }),
  );
  for (const id of ["whatif-alpha0", "whatif-alpha1", "whatif-eta", "whatif-beta", "whatif-quantum"]) {
    el(id).addEventListener("input", () => void refreshWhatIf());
  }
  el("heatmap-eta").addEventListener("input", () => void refreshHeatmap());
}

wireControls();
render();
void refreshWhatIf();
void refreshHeatmap();
