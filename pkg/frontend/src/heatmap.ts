/** Heatmap of the win probability over Alice's angles at a chosen eta.
 *
 * Cells carry the server's sweep values untouched; this module only slices
 * and colors them.
 */

import type { SweepRow } from "./api.js";

export interface HeatmapData {
  alpha0Values: number[];
  alpha1Values: number[];
  eta: number;
  /** cells[i][j] = p_win at (alpha0Values[i], alpha1Values[j]). */
  cells: number[][];
}

/** Distinct eta values present in a sweep, ascending. */
export function availableEtas(rows: SweepRow[]): number[] {
  const values = new Set<number>();
  for (const row of rows) {
    if (row.eta !== null) {
      values.add(row.eta);
    }
  }
  return [...values].sort((a, b) => a - b);
}

export function nearestEta(rows: SweepRow[], requested: number): number {
  const etas = availableEtas(rows);
  if (etas.length === 0) {
    throw new Error("sweep has no eta axis");
  }
  let best = etas[0]!;
  for (const eta of etas) {
    if (Math.abs(eta - requested) < Math.abs(best - requested)) {
      best = eta;
    }
  }
  return best;
}

export function buildHeatmap(rows: SweepRow[], eta: number): HeatmapData {
  const slice = rows.filter((row) => row.eta === eta);
  if (slice.length === 0) {
    throw new Error(`no sweep rows at eta=${eta}`);
  }
  const alpha0Values = [...new Set(slice.map((row) => row.alpha0))].sort((a, b) => a - b);
  const alpha1Values = [...new Set(slice.map((row) => row.alpha1))].sort((a, b) => a - b);
  const lookup = new Map<string, number>();
  for (const row of slice) {
    lookup.set(`${row.alpha0}|${row.alpha1}`, row.p_win);
  }
  const cells = alpha0Values.map((a0) =>
    alpha1Values.map((a1) => {
      const value = lookup.get(`${a0}|${a1}`);
      if (value === undefined) {
        throw new Error(`sweep grid has a hole at (${a0}, ${a1})`);
      }
      return value;
    }),
  );
  return { alpha0Values, alpha1Values, eta, cells };
}

/** Blue (Bob losing) through white (fair) to red (Bob winning). */
export function probabilityColor(p: number): string {
  const clamped = Math.max(0, Math.min(1, p));
  const toward = clamped < 0.5 ? clamped / 0.5 : (1 - clamped) / 0.5;
  const intensity = Math.round(255 * toward);
  if (clamped < 0.5) {
    return `rgb(${intensity}, ${intensity}, 255)`;
  }
  return `rgb(255, ${intensity}, ${intensity})`;
}
