import { describe, expect, it } from "vitest";

import type { SweepRow } from "../src/api.js";
import { availableEtas, buildHeatmap, nearestEta, probabilityColor } from "../src/heatmap.js";

function grid(etas: number[], alphas: number[]): SweepRow[] {
  const rows: SweepRow[] = [];
  for (const a0 of alphas) {
    for (const a1 of alphas) {
      for (const eta of etas) {
        rows.push({ alpha0: a0, alpha1: a1, eta, beta: null,
                    p_win: eta === 0.5 ? 0.5 : a0 + a1 + eta, gain: 0 });
      }
    }
  }
  return rows;
}

describe("heatmap slicing", () => {
  it("keeps server values untouched", () => {
    const rows = grid([0, 0.5, 1], [0, 0.3, 0.6]);
    const data = buildHeatmap(rows, 1);
    expect(data.cells[1]![2]!).toBe(0.3 + 0.6 + 1);
    expect(data.alpha0Values).toEqual([0, 0.3, 0.6]);
  });

  it("renders the even-mixture slice as a flat half surface", () => {
    const rows = grid([0, 0.5, 1], [0, 0.3, 0.6]);
    const data = buildHeatmap(rows, 0.5);
    for (const row of data.cells) {
      for (const value of row) {
        expect(value).toBe(0.5);
      }
    }
  });

  it("lists and snaps eta values", () => {
    const rows = grid([0, 0.5, 1], [0, 0.3]);
    expect(availableEtas(rows)).toEqual([0, 0.5, 1]);
    expect(nearestEta(rows, 0.42)).toBe(0.5);
    expect(nearestEta(rows, 0.9)).toBe(1);
  });

  it("rejects malformed sweeps", () => {
    const rows = grid([0.5], [0, 0.3]);
    expect(() => buildHeatmap(rows, 0.25)).toThrow(/no sweep rows/);
    expect(() => buildHeatmap(rows.slice(0, 3), 0.5)).toThrow(/hole/);
  });
});

describe("color scale", () => {
  it("is white at the fair point and saturated at the ends", () => {
    expect(probabilityColor(0.5)).toBe("rgb(255, 255, 255)");
    expect(probabilityColor(0)).toBe("rgb(0, 0, 255)");
    expect(probabilityColor(1)).toBe("rgb(255, 0, 0)");
  });
});
