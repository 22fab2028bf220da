import { describe, expect, it } from "vitest";

import { histogramBars, totalFraction } from "../src/histogram.js";

describe("histogram bars", () => {
  it("renders one bar per 0..10 bin", () => {
    const bars = histogramBars(new Array(11).fill(0));
    expect(bars).toHaveLength(11);
    expect(bars.map((b) => b.score)).toEqual([0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
  });

  it("sums visually to 100% for a proper distribution", () => {
    const histogram = [0, 0, 0, 0.1, 0.15, 0.2, 0.3, 0.15, 0.05, 0.05, 0];
    const bars = histogramBars(histogram);
    expect(totalFraction(bars)).toBeCloseTo(1.0, 9);
  });

  it("labels fractions as percentages", () => {
    const bars = histogramBars([0, 0, 0, 0, 0, 0, 0.5, 0.5, 0, 0, 0]);
    expect(bars[6].percentLabel).toBe("50.0%");
    expect(bars[0].percentLabel).toBe("0.0%");
  });
});
