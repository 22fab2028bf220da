// Score-distribution bars for the stats screen.

export interface Bar {
  score: number;
  fraction: number;
  percentLabel: string;
}

/** One bar per 0..10 score bin; fractions come straight from the API. */
export function histogramBars(histogram: number[]): Bar[] {
  return histogram.map((fraction, score) => ({
    score,
    fraction,
    percentLabel: `${(fraction * 100).toFixed(1)}%`,
  }));
}

export function totalFraction(bars: Bar[]): number {
  return bars.reduce((sum, bar) => sum + bar.fraction, 0);
}
