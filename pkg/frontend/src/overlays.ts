/**
 * Bound curves re-evaluated from parameters carried in the JSON
 * summaries.  Nothing here re-derives physics from raw spectra; these
 * are the closed-form curves the producer serialized the inputs for.
 */

export function varianceBound(meanVariance: number, bondCount: number): number {
  return 1 - meanVariance / Math.log(bondCount);
}

/** Fitted model 1 - alpha B^beta / ln B sampled over [bLo, bHi]. */
export function fitCurve(alpha: number, beta: number, bLo: number, bHi: number,
                         samples = 160): { b: number[]; value: number[] } {
  const b: number[] = [];
  const value: number[] = [];
  const l0 = Math.log(bLo);
  const l1 = Math.log(bHi);
  for (let i = 0; i < samples; i++) {
    const bb = Math.exp(l0 + ((l1 - l0) * i) / (samples - 1));
    b.push(bb);
    value.push(1 - (alpha * bb ** beta) / Math.log(bb));
  }
  return { b, value };
}

/**
 * Large-size Neumann-star prediction for the bond-vector entropy.
 * With B = 2|E| the prediction (C + ln 2)/(ln|E| + ln 2) is exactly
 * (C + ln 2)/ln B.
 */
export function starPredictionCurve(cNeumann: number, bLo: number, bHi: number,
                                    samples = 160): { b: number[]; value: number[] } {
  const b: number[] = [];
  const value: number[] = [];
  const l0 = Math.log(bLo);
  const l1 = Math.log(bHi);
  for (let i = 0; i < samples; i++) {
    const bb = Math.exp(l0 + ((l1 - l0) * i) / (samples - 1));
    b.push(bb);
    value.push((cNeumann + Math.LN2) / Math.log(bb));
  }
  return { b, value };
}

/** Equal-width histogram of samples on [0, hi], normalized as a density. */
export function histogram(samples: number[], bins: number, hi: number):
    { centers: number[]; density: number[]; width: number } {
  const width = hi / bins;
  const counts = new Array(bins).fill(0);
  let inside = 0;
  for (const v of samples) {
    if (v >= 0 && v < hi) {
      counts[Math.floor(v / width)] += 1;
      inside += 1;
    }
  }
  const centers = counts.map((_, i) => (i + 0.5) * width);
  const density = counts.map((c) => (inside ? c / (samples.length * width) : 0));
  return { centers, density, width };
}
