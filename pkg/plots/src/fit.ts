/** Ordinary least squares on log-log pairs, for cost and size scaling laws. */

import { DataError } from "./errors.js";

export interface SlopeFit {
  readonly slope: number;
  readonly intercept: number;
  readonly ciHalfWidth: number;
}

// two-sided 97.5% Student-t quantiles for df = 1..20; beyond that the
// normal quantile is within half a percent
const T_975 = [
  12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
  2.201, 2.179, 2.16, 2.145, 2.131, 2.12, 2.11, 2.101, 2.093, 2.086,
];

function tQuantile(df: number): number {
  return df <= T_975.length ? T_975[df - 1] : 1.96;
}

/**
 * Fit value = C * (1/epsilon)^slope by regressing log(value) on
 * log(1/epsilon).  Returns the slope with a 95% confidence half-width.
 */
export function fitSlope(epsilons: readonly number[], values: readonly number[]): SlopeFit {
  if (epsilons.length !== values.length) {
    throw new DataError(
      `slope fit got ${epsilons.length} epsilons for ${values.length} values`,
    );
  }
  if (epsilons.length < 3) {
    throw new DataError(`slope fit needs at least 3 pairs, got ${epsilons.length}`);
  }
  const n = epsilons.length;
  const xs = new Float64Array(n);
  const ys = new Float64Array(n);
  for (let i = 0; i < n; i += 1) {
    if (!(epsilons[i] > 0)) {
      throw new DataError(`epsilon must be positive, got ${epsilons[i]}`);
    }
    if (!(values[i] > 0)) {
      throw new DataError(`slope fit needs positive values, got ${values[i]}`);
    }
    xs[i] = -Math.log(epsilons[i]);
    ys[i] = Math.log(values[i]);
  }
  let xBar = 0;
  let yBar = 0;
  for (let i = 0; i < n; i += 1) {
    xBar += xs[i];
    yBar += ys[i];
  }
  xBar /= n;
  yBar /= n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i += 1) {
    sxx += (xs[i] - xBar) * (xs[i] - xBar);
    sxy += (xs[i] - xBar) * (ys[i] - yBar);
  }
  if (sxx === 0) {
    throw new DataError("slope fit needs at least two distinct epsilons");
  }
  const slope = sxy / sxx;
  const intercept = yBar - slope * xBar;
  let sse = 0;
  for (let i = 0; i < n; i += 1) {
    const r = ys[i] - (intercept + slope * xs[i]);
    sse += r * r;
  }
  const df = n - 2;
  const se = Math.sqrt(sse / df / sxx);
  return { slope, intercept, ciHalfWidth: tQuantile(df) * se };
}
