import { describe, expect, it } from "vitest";

import { DataError } from "../src/errors.js";
import { fitSlope } from "../src/fit.js";

const EPS = [0.125, 0.0625, 0.03125, 0.015625, 0.0078125];

describe("fitSlope", () => {
  it("recovers an exact cubic with zero width", () => {
    const fit = fitSlope(EPS, EPS.map((e) => Math.pow(1 / e, 3)));
    expect(fit.slope).toBeCloseTo(3, 12);
    expect(fit.ciHalfWidth).toBeCloseTo(0, 9);
  });

  it("recovers an exact quadratic with a prefactor", () => {
    const fit = fitSlope(EPS, EPS.map((e) => 7.5 / (e * e)));
    expect(fit.slope).toBeCloseTo(2, 12);
    expect(fit.intercept).toBeCloseTo(Math.log(7.5), 10);
  });

  it("fits constants to slope zero", () => {
    const fit = fitSlope(EPS, EPS.map(() => 4.2));
    expect(fit.slope).toBeCloseTo(0, 12);
  });

  it("stays near the truth under mild noise", () => {
    // deterministic +-1% wiggle
    const noisy = EPS.map((e, i) => Math.pow(1 / e, 2) * (1 + 0.01 * Math.sin(3 * i)));
    const fit = fitSlope(EPS, noisy);
    expect(Math.abs(fit.slope - 2)).toBeLessThan(0.1);
    expect(fit.ciHalfWidth).toBeGreaterThan(0);
  });

  it("rejects short inputs", () => {
    expect(() => fitSlope([0.5, 0.25], [1, 2])).toThrow(/at least 3 pairs/);
  });

  it("rejects mismatched lengths", () => {
    expect(() => fitSlope([0.5, 0.25, 0.125], [1, 2])).toThrow(DataError);
  });

  it("rejects non-positive values and epsilons", () => {
    expect(() => fitSlope([0.5, 0.25, 0.125], [1, 0, 2])).toThrow(/positive values/);
    expect(() => fitSlope([0.5, -0.25, 0.125], [1, 1, 2])).toThrow(/epsilon must be positive/);
  });

  it("rejects a degenerate epsilon set", () => {
    expect(() => fitSlope([0.5, 0.5, 0.5], [1, 2, 3])).toThrow(/distinct epsilons/);
  });
});
