import { describe, expect, it } from "vitest";

import { readBenchCsvFile } from "../src/csv.js";
import { DataError } from "../src/errors.js";
import { renderScaling, scalingFit } from "../src/scaling.js";
import { BENCH_FIXTURE, benchSweep, textValues } from "./helpers.js";

const EPS = [0.125, 0.0625, 0.03125, 0.015625, 0.0078125];

// slopes the solver's own regression reports for the committed sweep fixture;
// the annotations must agree with them at display precision
const FIXTURE_SLOPES = {
  t_total_swt: "1.48",
  t_reference: "3.42",
  particles: "1.10",
} as const;

describe("renderScaling", () => {
  it("annotates an exact cubic as slope=3.00", () => {
    const rows = benchSweep(EPS, (e) => Math.pow(1 / e, 3));
    const svg = renderScaling(rows, "t_total_swt");
    expect(svg).toContain("slope=3.00");
    expect(textValues(svg, "slope")[0]).toMatch(/^slope=3\.00±0\.00$/);
  });

  it.each(Object.entries(FIXTURE_SLOPES))(
    "matches the solver's fitted %s slope at two decimals",
    (column, expected) => {
      const rows = readBenchCsvFile(BENCH_FIXTURE);
      const fit = scalingFit(rows, column as keyof typeof FIXTURE_SLOPES);
      expect(fit.slope.toFixed(2)).toBe(expected);
      const svg = renderScaling(rows, column as keyof typeof FIXTURE_SLOPES);
      expect(svg).toContain(`slope=${expected}`);
    },
  );

  it("draws every sweep point and one fitted line", () => {
    const rows = readBenchCsvFile(BENCH_FIXTURE);
    const svg = renderScaling(rows, "particles");
    expect(svg.match(/class="pt"/g)).toHaveLength(rows.length);
    expect(svg.match(/class="fit"/g)).toHaveLength(1);
  });

  it("needs at least four rows", () => {
    const rows = benchSweep(EPS.slice(0, 3), (e) => 1 / e);
    expect(() => renderScaling(rows, "t_total_swt")).toThrow(/at least 4 rows/);
  });

  it("refuses non-positive data for the log axis", () => {
    const rows = benchSweep(EPS, (e) => 1 / e);
    rows[2].t_total_swt = 0;
    expect(() => renderScaling(rows, "t_total_swt")).toThrow(DataError);
    expect(() => renderScaling(rows, "t_total_swt")).toThrow(/non-positive/);
  });

  it("is deterministic and leaves the rows untouched", () => {
    const rows = benchSweep(EPS, (e) => Math.pow(1 / e, 2));
    const copy = rows.map((row) => ({ ...row }));
    const first = renderScaling(rows, "t_total_swt");
    expect(renderScaling(rows, "t_total_swt")).toBe(first);
    expect(rows).toEqual(copy);
  });

  it("embeds the content digest and tracks input changes", () => {
    const rows = benchSweep(EPS, (e) => Math.pow(1 / e, 2));
    const a = renderScaling(rows, "t_total_swt");
    const hash = a.match(/<metadata>sha256:([0-9a-f]{12})<\/metadata>/)?.[1];
    expect(hash).toBeDefined();
    expect(a).toContain(`sha256:${hash}`);
    rows[0].t_total_swt *= 1.001;
    const b = renderScaling(rows, "t_total_swt");
    expect(b).not.toContain(`sha256:${hash}`);
  });
});
