/** Builders shared by the test files. */

import { join } from "node:path";
import { fileURLToPath } from "node:url";

import type { BenchRow } from "../src/csv.js";
import { BENCH_COLUMNS } from "../src/csv.js";
import type { PhaseSpaceGrid } from "../src/swtg.js";

export const FIXTURES = fileURLToPath(new URL("./fixtures/", import.meta.url));

export const WT_FIXTURE = join(FIXTURES, "chirp_wt.swtg");
export const SWT_FIXTURE = join(FIXTURES, "chirp_swt.swtg");
export const BENCH_FIXTURE = join(FIXTURES, "bench.csv");
export const RIDGE_FIXTURE = join(FIXTURES, "ridge.json");

export interface SwtgSpec {
  nX: number;
  nK: number;
  xMin?: number;
  xMax?: number;
  kMin?: number;
  kMax?: number;
  epsilon?: number;
  sigmaX?: number;
  sigmaK?: number;
  t?: number;
  values?: ArrayLike<number>;
  magic?: string;
  version?: number;
}

/** Serialize a grid the way the solver writes its snapshot files. */
export function swtgBytes(spec: SwtgSpec): Uint8Array {
  const values = spec.values ?? new Float64Array(spec.nX * spec.nK);
  const buf = new ArrayBuffer(80 + 8 * values.length);
  const view = new DataView(buf);
  const bytes = new Uint8Array(buf);
  const magic = spec.magic ?? "SWTG";
  for (let i = 0; i < 4; i += 1) bytes[i] = magic.charCodeAt(i);
  view.setUint32(4, spec.version ?? 1, true);
  view.setUint32(8, spec.nX, true);
  view.setUint32(12, spec.nK, true);
  const header = [
    spec.xMin ?? 0,
    spec.xMax ?? 1,
    spec.kMin ?? -1,
    spec.kMax ?? 1,
    spec.epsilon ?? 0.1,
    spec.sigmaX ?? 0,
    spec.sigmaK ?? 0,
    spec.t ?? 0,
  ];
  for (let i = 0; i < 8; i += 1) view.setFloat64(16 + 8 * i, header[i], true);
  for (let i = 0; i < values.length; i += 1) {
    view.setFloat64(80 + 8 * i, values[i], true);
  }
  return bytes;
}

/** In-memory grid for renderer tests, no file round trip. */
export function syntheticGrid(spec: SwtgSpec): PhaseSpaceGrid {
  const values = spec.values ?? new Float64Array(spec.nX * spec.nK);
  return {
    nX: spec.nX,
    nK: spec.nK,
    xMin: spec.xMin ?? 0,
    xMax: spec.xMax ?? 1,
    kMin: spec.kMin ?? -1,
    kMax: spec.kMax ?? 1,
    epsilon: spec.epsilon ?? 0.1,
    sigmaX: spec.sigmaX ?? 0,
    sigmaK: spec.sigmaK ?? 0,
    t: spec.t ?? 0,
    values: Float64Array.from(values as ArrayLike<number>),
  };
}

/** Bench row with every column present; override what the test cares about. */
export function benchRow(overrides: Partial<BenchRow>): BenchRow {
  const row = {} as BenchRow;
  for (const name of BENCH_COLUMNS) row[name] = 1;
  Object.assign(row, overrides);
  if (overrides.epsilon !== undefined && overrides.inv_epsilon === undefined) {
    row.inv_epsilon = 1 / overrides.epsilon;
  }
  return row;
}

export function benchSweep(
  epsilons: readonly number[],
  value: (epsilon: number) => number,
  column: keyof BenchRow = "t_total_swt",
): BenchRow[] {
  return epsilons.map((epsilon) => benchRow({ epsilon, [column]: value(epsilon) }));
}

/** All values of an attribute, in document order. */
export function attrValues(svg: string, cls: string, attr: string): string[] {
  const out: string[] = [];
  const pattern = new RegExp(`<[^>]*class="${cls}"[^>]*>`, "g");
  for (const tag of svg.match(pattern) ?? []) {
    const m = tag.match(new RegExp(`${attr}="([^"]*)"`));
    if (m) out.push(m[1]);
  }
  return out;
}

/** Text content of every element with the given class. */
export function textValues(svg: string, cls: string): string[] {
  const out: string[] = [];
  const pattern = new RegExp(`<text[^>]*class="${cls}"[^>]*>([^<]*)</text>`, "g");
  let m: RegExpExecArray | null;
  while ((m = pattern.exec(svg)) !== null) out.push(m[1]);
  return out;
}
