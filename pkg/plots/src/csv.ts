/**
 * Readers for the two text formats the solver emits: bench sweep tables and
 * density profiles.
 */

import { readFileSync } from "node:fs";

import { FormatError } from "./errors.js";

export const BENCH_COLUMNS = [
  "epsilon",
  "inv_epsilon",
  "t_sample",
  "t_wt",
  "t_smooth",
  "t_seed",
  "t_advance",
  "t_reconstruct",
  "t_total_swt",
  "t_reference",
  "particles",
  "n_x",
  "n_k",
  "l1_rel",
  "coverage_gap",
] as const;

export type BenchColumn = (typeof BENCH_COLUMNS)[number];

export type BenchRow = Record<BenchColumn, number>;

function parseNumber(cell: string, name: string, lineNo: number): number {
  const value = Number(cell);
  if (cell.trim() === "" || Number.isNaN(value)) {
    throw new FormatError(`${name}:${lineNo}: bad number ${JSON.stringify(cell)}`);
  }
  return value;
}

export function parseBenchCsv(text: string, name = "<text>"): BenchRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    throw new FormatError(`${name}: empty bench CSV`);
  }
  const expectHeader = BENCH_COLUMNS.join(",");
  if (lines[0].trim() !== expectHeader) {
    throw new FormatError(`${name}: unexpected header ${JSON.stringify(lines[0])}`);
  }
  const rows: BenchRow[] = [];
  for (let li = 1; li < lines.length; li += 1) {
    const cells = lines[li].split(",");
    if (cells.length !== BENCH_COLUMNS.length) {
      throw new FormatError(
        `${name}:${li + 1}: expected ${BENCH_COLUMNS.length} cells, got ${cells.length}`,
      );
    }
    const row = {} as BenchRow;
    for (let ci = 0; ci < BENCH_COLUMNS.length; ci += 1) {
      row[BENCH_COLUMNS[ci]] = parseNumber(cells[ci], name, li + 1);
    }
    rows.push(row);
  }
  return rows;
}

export function readBenchCsvFile(path: string): BenchRow[] {
  return parseBenchCsv(readFileSync(path, "utf8"), path);
}

export interface DensityProfile {
  readonly kind: string;
  readonly t: number;
  readonly epsilon: number;
  readonly sigmaX: number;
  readonly x: Float64Array;
  readonly values: Float64Array;
}

/**
 * Density CSV: a `#`-prefixed metadata line of key=value tokens, an
 * `x,value` header, then one sample per line.
 */
export function parseDensityCsv(text: string, name = "<text>"): DensityProfile {
  let kind = "norm_density";
  let t = 0;
  let epsilon = 1;
  let sigmaX = 0;
  const xs: number[] = [];
  const vals: number[] = [];
  const lines = text.split(/\r?\n/);
  for (let li = 0; li < lines.length; li += 1) {
    const line = lines[li].trim();
    if (line === "" || line === "x,value") continue;
    if (line.startsWith("#")) {
      for (const token of line.slice(1).trim().split(/\s+/)) {
        const eq = token.indexOf("=");
        if (eq < 0) continue;
        const key = token.slice(0, eq);
        const value = token.slice(eq + 1);
        if (key === "kind") kind = value;
        else if (key === "t") t = parseNumber(value, name, li + 1);
        else if (key === "epsilon") epsilon = parseNumber(value, name, li + 1);
        else if (key === "sigma_x") sigmaX = parseNumber(value, name, li + 1);
      }
      continue;
    }
    const cells = line.split(",");
    if (cells.length !== 2) {
      throw new FormatError(`${name}:${li + 1}: expected 'x,value', got ${JSON.stringify(line)}`);
    }
    xs.push(parseNumber(cells[0], name, li + 1));
    vals.push(parseNumber(cells[1], name, li + 1));
  }
  if (xs.length < 2) {
    throw new FormatError(`${name}: fewer than two samples`);
  }
  return {
    kind,
    t,
    epsilon,
    sigmaX,
    x: Float64Array.from(xs),
    values: Float64Array.from(vals),
  };
}

export function readDensityCsvFile(path: string): DensityProfile {
  return parseDensityCsv(readFileSync(path, "utf8"), path);
}
