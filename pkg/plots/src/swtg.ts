/**
 * Reader for the SWTG phase-space snapshot format.
 *
 * Little-endian layout: 4-byte magic "SWTG", three uint32 fields (version,
 * n_x, n_k), eight float64 fields (x_min, x_max, k_min, k_max, epsilon,
 * sigma_x, sigma_k, t), then n_x*n_k float64 values with x as the slow index.
 * The x axis is periodic so x_max is exclusive; the k axis stores both
 * endpoints.
 */

import { readFileSync } from "node:fs";

import { FormatError } from "./errors.js";

export interface PhaseSpaceGrid {
  readonly nX: number;
  readonly nK: number;
  readonly xMin: number;
  readonly xMax: number;
  readonly kMin: number;
  readonly kMax: number;
  readonly epsilon: number;
  readonly sigmaX: number;
  readonly sigmaK: number;
  readonly t: number;
  /** Row-major samples: values[i * nK + j] is the transform at (x_i, k_j). */
  readonly values: Float64Array;
}

const HEADER_BYTES = 80;
const VERSION = 1;

export function readSwtg(bytes: Uint8Array, name = "<bytes>"): PhaseSpaceGrid {
  if (bytes.byteLength < HEADER_BYTES) {
    throw new FormatError(
      `${name}: truncated header, ${bytes.byteLength} bytes of ${HEADER_BYTES}`,
    );
  }
  const magic = String.fromCharCode(bytes[0], bytes[1], bytes[2], bytes[3]);
  if (magic !== "SWTG") {
    throw new FormatError(`${name}: bad magic ${JSON.stringify(magic)}, expected "SWTG"`);
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  const version = view.getUint32(4, true);
  if (version !== VERSION) {
    throw new FormatError(`${name}: unsupported version ${version}`);
  }
  const nX = view.getUint32(8, true);
  const nK = view.getUint32(12, true);
  if (nX < 1 || nK < 1) {
    throw new FormatError(`${name}: empty grid ${nX}x${nK}`);
  }
  const header: number[] = [];
  for (let i = 0; i < 8; i += 1) {
    header.push(view.getFloat64(16 + 8 * i, true));
  }
  const [xMin, xMax, kMin, kMax, epsilon, sigmaX, sigmaK, t] = header;
  const expected = HEADER_BYTES + 8 * nX * nK;
  if (bytes.byteLength !== expected) {
    throw new FormatError(
      `${name}: ${bytes.byteLength} bytes for a ${nX}x${nK} grid, expected ${expected}`,
    );
  }
  const values = new Float64Array(nX * nK);
  for (let i = 0; i < values.length; i += 1) {
    values[i] = view.getFloat64(HEADER_BYTES + 8 * i, true);
  }
  return { nX, nK, xMin, xMax, kMin, kMax, epsilon, sigmaX, sigmaK, t, values };
}

export function readSwtgFile(path: string): PhaseSpaceGrid {
  return readSwtg(readFileSync(path), path);
}

/** Cell centers along x; the right endpoint is excluded. */
export function gridXs(grid: PhaseSpaceGrid): Float64Array {
  const dx = (grid.xMax - grid.xMin) / grid.nX;
  const xs = new Float64Array(grid.nX);
  for (let i = 0; i < grid.nX; i += 1) xs[i] = grid.xMin + i * dx;
  return xs;
}

/** Sample points along k; both endpoints are included. */
export function gridKs(grid: PhaseSpaceGrid): Float64Array {
  const ks = new Float64Array(grid.nK);
  const dk = grid.nK > 1 ? (grid.kMax - grid.kMin) / (grid.nK - 1) : 0;
  for (let j = 0; j < grid.nK; j += 1) ks[j] = grid.kMin + j * dk;
  return ks;
}

export function gridRange(grid: PhaseSpaceGrid): { min: number; max: number } {
  let min = Infinity;
  let max = -Infinity;
  for (const v of grid.values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  return { min, max };
}
