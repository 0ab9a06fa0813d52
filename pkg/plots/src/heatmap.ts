/**
 * Phase-space heatmap rendering.
 *
 * Position runs horizontally and wavenumber vertically, increasing upward.
 * Raw transforms carry signed interference detail, so they get a diverging
 * palette with the color axis symmetric about zero.  Smoothed transforms at
 * or past the nonnegativity threshold (sigma_x * sigma_k >= 1) get a
 * sequential palette anchored at zero instead; a symmetric axis would waste
 * half the dynamic range on values that cannot occur.
 */

import { divergingColor, sequentialColor } from "./color.js";
import { digest, float64Bytes } from "./hash.js";
import { esc, fmt, linMap, niceTicks, px, svgDocument } from "./svg.js";
import type { PhaseSpaceGrid } from "./swtg.js";
import { gridRange } from "./swtg.js";

export interface HeatmapOptions {
  title?: string;
  /** Cap on rendered cells per axis; finer grids are mean-pooled down. */
  maxCells?: number;
  /** Name of the input shown beside the content digest in the footer. */
  sourceLabel?: string;
}

const PLOT_W = 460;
const PLOT_H = 340;
const M_LEFT = 62;
const M_TOP = 48;
const M_RIGHT = 96;
const M_BOTTOM = 50;
const BAR_STRIPS = 64;

/** Digest of the header fields and raw samples that produced the figure. */
export function heatmapDigest(grid: PhaseSpaceGrid): string {
  const header = [
    grid.nX, grid.nK, grid.xMin, grid.xMax, grid.kMin, grid.kMax,
    grid.epsilon, grid.sigmaX, grid.sigmaK, grid.t,
  ];
  return digest([JSON.stringify(header), float64Bytes(grid.values)]);
}

function blockEdges(n: number, blocks: number): number[] {
  const edges: number[] = [];
  for (let b = 0; b <= blocks; b += 1) {
    edges.push(Math.round((b * n) / blocks));
  }
  return edges;
}

/** Mean-pool the grid to at most maxCells blocks per axis. */
function pool(
  grid: PhaseSpaceGrid,
  maxCells: number,
): { cells: Float64Array; ex: number[]; ek: number[] } {
  const cx = Math.min(grid.nX, maxCells);
  const ck = Math.min(grid.nK, maxCells);
  const ex = blockEdges(grid.nX, cx);
  const ek = blockEdges(grid.nK, ck);
  const cells = new Float64Array(cx * ck);
  for (let bi = 0; bi < cx; bi += 1) {
    for (let bj = 0; bj < ck; bj += 1) {
      let sum = 0;
      let count = 0;
      for (let i = ex[bi]; i < ex[bi + 1]; i += 1) {
        const base = i * grid.nK;
        for (let j = ek[bj]; j < ek[bj + 1]; j += 1) {
          sum += grid.values[base + j];
          count += 1;
        }
      }
      cells[bi * ck + bj] = count > 0 ? sum / count : 0;
    }
  }
  return { cells, ex, ek };
}

export function renderHeatmap(grid: PhaseSpaceGrid, options: HeatmapOptions = {}): string {
  const maxCells = options.maxCells ?? 160;
  const sequential = grid.sigmaX * grid.sigmaK >= 1;
  const { min, max } = gridRange(grid);

  let toUnit: (v: number) => number;
  let barLabels: [number, number, number];
  if (sequential) {
    const lo = Math.min(0, min);
    const span = Math.max(0, max) - lo;
    toUnit = (v) => (span > 0 ? (v - lo) / span : 0);
    barLabels = [lo, lo + span / 2, lo + span];
  } else {
    const amp = Math.max(Math.abs(min), Math.abs(max));
    toUnit = (v) => (amp > 0 ? (v + amp) / (2 * amp) : 0.5);
    barLabels = [-amp, 0, amp];
  }
  const colorOf = sequential ? sequentialColor : divergingColor;

  const { cells, ex, ek } = pool(grid, maxCells);
  const cx = ex.length - 1;
  const ck = ek.length - 1;

  const parts: string[] = [];
  const hash = heatmapDigest(grid);
  parts.push(`<metadata>sha256:${hash}</metadata>\n`);

  const title = options.title ?? options.sourceLabel ?? "phase-space transform";
  parts.push(
    `<text x="${M_LEFT}" y="20" font-size="13" font-weight="bold" fill="#222">` +
      `${esc(title)}</text>\n`,
  );
  const subtitle =
    `epsilon=${fmt(grid.epsilon)}  sigma=(${fmt(grid.sigmaX)}, ${fmt(grid.sigmaK)})` +
    `  t=${fmt(grid.t)}  grid ${grid.nX}x${grid.nK}`;
  parts.push(`<text x="${M_LEFT}" y="36" font-size="9.5" fill="#555">${esc(subtitle)}</text>\n`);

  // cells, run-length merged along x per wavenumber row
  for (let bj = 0; bj < ck; bj += 1) {
    const fracLo = ek[bj] / grid.nK;
    const fracHi = ek[bj + 1] / grid.nK;
    const yTop = M_TOP + PLOT_H * (1 - fracHi);
    const height = PLOT_H * (fracHi - fracLo);
    let runStart = 0;
    let runFill = colorOf(toUnit(cells[bj]));
    for (let bi = 1; bi <= cx; bi += 1) {
      const fill = bi < cx ? colorOf(toUnit(cells[bi * ck + bj])) : "";
      if (bi === cx || fill !== runFill) {
        const xLeft = M_LEFT + (PLOT_W * ex[runStart]) / grid.nX;
        const xRight = M_LEFT + (PLOT_W * ex[bi]) / grid.nX;
        parts.push(
          `<rect class="cell" x="${px(xLeft)}" y="${px(yTop)}" ` +
            `width="${px(xRight - xLeft)}" height="${px(height)}" fill="${runFill}"/>\n`,
        );
        runStart = bi;
        runFill = fill;
      }
    }
  }

  parts.push(
    `<rect x="${M_LEFT}" y="${M_TOP}" width="${PLOT_W}" height="${PLOT_H}" ` +
      `fill="none" stroke="#444" stroke-width="1"/>\n`,
  );

  const axisBottom = M_TOP + PLOT_H;
  for (const v of niceTicks(grid.xMin, grid.xMax)) {
    const cxPix = linMap(v, grid.xMin, grid.xMax, M_LEFT, M_LEFT + PLOT_W);
    parts.push(
      `<line x1="${px(cxPix)}" y1="${axisBottom}" x2="${px(cxPix)}" ` +
        `y2="${axisBottom + 4}" stroke="#444"/>\n` +
        `<text x="${px(cxPix)}" y="${axisBottom + 15}" font-size="9" fill="#333" ` +
        `text-anchor="middle">${fmt(v)}</text>\n`,
    );
  }
  for (const v of niceTicks(grid.kMin, grid.kMax)) {
    const cyPix = axisBottom - linMap(v, grid.kMin, grid.kMax, 0, PLOT_H);
    parts.push(
      `<line x1="${M_LEFT - 4}" y1="${px(cyPix)}" x2="${M_LEFT}" ` +
        `y2="${px(cyPix)}" stroke="#444"/>\n` +
        `<text x="${M_LEFT - 7}" y="${px(cyPix + 3)}" font-size="9" fill="#333" ` +
        `text-anchor="end">${fmt(v)}</text>\n`,
    );
  }
  parts.push(
    `<text x="${M_LEFT + PLOT_W / 2}" y="${axisBottom + 32}" font-size="11" ` +
      `fill="#222" text-anchor="middle">x</text>\n` +
      `<text x="16" y="${M_TOP + PLOT_H / 2}" font-size="11" fill="#222" ` +
      `text-anchor="middle" transform="rotate(-90 16 ${M_TOP + PLOT_H / 2})">k</text>\n`,
  );

  // colorbar, drawn top = high
  const barX = M_LEFT + PLOT_W + 18;
  const stripH = PLOT_H / BAR_STRIPS;
  for (let s = 0; s < BAR_STRIPS; s += 1) {
    const u = 1 - (s + 0.5) / BAR_STRIPS;
    parts.push(
      `<rect class="cbar" x="${barX}" y="${px(M_TOP + s * stripH)}" width="13" ` +
        `height="${px(stripH + 0.5)}" fill="${colorOf(u)}"/>\n`,
    );
  }
  parts.push(
    `<rect x="${barX}" y="${M_TOP}" width="13" height="${PLOT_H}" fill="none" ` +
      `stroke="#999" stroke-width="0.8"/>\n`,
  );
  const labelYs = [M_TOP + PLOT_H, M_TOP + PLOT_H / 2, M_TOP];
  for (let i = 0; i < 3; i += 1) {
    parts.push(
      `<text class="cbar-label" x="${barX + 18}" y="${px(labelYs[i] + 3)}" ` +
        `font-size="9" fill="#333">${fmt(barLabels[i])}</text>\n`,
    );
  }

  const label = options.sourceLabel ? `${esc(options.sourceLabel)}  ` : "";
  parts.push(
    `<text class="footer" x="${M_LEFT}" y="${M_TOP + PLOT_H + M_BOTTOM - 8}" ` +
      `font-size="8.5" fill="#999">${label}sha256:${hash}</text>\n`,
  );

  return svgDocument(M_LEFT + PLOT_W + M_RIGHT, M_TOP + PLOT_H + M_BOTTOM, parts.join(""));
}
