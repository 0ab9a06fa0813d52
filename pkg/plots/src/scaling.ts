/**
 * Log-log scaling charts for bench sweep tables: one column against 1/epsilon,
 * scatter plus fitted power law, slope annotated to two decimals.
 */

import type { BenchColumn, BenchRow } from "./csv.js";
import { BENCH_COLUMNS } from "./csv.js";
import { DataError } from "./errors.js";
import { fitSlope } from "./fit.js";
import type { SlopeFit } from "./fit.js";
import { digest } from "./hash.js";
import { esc, fmt, linMap, logTicks, px, svgDocument } from "./svg.js";

export interface ScalingOptions {
  title?: string;
  /** Name of the input shown beside the content digest in the footer. */
  sourceLabel?: string;
}

const PLOT_W = 430;
const PLOT_H = 300;
const M_LEFT = 74;
const M_TOP = 44;
const M_RIGHT = 34;
const M_BOTTOM = 62;

export function scalingDigest(rows: readonly BenchRow[], column: BenchColumn): string {
  const flat = rows.map((row) => BENCH_COLUMNS.map((name) => row[name]));
  return digest([column, JSON.stringify(flat)]);
}

/** Fit used for the annotation; exposed so callers can cross-check values. */
export function scalingFit(rows: readonly BenchRow[], column: BenchColumn): SlopeFit {
  if (rows.length < 4) {
    throw new DataError(`scaling plot needs at least 4 rows, got ${rows.length}`);
  }
  for (const row of rows) {
    if (!(row[column] > 0)) {
      throw new DataError(
        `column ${column} has non-positive entry ${row[column]}; ` +
          `a log-log plot needs positive data`,
      );
    }
  }
  return fitSlope(rows.map((row) => row.epsilon), rows.map((row) => row[column]));
}

export function renderScaling(
  rows: readonly BenchRow[],
  column: BenchColumn,
  options: ScalingOptions = {},
): string {
  const fit = scalingFit(rows, column);
  const xs = rows.map((row) => 1 / row.epsilon);
  const ys = rows.map((row) => row[column]);

  const logX = xs.map(Math.log10);
  const logY = ys.map(Math.log10);
  const padX = 0.06 * (Math.max(...logX) - Math.min(...logX) || 1);
  const padY = 0.08 * (Math.max(...logY) - Math.min(...logY) || 1);
  const loX = Math.min(...logX) - padX;
  const hiX = Math.max(...logX) + padX;
  const loY = Math.min(...logY) - padY;
  const hiY = Math.max(...logY) + padY;

  const toPx = (lx: number) => linMap(lx, loX, hiX, M_LEFT, M_LEFT + PLOT_W);
  const toPy = (ly: number) => M_TOP + PLOT_H - linMap(ly, loY, hiY, 0, PLOT_H);

  const parts: string[] = [];
  const hash = scalingDigest(rows, column);
  parts.push(`<metadata>sha256:${hash}</metadata>\n`);

  const title = options.title ?? `${column} vs 1/epsilon`;
  parts.push(
    `<text x="${M_LEFT}" y="20" font-size="13" font-weight="bold" fill="#222">` +
      `${esc(title)}</text>\n`,
  );

  const axisBottom = M_TOP + PLOT_H;
  // x ticks at the sweep points themselves: sweeps are short and dyadic
  for (const x of xs) {
    const cx = toPx(Math.log10(x));
    parts.push(
      `<line x1="${px(cx)}" y1="${M_TOP}" x2="${px(cx)}" y2="${axisBottom}" ` +
        `stroke="#eee"/>\n` +
        `<line x1="${px(cx)}" y1="${axisBottom}" x2="${px(cx)}" y2="${axisBottom + 4}" ` +
        `stroke="#444"/>\n` +
        `<text x="${px(cx)}" y="${axisBottom + 16}" font-size="9" fill="#333" ` +
        `text-anchor="middle">${fmt(x)}</text>\n`,
    );
  }
  for (const y of logTicks(Math.pow(10, loY), Math.pow(10, hiY))) {
    const cy = toPy(Math.log10(y));
    parts.push(
      `<line x1="${M_LEFT}" y1="${px(cy)}" x2="${M_LEFT + PLOT_W}" y2="${px(cy)}" ` +
        `stroke="#eee"/>\n` +
        `<line x1="${M_LEFT - 4}" y1="${px(cy)}" x2="${M_LEFT}" y2="${px(cy)}" ` +
        `stroke="#444"/>\n` +
        `<text x="${M_LEFT - 7}" y="${px(cy + 3)}" font-size="9" fill="#333" ` +
        `text-anchor="end">${fmt(y)}</text>\n`,
    );
  }
  parts.push(
    `<rect x="${M_LEFT}" y="${M_TOP}" width="${PLOT_W}" height="${PLOT_H}" ` +
      `fill="none" stroke="#444" stroke-width="1"/>\n`,
  );

  // fitted line in log space, drawn under the points
  const lnToLog10 = Math.LN10;
  const lineY = (lx: number) => (fit.intercept + fit.slope * lx * lnToLog10) / lnToLog10;
  const xA = Math.min(...logX) - padX / 2;
  const xB = Math.max(...logX) + padX / 2;
  parts.push(
    `<line class="fit" x1="${px(toPx(xA))}" y1="${px(toPy(lineY(xA)))}" ` +
      `x2="${px(toPx(xB))}" y2="${px(toPy(lineY(xB)))}" stroke="#c0392b" ` +
      `stroke-width="1.6"/>\n`,
  );
  for (let i = 0; i < xs.length; i += 1) {
    parts.push(
      `<circle class="pt" cx="${px(toPx(logX[i]))}" cy="${px(toPy(logY[i]))}" ` +
        `r="3.2" fill="#1b6ca8"/>\n`,
    );
  }

  const annotation = `slope=${fit.slope.toFixed(2)}±${fit.ciHalfWidth.toFixed(2)}`;
  parts.push(
    `<text class="slope" x="${M_LEFT + 10}" y="${M_TOP + 18}" font-size="11" ` +
      `fill="#c0392b">${esc(annotation)}</text>\n`,
  );

  parts.push(
    `<text x="${M_LEFT + PLOT_W / 2}" y="${axisBottom + 34}" font-size="11" ` +
      `fill="#222" text-anchor="middle">1/epsilon</text>\n` +
      `<text x="18" y="${M_TOP + PLOT_H / 2}" font-size="11" fill="#222" ` +
      `text-anchor="middle" transform="rotate(-90 18 ${M_TOP + PLOT_H / 2})">` +
      `${esc(column)}</text>\n`,
  );

  const label = options.sourceLabel ? `${esc(options.sourceLabel)}  ` : "";
  parts.push(
    `<text class="footer" x="${M_LEFT}" y="${axisBottom + M_BOTTOM - 8}" ` +
      `font-size="8.5" fill="#999">${label}sha256:${hash}</text>\n`,
  );

  return svgDocument(M_LEFT + PLOT_W + M_RIGHT, M_TOP + PLOT_H + M_BOTTOM, parts.join(""));
}
