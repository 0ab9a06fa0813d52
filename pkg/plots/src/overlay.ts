/** Overlay of two density profiles on shared axes, for run-vs-reference looks. */

import type { DensityProfile } from "./csv.js";
import { DataError } from "./errors.js";
import { digest, float64Bytes } from "./hash.js";
import { esc, fmt, linMap, niceTicks, px, svgDocument } from "./svg.js";

export interface OverlayOptions {
  title?: string;
  labelA?: string;
  labelB?: string;
  sourceLabel?: string;
}

const PLOT_W = 440;
const PLOT_H = 280;
const M_LEFT = 66;
const M_TOP = 44;
const M_RIGHT = 30;
const M_BOTTOM = 56;

const COLOR_A = "#1b6ca8";
const COLOR_B = "#c0392b";

function profileDigest(profile: DensityProfile): string {
  const header = [profile.kind, profile.t, profile.epsilon, profile.sigmaX];
  return digest([JSON.stringify(header), float64Bytes(profile.x), float64Bytes(profile.values)]);
}

export function overlayDigest(a: DensityProfile, b: DensityProfile): string {
  return digest([profileDigest(a), profileDigest(b)]);
}

function polyline(
  profile: DensityProfile,
  cls: string,
  color: string,
  toPx: (x: number) => number,
  toPy: (v: number) => number,
): string {
  const points: string[] = [];
  for (let i = 0; i < profile.x.length; i += 1) {
    points.push(`${px(toPx(profile.x[i]))},${px(toPy(profile.values[i]))}`);
  }
  return (
    `<polyline class="${cls}" points="${points.join(" ")}" fill="none" ` +
    `stroke="${color}" stroke-width="1.4"/>\n`
  );
}

export function renderOverlay(
  a: DensityProfile,
  b: DensityProfile,
  options: OverlayOptions = {},
): string {
  if (a.x.length < 2 || b.x.length < 2) {
    throw new DataError("overlay needs at least two samples per profile");
  }
  const xLo = Math.min(a.x[0], b.x[0]);
  const xHi = Math.max(a.x[a.x.length - 1], b.x[b.x.length - 1]);
  let vHi = -Infinity;
  let vLo = 0;
  for (const profile of [a, b]) {
    for (const v of profile.values) {
      if (v > vHi) vHi = v;
      if (v < vLo) vLo = v;
    }
  }
  if (!(xHi > xLo)) {
    throw new DataError("overlay needs a nonempty x range");
  }
  if (!(vHi > vLo)) vHi = vLo + 1;

  const toPx = (x: number) => linMap(x, xLo, xHi, M_LEFT, M_LEFT + PLOT_W);
  const toPy = (v: number) => M_TOP + PLOT_H - linMap(v, vLo, vHi * 1.05, 0, PLOT_H);

  const parts: string[] = [];
  const hash = overlayDigest(a, b);
  parts.push(`<metadata>sha256:${hash}</metadata>\n`);

  const title = options.title ?? `density overlay, t=${fmt(a.t)}`;
  parts.push(
    `<text x="${M_LEFT}" y="20" font-size="13" font-weight="bold" fill="#222">` +
      `${esc(title)}</text>\n`,
  );

  const axisBottom = M_TOP + PLOT_H;
  for (const v of niceTicks(xLo, xHi)) {
    const cx = toPx(v);
    parts.push(
      `<line x1="${px(cx)}" y1="${axisBottom}" x2="${px(cx)}" y2="${axisBottom + 4}" ` +
        `stroke="#444"/>\n` +
        `<text x="${px(cx)}" y="${axisBottom + 16}" font-size="9" fill="#333" ` +
        `text-anchor="middle">${fmt(v)}</text>\n`,
    );
  }
  for (const v of niceTicks(vLo, vHi)) {
    const cy = toPy(v);
    parts.push(
      `<line x1="${M_LEFT}" y1="${px(cy)}" x2="${M_LEFT + PLOT_W}" y2="${px(cy)}" ` +
        `stroke="#eee"/>\n` +
        `<line x1="${M_LEFT - 4}" y1="${px(cy)}" x2="${M_LEFT}" y2="${px(cy)}" ` +
        `stroke="#444"/>\n` +
        `<text x="${M_LEFT - 7}" y="${px(cy + 3)}" font-size="9" fill="#333" ` +
        `text-anchor="end">${fmt(v)}</text>\n`,
    );
  }
  parts.push(
    `<rect x="${M_LEFT}" y="${M_TOP}" width="${PLOT_W}" height="${PLOT_H}" ` +
      `fill="none" stroke="#444" stroke-width="1"/>\n`,
  );

  parts.push(polyline(a, "series-a", COLOR_A, toPx, toPy));
  parts.push(polyline(b, "series-b", COLOR_B, toPx, toPy));

  const labelA = options.labelA ?? "run";
  const labelB = options.labelB ?? "reference";
  const legendX = M_LEFT + PLOT_W - 150;
  const entries: Array<[string, string]> = [
    [labelA, COLOR_A],
    [labelB, COLOR_B],
  ];
  for (let i = 0; i < entries.length; i += 1) {
    const y = M_TOP + 14 + 14 * i;
    parts.push(
      `<line x1="${legendX}" y1="${y - 3}" x2="${legendX + 22}" y2="${y - 3}" ` +
        `stroke="${entries[i][1]}" stroke-width="2"/>\n` +
        `<text class="legend" x="${legendX + 28}" y="${y}" font-size="9.5" ` +
        `fill="#333">${esc(entries[i][0])}</text>\n`,
    );
  }

  parts.push(
    `<text x="${M_LEFT + PLOT_W / 2}" y="${axisBottom + 32}" font-size="11" ` +
      `fill="#222" text-anchor="middle">x</text>\n`,
  );

  const label = options.sourceLabel ? `${esc(options.sourceLabel)}  ` : "";
  parts.push(
    `<text class="footer" x="${M_LEFT}" y="${axisBottom + M_BOTTOM - 8}" ` +
      `font-size="8.5" fill="#999">${label}sha256:${hash}</text>\n`,
  );

  return svgDocument(M_LEFT + PLOT_W + M_RIGHT, M_TOP + PLOT_H + M_BOTTOM, parts.join(""));
}
