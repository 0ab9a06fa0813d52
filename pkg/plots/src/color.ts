/** The two heatmap palettes: diverging for signed data, sequential otherwise. */

type Stop = readonly [number, number, number];

// blue / white / red, dark ends so sideband structure stays visible
const DIVERGING: readonly Stop[] = [
  [5, 48, 97],
  [247, 247, 247],
  [103, 0, 31],
];

// near-white up to deep blue
const SEQUENTIAL: readonly Stop[] = [
  [247, 251, 255],
  [107, 174, 214],
  [8, 48, 107],
];

function hex2(v: number): string {
  return Math.round(v).toString(16).padStart(2, "0");
}

function ramp(stops: readonly Stop[], u: number): string {
  const clamped = Math.min(1, Math.max(0, u));
  const scaled = clamped * (stops.length - 1);
  const seg = Math.min(stops.length - 2, Math.floor(scaled));
  const frac = scaled - seg;
  const lo = stops[seg];
  const hi = stops[seg + 1];
  const r = lo[0] + frac * (hi[0] - lo[0]);
  const g = lo[1] + frac * (hi[1] - lo[1]);
  const b = lo[2] + frac * (hi[2] - lo[2]);
  return `#${hex2(r)}${hex2(g)}${hex2(b)}`;
}

export function divergingColor(u: number): string {
  return ramp(DIVERGING, u);
}

export function sequentialColor(u: number): string {
  return ramp(SEQUENTIAL, u);
}
