/** SVG assembly helpers: escaping, number formatting, ticks, document shell. */

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Compact axis-label formatting; exact for small integers. */
export function fmt(v: number): string {
  if (v === 0) return "0";
  if (!Number.isFinite(v)) return String(v);
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-4) {
    return v.toExponential(2).replace(/\.?0+e/, "e");
  }
  const s = v.toPrecision(5);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

/** Pixel coordinate with sub-pixel precision but stable text. */
export function px(v: number): string {
  return v.toFixed(2).replace(/\.00$/, "").replace(/(\.\d)0$/, "$1");
}

export function linMap(v: number, lo: number, hi: number, outLo: number, outHi: number): number {
  if (hi === lo) return (outLo + outHi) / 2;
  return outLo + ((v - lo) / (hi - lo)) * (outHi - outLo);
}

/** Tick positions on a 1-2-5 ladder covering [lo, hi]. */
export function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(1, target);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag * 10;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= rawStep - mag * 1e-9) {
      step = mag * m;
      break;
    }
  }
  const out: number[] = [];
  const first = Math.ceil(lo / step - 1e-9) * step;
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

/** Decade ticks for a positive range, refined with 2 and 5 when sparse. */
export function logTicks(lo: number, hi: number): number[] {
  const p0 = Math.ceil(Math.log10(lo) - 1e-9);
  const p1 = Math.floor(Math.log10(hi) + 1e-9);
  const out: number[] = [];
  for (let p = p0; p <= p1; p += 1) out.push(Math.pow(10, p));
  if (out.length >= 2) return out;
  const fine: number[] = [];
  for (let p = Math.floor(Math.log10(lo)) - 1; p <= p1 + 1; p += 1) {
    for (const m of [1, 2, 5]) {
      const v = m * Math.pow(10, p);
      if (v >= lo * 0.999 && v <= hi * 1.001) fine.push(v);
    }
  }
  return fine.length > 0 ? fine : [lo, hi];
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    `</svg>\n`
  );
}
