/** Short content digests so every figure names the data that produced it. */

import { createHash } from "node:crypto";

export function digest(parts: ReadonlyArray<string | Uint8Array>): string {
  const hash = createHash("sha256");
  for (const part of parts) {
    if (typeof part === "string") {
      hash.update(part, "utf8");
    } else {
      hash.update(part);
    }
  }
  return hash.digest("hex").slice(0, 12);
}

export function float64Bytes(values: Float64Array): Uint8Array {
  return new Uint8Array(values.buffer, values.byteOffset, values.byteLength);
}
