export { DataError, FormatError } from "./errors.js";
export { gridKs, gridRange, gridXs, readSwtg, readSwtgFile } from "./swtg.js";
export type { PhaseSpaceGrid } from "./swtg.js";
export {
  BENCH_COLUMNS,
  parseBenchCsv,
  parseDensityCsv,
  readBenchCsvFile,
  readDensityCsvFile,
} from "./csv.js";
export type { BenchColumn, BenchRow, DensityProfile } from "./csv.js";
export { fitSlope } from "./fit.js";
export type { SlopeFit } from "./fit.js";
export { heatmapDigest, renderHeatmap } from "./heatmap.js";
export type { HeatmapOptions } from "./heatmap.js";
export { renderScaling, scalingDigest, scalingFit } from "./scaling.js";
export type { ScalingOptions } from "./scaling.js";
export { overlayDigest, renderOverlay } from "./overlay.js";
export type { OverlayOptions } from "./overlay.js";
export { main } from "./cli.js";
