/**
 * Command line entry.
 *
 *   swtplot heatmap FILE.swtg -o OUT.svg [--title TEXT] [--cells N]
 *   swtplot scaling BENCH.csv --column NAME -o OUT.svg [--title TEXT]
 *   swtplot overlay A.csv B.csv -o OUT.svg [--title TEXT] [--label-a T] [--label-b T]
 *
 * Exit codes: 0 success, 1 usage, 2 input file malformed or unusable.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { BENCH_COLUMNS, parseBenchCsv, parseDensityCsv } from "./csv.js";
import type { BenchColumn } from "./csv.js";
import { DataError, FormatError } from "./errors.js";
import { renderHeatmap } from "./heatmap.js";
import { renderOverlay } from "./overlay.js";
import { renderScaling } from "./scaling.js";
import { readSwtg } from "./swtg.js";

const USAGE = `usage:
  swtplot heatmap FILE.swtg -o OUT.svg [--title TEXT] [--cells N]
  swtplot scaling BENCH.csv --column NAME -o OUT.svg [--title TEXT]
  swtplot overlay A.csv B.csv -o OUT.svg [--title TEXT] [--label-a TEXT] [--label-b TEXT]`;

class UsageError extends Error {}

function readInput(path: string): Buffer {
  try {
    return readFileSync(path);
  } catch {
    throw new UsageError(`cannot read ${path}`);
  }
}

interface Parsed {
  positionals: string[];
  values: Record<string, string | undefined>;
}

function parse(args: string[], flags: Record<string, { short?: string }>): Parsed {
  try {
    const spec: Record<string, { type: "string"; short?: string }> = {};
    for (const [name, options] of Object.entries(flags)) {
      spec[name] = { type: "string", ...options };
    }
    const out = parseArgs({ args, options: spec, allowPositionals: true, strict: true });
    return { positionals: out.positionals, values: out.values as Parsed["values"] };
  } catch (err) {
    throw new UsageError(err instanceof Error ? err.message : String(err));
  }
}

function requireOut(values: Parsed["values"]): string {
  const out = values.out;
  if (out === undefined || out === "") {
    throw new UsageError("missing required -o/--out OUT.svg");
  }
  return out;
}

function runHeatmap(args: string[]): void {
  const { positionals, values } = parse(args, {
    out: { short: "o" },
    title: {},
    cells: {},
  });
  if (positionals.length !== 1) {
    throw new UsageError("heatmap takes exactly one FILE.swtg");
  }
  const out = requireOut(values);
  let maxCells: number | undefined;
  if (values.cells !== undefined) {
    maxCells = Number(values.cells);
    if (!Number.isInteger(maxCells) || maxCells < 8) {
      throw new UsageError(`--cells must be an integer >= 8, got ${values.cells}`);
    }
  }
  const grid = readSwtg(readInput(positionals[0]), positionals[0]);
  const svg = renderHeatmap(grid, {
    title: values.title,
    maxCells,
    sourceLabel: basename(positionals[0]),
  });
  writeFileSync(out, svg);
  console.log(`wrote ${out}`);
}

function runScaling(args: string[]): void {
  const { positionals, values } = parse(args, {
    out: { short: "o" },
    column: {},
    title: {},
  });
  if (positionals.length !== 1) {
    throw new UsageError("scaling takes exactly one BENCH.csv");
  }
  const out = requireOut(values);
  const column = values.column;
  if (column === undefined) {
    throw new UsageError("missing required --column NAME");
  }
  if (!(BENCH_COLUMNS as readonly string[]).includes(column)) {
    throw new UsageError(`unknown column ${column}; known: ${BENCH_COLUMNS.join(", ")}`);
  }
  const rows = parseBenchCsv(readInput(positionals[0]).toString("utf8"), positionals[0]);
  const svg = renderScaling(rows, column as BenchColumn, {
    title: values.title,
    sourceLabel: basename(positionals[0]),
  });
  writeFileSync(out, svg);
  console.log(`wrote ${out}`);
}

function runOverlay(args: string[]): void {
  const { positionals, values } = parse(args, {
    out: { short: "o" },
    title: {},
    "label-a": {},
    "label-b": {},
  });
  if (positionals.length !== 2) {
    throw new UsageError("overlay takes exactly two density CSV files");
  }
  const out = requireOut(values);
  const a = parseDensityCsv(readInput(positionals[0]).toString("utf8"), positionals[0]);
  const b = parseDensityCsv(readInput(positionals[1]).toString("utf8"), positionals[1]);
  const svg = renderOverlay(a, b, {
    title: values.title,
    labelA: values["label-a"] ?? basename(positionals[0]),
    labelB: values["label-b"] ?? basename(positionals[1]),
    sourceLabel: `${basename(positionals[0])} + ${basename(positionals[1])}`,
  });
  writeFileSync(out, svg);
  console.log(`wrote ${out}`);
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "heatmap") runHeatmap(rest);
    else if (command === "scaling") runScaling(rest);
    else if (command === "overlay") runOverlay(rest);
    else {
      throw new UsageError(command === undefined ? USAGE : `unknown command ${command}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`swtplot: error: ${err.message}`);
      return 1;
    }
    if (err instanceof FormatError || err instanceof DataError) {
      console.error(`swtplot: invalid input: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(entry).href) {
  process.exit(main(process.argv.slice(2)));
}
