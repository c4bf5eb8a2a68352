/**
 * plotkit CLI: `plotkit render --spec FILE [--out PATH]`.
 *
 * Reads the sweep CSVs named by the spec (paths relative to the spec file),
 * renders one SVG, writes it to the spec's output path (or --out) and prints
 * the destination. Exit codes: 0 ok, 1 bad usage, 2 spec/CSV contract error,
 * 3 I/O failure.
 */

import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { dirname, resolve } from "node:path";

import { parseCsv, ResultRow } from "./csv.js";
import { renderChart } from "./render.js";
import { validateSpec } from "./spec.js";

export function renderSpecFile(specPath: string, outOverride?: string): string {
  const specDir = dirname(resolve(specPath));
  const spec = validateSpec(JSON.parse(readFileSync(specPath, "utf-8")));
  const rows: ResultRow[] = [];
  for (const rel of spec.csv) {
    const text = readFileSync(resolve(specDir, rel), "utf-8");
    rows.push(...parseCsv(text));
  }
  const svg = renderChart(rows, spec);
  const outPath = resolve(specDir, outOverride ?? spec.output);
  mkdirSync(dirname(outPath), { recursive: true });
  writeFileSync(outPath, svg, "utf-8");
  return outPath;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "render") {
    console.error("usage: plotkit render --spec FILE [--out PATH]");
    return 1;
  }
  let specPath: string | undefined;
  let outPath: string | undefined;
  for (let i = 0; i < rest.length; i++) {
    if (rest[i] === "--spec") specPath = rest[++i];
    else if (rest[i] === "--out") outPath = rest[++i];
    else {
      console.error(`unknown argument: ${rest[i]}`);
      return 1;
    }
  }
  if (!specPath) {
    console.error("usage: plotkit render --spec FILE [--out PATH]");
    return 1;
  }
  try {
    const written = renderSpecFile(specPath, outPath);
    console.log(`wrote ${written}`);
    return 0;
  } catch (err) {
    const msg = err instanceof Error ? err.message : String(err);
    if (msg.includes("ENOENT") || msg.includes("EACCES")) {
      console.error(`I/O error: ${msg}`);
      return 3;
    }
    console.error(`error: ${msg}`);
    return 2;
  }
}

const isMain = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (isMain) {
  process.exit(main(process.argv.slice(2)));
}
