/**
 * Reader for the sweep result CSV contract.
 *
 * Frozen header: axis,scheme,environment,sum_se,se_stderr,per_ue_se_json,
 * trials,seed,config_hash,solver_iters,solver_residual. The per-UE column is
 * a JSON list and is quoted, so fields are parsed RFC4180-style (quotes,
 * escaped quotes, commas inside quotes).
 */

export const CSV_HEADER = [
  "axis",
  "scheme",
  "environment",
  "sum_se",
  "se_stderr",
  "per_ue_se_json",
  "trials",
  "seed",
  "config_hash",
  "solver_iters",
  "solver_residual",
] as const;

export interface ResultRow {
  axis: number;
  scheme: string;
  environment: string;
  sumSe: number;
  seStderr: number;
  perUeSe: number[];
  trials: number;
  seed: number;
  configHash: string;
  solverIters: number;
  solverResidual: number;
}

/** Split one CSV record, honoring quoted fields. */
export function splitRecord(line: string): string[] {
  const out: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      out.push(field);
      field = "";
    } else {
      field += ch;
    }
  }
  out.push(field);
  return out;
}

export function parseCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: missing header");
  }
  const header = splitRecord(lines[0]);
  for (const column of CSV_HEADER) {
    if (!header.includes(column)) {
      throw new Error(`CSV is missing required column '${column}'`);
    }
  }
  const idx = new Map(header.map((name, i) => [name, i]));
  const at = (rec: string[], name: string) => rec[idx.get(name)!];
  return lines.slice(1).map((line, n) => {
    const rec = splitRecord(line);
    if (rec.length !== header.length) {
      throw new Error(`CSV row ${n + 2}: ${rec.length} fields, expected ${header.length}`);
    }
    return {
      axis: Number(at(rec, "axis")),
      scheme: at(rec, "scheme"),
      environment: at(rec, "environment"),
      sumSe: Number(at(rec, "sum_se")),
      seStderr: Number(at(rec, "se_stderr")),
      perUeSe: JSON.parse(at(rec, "per_ue_se_json")) as number[],
      trials: Number(at(rec, "trials")),
      seed: Number(at(rec, "seed")),
      configHash: at(rec, "config_hash"),
      solverIters: Number(at(rec, "solver_iters")),
      solverResidual: Number(at(rec, "solver_residual")),
    };
  });
}
