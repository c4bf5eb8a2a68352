/** Figure specification: which CSVs to draw and how to label the axes. */

export interface PlotSpec {
  /** CSV files, resolved relative to the spec file. */
  csv: string[];
  /** Column used for x (the contract calls it "axis"). */
  x_column: "axis";
  x_label: string;
  y_label: string;
  title?: string;
  /** "linear" (default) or "log10" for ratio-style axes. */
  x_scale?: "linear" | "log10";
  /** Deterministic styling: palette/marker assignment derives from this. */
  style_seed: number;
  /** Output image path, resolved relative to the spec file. */
  output: string;
}

const REQUIRED: (keyof PlotSpec)[] = ["csv", "x_column", "x_label", "y_label", "style_seed", "output"];

export function validateSpec(raw: unknown): PlotSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new Error("plot spec must be a JSON object");
  }
  const spec = raw as Record<string, unknown>;
  for (const key of REQUIRED) {
    if (!(key in spec)) {
      throw new Error(`plot spec is missing required field '${key}'`);
    }
  }
  if (!Array.isArray(spec.csv) || spec.csv.length === 0) {
    throw new Error("plot spec field 'csv' must be a non-empty list of paths");
  }
  if (spec.x_column !== "axis") {
    throw new Error(`plot spec field 'x_column' must be "axis" (the CSV contract), got ${JSON.stringify(spec.x_column)}`);
  }
  if (spec.x_scale !== undefined && spec.x_scale !== "linear" && spec.x_scale !== "log10") {
    throw new Error(`plot spec field 'x_scale' must be "linear" or "log10"`);
  }
  return raw as PlotSpec;
}
