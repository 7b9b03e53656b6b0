import Papa from "papaparse";

/** Column order written by the simulator CLI. */
export const RESULT_COLUMNS = [
  "axis_value",
  "attack",
  "defense",
  "mean_fdr",
  "se_fdr",
  "mean_power",
  "se_power",
  "bound_kind",
  "bound_value",
  "bound_se",
  "trials",
  "seed",
] as const;

export interface ResultRow {
  axisValue: number;
  attack: string;
  defense: string;
  meanFdr: number;
  seFdr: number;
  meanPower: number;
  sePower: number;
  /** Empty string when the row carries no bound estimate. */
  boundKind: string;
  boundValue: number | null;
  boundSe: number | null;
  trials: number;
  seed: number;
}

export class SchemaError extends Error {}

function numberField(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) {
    throw new SchemaError(`line ${line}: column '${column}': '${raw}' is not a number`);
  }
  return value;
}

function optionalNumberField(raw: string, column: string, line: number): number | null {
  if (raw === "") return null;
  return numberField(raw, column, line);
}

function integerField(raw: string, column: string, line: number): number {
  const value = numberField(raw, column, line);
  if (!Number.isInteger(value)) {
    throw new SchemaError(`line ${line}: column '${column}': '${raw}' is not an integer`);
  }
  return value;
}

/**
 * Parse a results CSV into typed rows.
 *
 * The header must contain every simulator column; extra columns are
 * ignored. A file with a valid header but no data rows is rejected so
 * callers never render an empty figure.
 */
export function parseResultsCsv(text: string): ResultRow[] {
  if (text.trim() === "") {
    throw new SchemaError("results csv is empty");
  }
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of RESULT_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`results csv is missing column '${column}'`);
    }
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("results csv has no data rows");
  }

  return parsed.data.map((raw, i) => {
    const line = i + 2; // header is line 1
    return {
      axisValue: numberField(raw.axis_value, "axis_value", line),
      attack: raw.attack,
      defense: raw.defense,
      meanFdr: numberField(raw.mean_fdr, "mean_fdr", line),
      seFdr: numberField(raw.se_fdr, "se_fdr", line),
      meanPower: numberField(raw.mean_power, "mean_power", line),
      sePower: numberField(raw.se_power, "se_power", line),
      boundKind: raw.bound_kind,
      boundValue: optionalNumberField(raw.bound_value, "bound_value", line),
      boundSe: optionalNumberField(raw.bound_se, "bound_se", line),
      trials: integerField(raw.trials, "trials", line),
      seed: integerField(raw.seed, "seed", line),
    };
  });
}
