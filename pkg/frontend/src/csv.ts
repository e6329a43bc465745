import { readFileSync } from "node:fs";
import Papa from "papaparse";

export type Columns = Map<string, number[]>;

/** Read a numeric CSV into named columns, checking the required ones exist.
 *
 * Errors always name the offending file and column so a broken pipeline is
 * diagnosable from the message alone.
 */
export function readColumns(path: string, required: string[]): Columns {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new Error(`cannot read CSV file '${path}'`);
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
    delimiter: ",", // single-column files defeat auto-detection
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new Error(`malformed CSV '${path}': ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const name of required) {
    if (!fields.includes(name)) {
      throw new Error(`missing column '${name}' in '${path}' (has: ${fields.join(", ")})`);
    }
  }
  const cols: Columns = new Map(fields.map((f) => [f, []]));
  for (const row of parsed.data) {
    for (const f of fields) {
      const v = Number(row[f]);
      if (!Number.isFinite(v)) {
        throw new Error(`non-numeric value '${row[f]}' in column '${f}' of '${path}'`);
      }
      cols.get(f)!.push(v);
    }
  }
  return cols;
}

export function column(cols: Columns, name: string, path: string): number[] {
  const values = cols.get(name);
  if (values === undefined) {
    throw new Error(`missing column '${name}' in '${path}'`);
  }
  return values;
}
