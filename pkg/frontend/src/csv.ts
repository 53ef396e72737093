/** CSV loading with header validation for run outputs. */

import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { ManifestError } from "./manifest.js";

export interface Table {
  columns: string[];
  rows: Record<string, number>[];
}

export function loadCsv(path: string): Table {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, number>>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new ManifestError(`${path}: ${parsed.errors[0].message}`);
  }
  const columns = parsed.meta.fields ?? [];
  return { columns, rows: parsed.data };
}

export function extractColumn(table: Table, path: string, name: string): number[] {
  if (!table.columns.includes(name)) {
    throw new ManifestError(
      `column '${name}' not in ${path} (has: ${table.columns.join(", ")})`);
  }
  return table.rows
    .map((r) => r[name])
    .filter((v): v is number => typeof v === "number" && Number.isFinite(v));
}
