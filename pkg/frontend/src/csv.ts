/** CSV tables as written by the rotorlab CLI: header row, LF endings, no quoting. */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {
  constructor(file: string, detail: string) {
    super(`${file}: ${detail}`);
    this.name = "SchemaError";
  }
}

export interface Table {
  file: string;
  columns: string[];
  rows: string[][];
}

export function parseCsv(file: string, text: string): Table {
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) throw new SchemaError(file, "empty file");
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  for (const row of rows) {
    if (row.length !== columns.length) {
      throw new SchemaError(file, `row has ${row.length} cells, header has ${columns.length}`);
    }
  }
  return { file, columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(path, readFileSync(path, "utf8"));
}

/** Validate that every named column exists, then return per-column accessors. */
export function requireColumns(table: Table, names: string[]): Record<string, number> {
  const index: Record<string, number> = {};
  for (const name of names) {
    const i = table.columns.indexOf(name);
    if (i < 0) throw new SchemaError(table.file, `missing column '${name}'`);
    index[name] = i;
  }
  return index;
}

export function numbers(table: Table, column: string): number[] {
  const i = requireColumns(table, [column])[column];
  return table.rows.map((row, r) => {
    const value = Number(row[i]);
    if (row[i] === "" || Number.isNaN(value)) {
      throw new SchemaError(table.file, `row ${r + 1}: column '${column}' is not numeric`);
    }
    return value;
  });
}

export function strings(table: Table, column: string): string[] {
  const i = requireColumns(table, [column])[column];
  return table.rows.map((row) => row[i]);
}
