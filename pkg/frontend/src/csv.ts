/**
 * Reader for spdcfocus CSV output.
 *
 * Files must begin with the provenance comment block written by the CLI
 * ("# spdcfocus <version> <kind>", "# config: ...", "# columns: ..."),
 * followed by one header row and data rows.  Values are plain (unquoted)
 * comma-separated fields.
 */

import * as fs from "node:fs";

export class CsvError extends Error {}

export interface Table {
  /** provenance comment lines, without the leading "# " */
  provenance: string[];
  columns: string[];
  /** row-major cells, same length as columns */
  rows: string[][];
  path: string;
}

export function readTable(path: string): Table {
  const text = fs.readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError(`${path}: empty file`);
  }
  if (!lines[0].startsWith("# spdcfocus")) {
    throw new CsvError(
      `${path}: missing provenance header; expected the first line to start ` +
        `with "# spdcfocus" (refusing to render unattributed data)`
    );
  }
  const provenance: string[] = [];
  let index = 0;
  while (index < lines.length && lines[index].startsWith("#")) {
    provenance.push(lines[index].replace(/^#\s?/, ""));
    index += 1;
  }
  if (index >= lines.length) {
    throw new CsvError(`${path}: no header row after the provenance block`);
  }
  const columns = lines[index].split(",");
  index += 1;
  const rows = lines.slice(index).map((line) => line.split(","));
  for (const row of rows) {
    if (row.length !== columns.length) {
      throw new CsvError(
        `${path}: row has ${row.length} fields, header has ${columns.length}`
      );
    }
  }
  if (rows.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return { provenance, columns, rows, path };
}

/** Assert the table carries the required columns; report a full diff. */
export function requireColumns(table: Table, required: string[]): void {
  const have = new Set(table.columns);
  const missing = required.filter((c) => !have.has(c));
  if (missing.length > 0) {
    const extra = table.columns.filter((c) => !required.includes(c));
    throw new CsvError(
      `${table.path}: column mismatch for this figure kind\n` +
        `  required: ${required.join(", ")}\n` +
        `  missing:  ${missing.join(", ")}\n` +
        `  present but unused: ${extra.join(", ") || "(none)"}`
    );
  }
}

export function numbers(table: Table, column: string): number[] {
  const index = table.columns.indexOf(column);
  if (index < 0) {
    throw new CsvError(`${table.path}: no column ${column}`);
  }
  return table.rows.map((row) => Number(row[index]));
}

export function strings(table: Table, column: string): string[] {
  const index = table.columns.indexOf(column);
  if (index < 0) {
    throw new CsvError(`${table.path}: no column ${column}`);
  }
  return table.rows.map((row) => row[index]);
}
