/** Minimal CSV handling for the harness's plain, unquoted output files. */

export interface Table {
  header: string[];
  rows: string[][];
}

export class CsvError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV: no header line");
  }
  const header = lines[0]!.split(",");
  const rows = lines.slice(1).map((l, i) => {
    const cells = l.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(`row ${i + 1} has ${cells.length} cells, header has ${header.length}`);
    }
    return cells;
  });
  if (rows.length === 0) {
    throw new CsvError("empty CSV: header but no data rows");
  }
  return { header, rows };
}

export function requireColumns(table: Table, names: string[]): void {
  const missing = names.filter((n) => !table.header.includes(n));
  if (missing.length > 0) {
    throw new CsvError(
      `CSV is missing required column(s) ${missing.join(", ")}; found: ${table.header.join(", ")}`);
  }
}

export function columnIndex(table: Table, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(`no column named ${name}`);
  }
  return idx;
}

export function numericColumn(table: Table, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((r, i) => {
    const cell = r[idx]!;
    const v = Number(cell);
    if (cell === "" || !Number.isFinite(v)) {
      throw new CsvError(`row ${i + 1}: column ${name} is not numeric (${JSON.stringify(cell)})`);
    }
    return v;
  });
}
