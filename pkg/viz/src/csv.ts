/** Minimal reader for the simulator's plain numeric CSV files. */

export interface CsvTable {
  header: string[];
  rows: number[][];
}

export class CsvError extends Error {}

function parseCell(cell: string, path: string, line: number): number {
  const value = Number(cell);
  if (!Number.isNaN(value)) {
    return value;
  }
  if (/^[+-]?nan$/i.test(cell)) {
    return Number.NaN;
  }
  const m = cell.match(/^([+-]?)inf(inity)?$/i);
  if (m) {
    return m[1] === "-" ? -Infinity : Infinity;
  }
  throw new CsvError(`${path}: line ${line} has a non-numeric cell ${JSON.stringify(cell)}`);
}

export function parseCsv(text: string, path = "<csv>"): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvError(`${path}: file is empty`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        `${path}: line ${i + 1} has ${cells.length} cells, expected ${header.length}`,
      );
    }
    rows.push(cells.map((cell) => parseCell(cell.trim(), path, i + 1)));
  }
  if (rows.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return { header, rows };
}

export function requireColumns(table: CsvTable, names: string[], path = "<csv>"): number[] {
  return names.map((name) => {
    const idx = table.header.indexOf(name);
    if (idx < 0) {
      throw new CsvError(`${path}: missing column ${JSON.stringify(name)}`);
    }
    return idx;
  });
}
