/** Diameter-vs-time series from one run or from a sweep directory tree. */

import * as fs from "node:fs";
import * as path from "node:path";

import { CsvError, parseCsv, requireColumns } from "./csv.js";

export interface DiameterSeries {
  label: string;
  times: number[];
  diameters: number[];
}

export function readDiameterSeries(text: string, label: string, file = "diagnostics.csv"): DiameterSeries {
  const table = parseCsv(text, file);
  const [tCol, dCol] = requireColumns(table, ["t", "diameter"], file);
  return {
    label,
    times: table.rows.map((row) => row[tCol]),
    diameters: table.rows.map((row) => row[dCol]),
  };
}

/**
 * Collect diameter curves under a directory: either a single run
 * (diagnostics.csv at the top level) or one subdirectory per sweep value.
 * Sweep subdirectories are sorted by their numeric suffix so that legend
 * order matches parameter order.
 */
export function collectDiameterSeries(dir: string): DiameterSeries[] {
  const top = path.join(dir, "diagnostics.csv");
  if (fs.existsSync(top)) {
    return [readDiameterSeries(fs.readFileSync(top, "utf8"), path.basename(dir), top)];
  }
  const subs = fs
    .readdirSync(dir, { withFileTypes: true })
    .filter((e) => e.isDirectory())
    .map((e) => e.name)
    .filter((name) => fs.existsSync(path.join(dir, name, "diagnostics.csv")));
  if (subs.length === 0) {
    throw new CsvError(`${dir}: no diagnostics.csv found (run or sweep directory expected)`);
  }
  const numericSuffix = (name: string): number => {
    const m = name.match(/=([-+0-9.eE]+)$/);
    return m ? Number(m[1]) : Number.NaN;
  };
  subs.sort((a, b) => {
    const na = numericSuffix(a);
    const nb = numericSuffix(b);
    if (Number.isNaN(na) || Number.isNaN(nb)) {
      return a.localeCompare(b);
    }
    return na - nb;
  });
  return subs.map((name) =>
    readDiameterSeries(
      fs.readFileSync(path.join(dir, name, "diagnostics.csv"), "utf8"),
      name,
      path.join(dir, name, "diagnostics.csv"),
    ),
  );
}
