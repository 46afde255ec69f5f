/** Trajectory artifacts: angle-axis rows mapped into the radius-pi ball.
 *
 * A rotation with angle theta about unit axis v is drawn at the point
 * theta * v, identifying the rotation group with a solid ball of radius pi
 * (antipodal surface points coincide).
 */

import { CsvError, parseCsv, requireColumns } from "./csv.js";

export interface Vec3 {
  x: number;
  y: number;
  z: number;
}

export interface TrajectorySnapshots {
  /** ball coordinates at the first recorded time */
  initial: Vec3[];
  /** ball coordinates at the last recorded time */
  final: Vec3[];
  firstTime: number;
  lastTime: number;
}

export function ballPoint(theta: number, ax: number, ay: number, az: number): Vec3 {
  return { x: theta * ax, y: theta * ay, z: theta * az };
}

export function readTrajectory(text: string, path = "trajectory.csv"): TrajectorySnapshots {
  const table = parseCsv(text, path);
  const [tCol, , thetaCol, axCol, ayCol, azCol] = requireColumns(
    table,
    ["t", "particle_id", "theta", "ax", "ay", "az"],
    path,
  );
  let firstTime = Infinity;
  let lastTime = -Infinity;
  for (const row of table.rows) {
    firstTime = Math.min(firstTime, row[tCol]);
    lastTime = Math.max(lastTime, row[tCol]);
  }
  const pick = (t: number): Vec3[] =>
    table.rows
      .filter((row) => row[tCol] === t)
      .map((row) => ballPoint(row[thetaCol], row[axCol], row[ayCol], row[azCol]));
  const snapshots = {
    initial: pick(firstTime),
    final: pick(lastTime),
    firstTime,
    lastTime,
  };
  if (snapshots.initial.length === 0 || snapshots.final.length === 0) {
    throw new CsvError(`${path}: no particle rows found`);
  }
  return snapshots;
}
