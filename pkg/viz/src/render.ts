#!/usr/bin/env node
/** CLI: render --kind ball_scatter|diameter_decay --in DIR --out FILE
 *        [--axis-limit X] [--log-y]
 *
 * Exit codes: 0 ok, 2 usage error, 1 input error (nothing written).
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { buildScene as buildBall, renderBallScatter } from "./ballScatter.js";
import { buildScene as buildDecay, renderDiameterDecay } from "./diameterDecay.js";
import { collectDiameterSeries } from "./diagnostics.js";
import { CsvError } from "./csv.js";
import { readTrajectory } from "./trajectory.js";

interface Options {
  kind: string;
  inDir: string;
  outFile: string;
  axisLimit: number;
  logY: boolean;
}

export function parseArgs(argv: string[]): Options {
  const opts: Partial<Options> = { axisLimit: 1.0, logY: false };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) {
        throw new UsageError(`flag ${arg} needs a value`);
      }
      return argv[i];
    };
    switch (arg) {
      case "--kind":
        opts.kind = next();
        break;
      case "--in":
        opts.inDir = next();
        break;
      case "--out":
        opts.outFile = next();
        break;
      case "--axis-limit": {
        const v = Number(next());
        if (!Number.isFinite(v) || v <= 0) {
          throw new UsageError("--axis-limit must be a positive number");
        }
        opts.axisLimit = v;
        break;
      }
      case "--log-y":
        opts.logY = true;
        break;
      default:
        throw new UsageError(`unknown flag ${arg}`);
    }
  }
  for (const key of ["kind", "inDir", "outFile"] as const) {
    if (opts[key] === undefined) {
      throw new UsageError("usage: render --kind KIND --in DIR --out FILE [--axis-limit X] [--log-y]");
    }
  }
  if (opts.kind !== "ball_scatter" && opts.kind !== "diameter_decay") {
    throw new UsageError(`unknown kind ${opts.kind}; expected ball_scatter or diameter_decay`);
  }
  return opts as Options;
}

export class UsageError extends Error {}

export function render(opts: Options): string {
  if (opts.kind === "ball_scatter") {
    const file = path.join(opts.inDir, "trajectory.csv");
    if (!fs.existsSync(file)) {
      throw new CsvError(`${file} not found`);
    }
    const snapshots = readTrajectory(fs.readFileSync(file, "utf8"), file);
    return renderBallScatter(buildBall(snapshots, opts.axisLimit));
  }
  return renderDiameterDecay(buildDecay(collectDiameterSeries(opts.inDir), opts.logY));
}

export function main(argv: string[]): number {
  let opts: Options;
  try {
    opts = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const svg = render(opts);
    fs.mkdirSync(path.dirname(path.resolve(opts.outFile)), { recursive: true });
    fs.writeFileSync(opts.outFile, svg);
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  console.log(`wrote ${opts.outFile}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
