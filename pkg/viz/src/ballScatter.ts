/** 3D scatter of configurations inside the radius-pi ball, drawn as an
 * orthographic SVG projection. Initial points render as black dots, final
 * points as red diamonds.
 */

import { circle, diamond, line, svgDocument, text } from "./svg.js";
import type { TrajectorySnapshots, Vec3 } from "./trajectory.js";

const WIDTH = 640;
const HEIGHT = 640;
const MARGIN = 50;

/** Orthographic camera angles, matching the usual 3D-axes default view. */
const AZIMUTH = (-60 * Math.PI) / 180;
const ELEVATION = (30 * Math.PI) / 180;

export interface BallScatterScene {
  axisLimit: number;
  initial: Vec3[];
  final: Vec3[];
  /** true when every final point lies inside the closed axis box */
  finalInsideBox: boolean;
}

export function project(p: Vec3): [number, number] {
  const sa = Math.sin(AZIMUTH);
  const ca = Math.cos(AZIMUTH);
  const se = Math.sin(ELEVATION);
  const ce = Math.cos(ELEVATION);
  const sx = -sa * p.x + ca * p.y;
  const sy = -se * (ca * p.x + sa * p.y) + ce * p.z;
  return [sx, sy];
}

export function buildScene(snapshots: TrajectorySnapshots, axisLimit: number): BallScatterScene {
  const inside = (p: Vec3) =>
    Math.abs(p.x) <= axisLimit && Math.abs(p.y) <= axisLimit && Math.abs(p.z) <= axisLimit;
  return {
    axisLimit,
    initial: snapshots.initial,
    final: snapshots.final,
    finalInsideBox: snapshots.final.every(inside),
  };
}

function boxEdges(limit: number): Array<[Vec3, Vec3]> {
  const corners: Vec3[] = [];
  for (const x of [-limit, limit]) {
    for (const y of [-limit, limit]) {
      for (const z of [-limit, limit]) {
        corners.push({ x, y, z });
      }
    }
  }
  const edges: Array<[Vec3, Vec3]> = [];
  for (let i = 0; i < corners.length; i++) {
    for (let j = i + 1; j < corners.length; j++) {
      const a = corners[i];
      const b = corners[j];
      const differing =
        Number(a.x !== b.x) + Number(a.y !== b.y) + Number(a.z !== b.z);
      if (differing === 1) {
        edges.push([a, b]);
      }
    }
  }
  return edges;
}

export function renderBallScatter(scene: BallScatterScene): string {
  const limit = scene.axisLimit;
  // screen mapping calibrated on the projected box corners
  const projectedCorners = boxEdges(limit)
    .flat()
    .map((p) => project(p));
  const xs = projectedCorners.map((p) => p[0]);
  const ys = projectedCorners.map((p) => p[1]);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const scale = Math.min(
    (WIDTH - 2 * MARGIN) / (xMax - xMin),
    (HEIGHT - 2 * MARGIN) / (yMax - yMin),
  );
  const toScreen = (p: Vec3): [number, number] => {
    const [sx, sy] = project(p);
    return [MARGIN + (sx - xMin) * scale, HEIGHT - MARGIN - (sy - yMin) * scale];
  };

  const body: string[] = [];
  for (const [a, b] of boxEdges(limit)) {
    const [x1, y1] = toScreen(a);
    const [x2, y2] = toScreen(b);
    body.push(line(x1, y1, x2, y2, "#bbbbbb", { "stroke-width": 0.8 }));
  }
  for (const p of scene.initial) {
    const [cx, cy] = toScreen(p);
    body.push(circle(cx, cy, 3, "#000000", { class: "marker-initial" }));
  }
  for (const p of scene.final) {
    const [cx, cy] = toScreen(p);
    body.push(diamond(cx, cy, 4.5, "#cc0000"));
  }
  body.push(
    text(MARGIN, HEIGHT - 14, `axis limit ±${limit}`, { fill: "#555555" }),
  );
  return svgDocument(
    WIDTH,
    HEIGHT,
    {
      "data-kind": "ball_scatter",
      "data-axis-limit": limit,
      "data-initial-count": scene.initial.length,
      "data-final-count": scene.final.length,
    },
    body,
  );
}
