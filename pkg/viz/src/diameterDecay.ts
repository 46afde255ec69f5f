/** Diameter-vs-time curves, one per run, optionally on a semilog-y axis. */

import type { DiameterSeries } from "./diagnostics.js";
import { polyline, svgDocument, text, line } from "./svg.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = 60;

/** Diameters below this floor are clipped on the log axis. */
const LOG_FLOOR = 1e-16;

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export interface DecayScene {
  logY: boolean;
  series: DiameterSeries[];
  tMax: number;
  yMin: number;
  yMax: number;
}

export function buildScene(series: DiameterSeries[], logY: boolean): DecayScene {
  const yTransform = (d: number) => (logY ? Math.log10(Math.max(d, LOG_FLOOR)) : d);
  let tMax = 0;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of series) {
    tMax = Math.max(tMax, ...s.times);
    for (const d of s.diameters) {
      const y = yTransform(d);
      yMin = Math.min(yMin, y);
      yMax = Math.max(yMax, y);
    }
  }
  if (yMax === yMin) {
    yMax = yMin + 1;
  }
  return { logY, series, tMax, yMin, yMax };
}

export function renderDiameterDecay(scene: DecayScene): string {
  const { logY, tMax, yMin, yMax } = scene;
  const yTransform = (d: number) => (logY ? Math.log10(Math.max(d, LOG_FLOOR)) : d);
  const toScreen = (t: number, d: number): [number, number] => [
    MARGIN + (t / tMax) * (WIDTH - 2 * MARGIN),
    HEIGHT - MARGIN - ((yTransform(d) - yMin) / (yMax - yMin)) * (HEIGHT - 2 * MARGIN),
  ];

  const body: string[] = [
    line(MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, "#333333"),
    line(MARGIN, MARGIN, MARGIN, HEIGHT - MARGIN, "#333333"),
    text(WIDTH / 2, HEIGHT - 16, "t", { "text-anchor": "middle" }),
    text(16, HEIGHT / 2, logY ? "log10 diameter" : "diameter", {
      transform: `rotate(-90 16 ${HEIGHT / 2})`,
      "text-anchor": "middle",
    }),
  ];
  scene.series.forEach((s, k) => {
    const pts = s.times.map((t, i) => toScreen(t, s.diameters[i]));
    const color = PALETTE[k % PALETTE.length];
    body.push(polyline(pts, color, 1.6, { class: "series", "data-label": s.label }));
    body.push(
      text(WIDTH - MARGIN - 4, MARGIN + 16 * (k + 1), s.label, {
        fill: color,
        "text-anchor": "end",
        class: "legend",
      }),
    );
  });
  return svgDocument(
    WIDTH,
    HEIGHT,
    {
      "data-kind": "diameter_decay",
      "data-log-y": String(logY),
      "data-series-count": scene.series.length,
    },
    body,
  );
}
