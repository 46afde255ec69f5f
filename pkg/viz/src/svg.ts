/** String-building helpers for static SVG output. */

export function tag(name: string, attrs: Record<string, string | number>, body = ""): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${String(v)}"`)
    .join(" ");
  return body === "" ? `<${name} ${parts}/>` : `<${name} ${parts}>${body}</${name}>`;
}

export function svgDocument(
  width: number,
  height: number,
  meta: Record<string, string | number>,
  body: string[],
): string {
  const attrs: Record<string, string | number> = {
    xmlns: "http://www.w3.org/2000/svg",
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    ...meta,
  };
  return [
    `<?xml version="1.0" encoding="UTF-8"?>`,
    tag("svg", attrs, "\n" + body.join("\n") + "\n"),
    "",
  ].join("\n");
}

export function polyline(
  points: Array<[number, number]>,
  stroke: string,
  width = 1.5,
  extra: Record<string, string | number> = {},
): string {
  const pts = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
  return tag("polyline", { points: pts, fill: "none", stroke, "stroke-width": width, ...extra });
}

export function circle(
  cx: number,
  cy: number,
  r: number,
  fill: string,
  extra: Record<string, string | number> = {},
): string {
  return tag("circle", { cx: cx.toFixed(2), cy: cy.toFixed(2), r, fill, ...extra });
}

export function diamond(
  cx: number,
  cy: number,
  r: number,
  fill: string,
  extra: Record<string, string | number> = {},
): string {
  const pts = [
    [cx, cy - r],
    [cx + r, cy],
    [cx, cy + r],
    [cx - r, cy],
  ]
    .map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`)
    .join(" ");
  return tag("polygon", { points: pts, fill, class: "marker-diamond", ...extra });
}

export function text(
  x: number,
  y: number,
  content: string,
  extra: Record<string, string | number> = {},
): string {
  return tag("text", { x: x.toFixed(2), y: y.toFixed(2), "font-size": 11, ...extra }, content);
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  stroke: string,
  extra: Record<string, string | number> = {},
): string {
  return tag("line", {
    x1: x1.toFixed(2),
    y1: y1.toFixed(2),
    x2: x2.toFixed(2),
    y2: y2.toFixed(2),
    stroke,
    ...extra,
  });
}
