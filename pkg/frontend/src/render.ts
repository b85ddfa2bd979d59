// SVG rendering of the session figure and the student's strokes.
//
// Visual contract: given figure segments are solid; auxiliary segments
// the session has accepted are solid but tinted; the student's own
// in-progress strokes are dashed until the server accepts them.

import type { SessionFigure } from "./api.js";
import type { XY } from "./snap.js";

export const VIEW_SIZE = 480;
export const VIEW_MARGIN = 36;
const SVG_NS = "http://www.w3.org/2000/svg";

export interface View {
  scale: number;
  ox: number;
  oy: number;
}

export function fitView(fig: SessionFigure): View {
  const xs = Object.values(fig.points).map((p) => p[0]);
  const ys = Object.values(fig.points).map((p) => p[1]);
  const span = Math.max(
    Math.max(...xs) - Math.min(...xs),
    Math.max(...ys) - Math.min(...ys),
    1e-9,
  );
  const scale = (VIEW_SIZE - 2 * VIEW_MARGIN) / span;
  return {
    scale,
    ox: VIEW_MARGIN - scale * Math.min(...xs),
    oy: VIEW_MARGIN - scale * Math.min(...ys),
  };
}

export function toPixel(view: View, xy: XY): XY {
  return [
    view.ox + view.scale * xy[0],
    VIEW_SIZE - 1 - (view.oy + view.scale * xy[1]),
  ];
}

export function toFigure(view: View, px: XY): XY {
  return [
    (px[0] - view.ox) / view.scale,
    (VIEW_SIZE - 1 - px[1] - view.oy) / view.scale,
  ];
}

function line(p1: XY, p2: XY, cls: string): SVGLineElement {
  const el = document.createElementNS(SVG_NS, "line");
  el.setAttribute("x1", p1[0].toFixed(2));
  el.setAttribute("y1", p1[1].toFixed(2));
  el.setAttribute("x2", p2[0].toFixed(2));
  el.setAttribute("y2", p2[1].toFixed(2));
  el.setAttribute("class", cls);
  el.setAttribute("stroke-width", "2");
  if (cls === "stroke-student") {
    // student ink stays dashed until the server accepts it
    el.setAttribute("stroke-dasharray", "6 4");
    el.setAttribute("stroke", "#c0392b");
  } else if (cls === "stroke-aux") {
    el.setAttribute("stroke", "#2471a3");
  } else {
    el.setAttribute("stroke", "#111");
  }
  return el;
}

export function renderFigure(
  svg: SVGSVGElement,
  fig: SessionFigure,
  view: View,
  studentStrokes: [XY, XY][],
  highlights: [string, string][] = [],
): void {
  svg.innerHTML = "";
  svg.setAttribute("viewBox", `0 0 ${VIEW_SIZE} ${VIEW_SIZE}`);
  const hi = new Set(highlights.map(([a, b]) => [a, b].sort().join("|")));
  for (const [a, b, kind] of fig.segments) {
    const el = line(
      toPixel(view, fig.points[a]),
      toPixel(view, fig.points[b]),
      kind === "given" ? "stroke-given" : "stroke-aux",
    );
    if (hi.has([a, b].sort().join("|"))) {
      el.setAttribute("stroke", "#e67e22");
      el.setAttribute("stroke-width", "4");
    }
    svg.appendChild(el);
  }
  for (const [p1, p2] of studentStrokes) {
    svg.appendChild(line(toPixel(view, p1), toPixel(view, p2),
      "stroke-student"));
  }
  for (const [pid, xy] of Object.entries(fig.points)) {
    const [x, y] = toPixel(view, xy);
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", x.toFixed(2));
    dot.setAttribute("cy", y.toFixed(2));
    dot.setAttribute("r", "3.5");
    dot.setAttribute("fill", "#111");
    svg.appendChild(dot);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", (x + 6).toFixed(2));
    label.setAttribute("y", (y - 6).toFixed(2));
    label.setAttribute("font-size", "14");
    label.textContent = pid;
    svg.appendChild(label);
  }
}
