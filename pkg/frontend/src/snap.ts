// Client-side stroke snapping, mirroring the server's snapper exactly so
// the preview the student sees is the stroke the server verifies.

export interface Figure {
  points: Record<string, [number, number]>;
  // first two entries are the endpoint ids; extra entries (e.g. the
  // segment kind in session state) are ignored here
  segments: readonly (readonly string[])[];
}

export type XY = [number, number];

export const EXTENSION_TOL_DEG = 5.0;

function dist(a: XY, b: XY): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

// Nearest figure point within `radius`; exact-distance ties resolve to the
// last point in id order, matching the server.
export function snapPoint(
  fig: Figure, xy: XY, radius: number,
): [string | null, XY] {
  let best: string | null = null;
  let bd = radius;
  for (const pid of Object.keys(fig.points).sort()) {
    const d = dist(fig.points[pid], xy);
    if (d <= bd) {
      best = pid;
      bd = d;
    }
  }
  if (best !== null) {
    return [best, [...fig.points[best]] as XY];
  }
  return [null, [xy[0], xy[1]]];
}

function unit(a: XY, b: XY): XY {
  const d = dist(a, b);
  return [(b[0] - a[0]) / d, (b[1] - a[1]) / d];
}

// Snap a drawn stroke into figure space.  Endpoints within the radius of
// a figure point take that point's exact position; when exactly one end
// lands on a point and the stroke runs within EXTENSION_TOL_DEG of a
// drawn line through that point, the free end is projected onto the line.
// Throws on strokes too short to interpret.
export function snapStroke(
  fig: Figure, stroke: [XY, XY], radius: number,
  angTolDeg: number = EXTENSION_TOL_DEG,
): [XY, XY] {
  const [e1, e2] = stroke;
  const [id1, p1] = snapPoint(fig, e1, radius);
  const [id2, p2] = snapPoint(fig, e2, radius);
  if (dist(p1, p2) <= radius) {
    throw new Error("stroke too short to interpret");
  }
  if ((id1 === null) !== (id2 === null)) {
    const anchor = id1 !== null ? id1 : (id2 as string);
    const aXY = id1 !== null ? p1 : p2;
    let free = id1 !== null ? p2 : p1;
    let best: { dev: number; u: XY } | null = null;
    for (const segEntry of fig.segments) {
      const [a, b] = segEntry;
      if (a !== anchor && b !== anchor) continue;
      const other = a === anchor ? b : a;
      const [ux, uy] = unit(fig.points[anchor], fig.points[other]);
      const [vx, vy] = unit(aXY, free);
      const dev =
        (Math.acos(Math.min(1.0, Math.abs(ux * vx + uy * vy))) * 180)
        / Math.PI;
      if (dev <= angTolDeg && (best === null || dev < best.dev)) {
        best = { dev, u: [ux, uy] };
      }
    }
    if (best !== null) {
      const [ux, uy] = best.u;
      const t = (free[0] - aXY[0]) * ux + (free[1] - aXY[1]) * uy;
      free = [aXY[0] + t * ux, aXY[1] + t * uy];
    }
    return id1 !== null ? [aXY, free] : [free, aXY];
  }
  return [p1, p2];
}
