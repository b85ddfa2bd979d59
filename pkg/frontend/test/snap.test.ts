// Parity with the server-side snapper over 100 shared fixtures.
import { describe, expect, it } from "vitest";

import { snapPoint, snapStroke, XY } from "../src/snap.js";
import fixtures from "./snap-fixtures.json";

const TOL = 1e-9;

interface Case {
  figure: string;
  radius: number;
  stroke: [[number, number], [number, number]];
  snapped?: [[number, number], [number, number]];
  error?: string;
}

const cases = fixtures.cases as Case[];
const figures = fixtures.figures as Record<
  string,
  { points: Record<string, [number, number]>; segments: [string, string][] }
>;

describe("snapStroke parity", () => {
  it("has the full fixture corpus", () => {
    expect(cases.length).toBe(100);
    expect(cases.some((c) => c.error)).toBe(true);
    expect(cases.some((c) => c.snapped)).toBe(true);
  });

  for (const [i, c] of cases.entries()) {
    it(`case ${i} (${c.figure})`, () => {
      const fig = figures[c.figure];
      const stroke: [XY, XY] = [c.stroke[0], c.stroke[1]];
      if (c.error) {
        expect(() => snapStroke(fig, stroke, c.radius)).toThrow();
        return;
      }
      const [p1, p2] = snapStroke(fig, stroke, c.radius);
      const want = c.snapped as [[number, number], [number, number]];
      expect(Math.abs(p1[0] - want[0][0])).toBeLessThanOrEqual(TOL);
      expect(Math.abs(p1[1] - want[0][1])).toBeLessThanOrEqual(TOL);
      expect(Math.abs(p2[0] - want[1][0])).toBeLessThanOrEqual(TOL);
      expect(Math.abs(p2[1] - want[1][1])).toBeLessThanOrEqual(TOL);
    });
  }
});

describe("snapPoint", () => {
  const fig = figures.pre3;
  it("snaps inside the radius and not outside", () => {
    const [a] = Object.entries(fig.points)[0];
    const [ax, ay] = fig.points[a];
    expect(snapPoint(fig, [ax + 0.001, ay], 0.01)[0]).toBe(a);
    expect(snapPoint(fig, [ax + 0.5, ay + 0.5], 0.01)[0]).toBeNull();
  });
});
