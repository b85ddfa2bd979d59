// @vitest-environment jsdom
// Rendering contract: dashed student strokes, solid figure, view math.
import { describe, expect, it } from "vitest";

import type { SessionFigure } from "../src/api.js";
import { fitView, renderFigure, toFigure, toPixel } from "../src/render.js";

const FIG: SessionFigure = {
  points: { A: [0, 0], B: [4, 0], C: [1, 3] },
  segments: [["A", "B", "given"], ["B", "C", "given"], ["A", "C", "aux"]],
};

function svg(): SVGSVGElement {
  return document.createElementNS(
    "http://www.w3.org/2000/svg", "svg") as SVGSVGElement;
}

describe("view transform", () => {
  it("round-trips figure coordinates", () => {
    const view = fitView(FIG);
    for (const xy of Object.values(FIG.points)) {
      const back = toFigure(view, toPixel(view, xy));
      expect(back[0]).toBeCloseTo(xy[0], 9);
      expect(back[1]).toBeCloseTo(xy[1], 9);
    }
  });

  it("flips the y axis", () => {
    const view = fitView(FIG);
    expect(toPixel(view, [1, 3])[1]).toBeLessThan(toPixel(view, [0, 0])[1]);
  });
});

describe("renderFigure", () => {
  it("draws student strokes dashed and figure segments solid", () => {
    const el = svg();
    const view = fitView(FIG);
    renderFigure(el, FIG, view, [[[0.5, 0.5], [2.5, 2.5]]]);
    const lines = Array.from(el.querySelectorAll("line"));
    expect(lines.length).toBe(4);
    const student = lines.filter(
      (l) => l.getAttribute("class") === "stroke-student");
    expect(student.length).toBe(1);
    expect(student[0].getAttribute("stroke-dasharray")).toBe("6 4");
    for (const l of lines) {
      if (l === student[0]) continue;
      expect(l.getAttribute("stroke-dasharray")).toBeNull();
    }
  });

  it("tints auxiliary segments differently from givens", () => {
    const el = svg();
    renderFigure(el, FIG, fitView(FIG), []);
    const byClass = (cls: string) =>
      Array.from(el.querySelectorAll("line"))
        .filter((l) => l.getAttribute("class") === cls);
    expect(byClass("stroke-given").length).toBe(2);
    expect(byClass("stroke-aux").length).toBe(1);
    expect(byClass("stroke-aux")[0].getAttribute("stroke"))
      .not.toBe(byClass("stroke-given")[0].getAttribute("stroke"));
  });

  it("widens highlighted segments", () => {
    const el = svg();
    renderFigure(el, FIG, fitView(FIG), [], [["A", "B"]]);
    const wide = Array.from(el.querySelectorAll("line"))
      .filter((l) => l.getAttribute("stroke-width") === "4");
    expect(wide.length).toBe(1);
  });

  it("labels every point", () => {
    const el = svg();
    renderFigure(el, FIG, fitView(FIG), []);
    const labels = Array.from(el.querySelectorAll("text"))
      .map((t) => t.textContent);
    expect(labels.sort()).toEqual(["A", "B", "C"]);
  });
});
