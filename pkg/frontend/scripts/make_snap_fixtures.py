"""Generate shared stroke-snapping fixtures for the web client tests.

The web client re-implements stroke snapping so the student sees the
snapped stroke before the server verifies it; these fixtures freeze the
server-side snapper's output on 100 strokes so the two implementations
can never drift apart.

Run from the repository root:
    python3 frontend/scripts/make_snap_fixtures.py
"""
import json
import math
import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..",
                                "src"))

from geotutor.problemspec import load_problem
from geotutor.tutor import SNAP_FRACTION, TutorError, snap_stroke

FIGURES = ("pre1", "pre3", "post1")
CASES_PER_FIGURE = 34
SEED = 2024


def _bounds(fig):
    xs = [p.x for p in fig.points.values()]
    ys = [p.y for p in fig.points.values()]
    return min(xs), max(xs), min(ys), max(ys)


def _random_stroke(rng, fig, radius):
    """One stroke; kinds exercise every branch of the snapper."""
    x0, x1, y0, y1 = _bounds(fig)
    pad = 0.3 * max(x1 - x0, y1 - y0)

    def free():
        return (rng.uniform(x0 - pad, x1 + pad),
                rng.uniform(y0 - pad, y1 + pad))

    def near(pid):
        px, py = fig.xy(pid)
        ang = rng.uniform(0, 2 * math.pi)
        r = rng.uniform(0, 0.8 * radius)
        return (px + r * math.cos(ang), py + r * math.sin(ang))

    pts = sorted(fig.points)
    kind = rng.randrange(5)
    if kind == 0:                      # fully free
        return free(), free()
    if kind == 1:                      # one end on a point
        return near(rng.choice(pts)), free()
    if kind == 2:                      # both ends on points
        return near(rng.choice(pts)), near(rng.choice(pts))
    if kind == 3:                      # near-aligned extension
        a, b = rng.choice(sorted(fig.segments))
        if rng.random() < 0.5:
            a, b = b, a
        ax, ay = fig.xy(a)
        bx, by = fig.xy(b)
        base = math.atan2(by - ay, bx - ax)
        drift = math.radians(rng.uniform(-4.0, 4.0))
        length = rng.uniform(2 * radius, 6 * radius)
        return near(a), (ax + length * math.cos(base + drift),
                         ay + length * math.sin(base + drift))
    # degenerate: too short to interpret
    x, y = free()
    ang = rng.uniform(0, 2 * math.pi)
    r = rng.uniform(0, 0.9 * radius)
    return (x, y), (x + r * math.cos(ang), y + r * math.sin(ang))


def main():
    rng = random.Random(SEED)
    cases = []
    for name in FIGURES:
        fig = load_problem(f"corpus/{name}.json").knowledge().fig
        radius = SNAP_FRACTION * fig.diameter()
        figure = {
            "points": {pid: [fig.points[pid].x, fig.points[pid].y]
                       for pid in sorted(fig.points)},
            "segments": [list(s) for s in sorted(fig.segments)],
        }
        for _ in range(CASES_PER_FIGURE):
            stroke = _random_stroke(rng, fig, radius)
            case = {"figure": name, "radius": radius,
                    "stroke": [list(stroke[0]), list(stroke[1])]}
            try:
                p1, p2 = snap_stroke(fig, stroke, radius)
                case["snapped"] = [list(p1), list(p2)]
            except TutorError:
                case["error"] = "too short"
            cases.append(case)
        cases.append({"_figure_def": name, **figure})
    out = {"cases": [c for c in cases if "_figure_def" not in c][:100],
           "figures": {c["_figure_def"]: {"points": c["points"],
                                          "segments": c["segments"]}
                       for c in cases if "_figure_def" in c}}
    path = os.path.join(os.path.dirname(__file__), "..", "test",
                        "snap-fixtures.json")
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
    n_err = sum("error" in c for c in out["cases"])
    print(f"wrote {len(out['cases'])} cases ({n_err} degenerate) to {path}")


if __name__ == "__main__":
    main()
