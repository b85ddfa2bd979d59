"""Problem files: JSON schema, validation, and loading into a knowledge base.

A problem is a figure (points with coordinates, drawn segments), a list of
given constraints, and a goal (a conjunction of one or more facts).  Ratio
givens like "BD = 2 AE" are written as sums ("AE + AE = BD"); doubled
angles likewise.  Coordinates must actually satisfy every constraint: the
loader checks them numerically and reports all offending entries.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .geom import Point, ProblemFigure, normalize, seg
from .knowledge import GIVEN, Knowledge, canon_fact, fact_holds

NUMERIC_TOL = 1e-6             # relative; coordinates must honour constraints

CONSTRAINT_KINDS = ("seg_eq", "seg_sum", "angle_eq", "angle_sum",
                    "angle_measure", "perp", "parallel", "midpoint",
                    "supplementary")
GOAL_KINDS = CONSTRAINT_KINDS + ("between", "collinear")


class ProblemError(ValueError):
    """Invalid problem file; .errors lists every offending entry."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Problem:
    name: str
    figure: ProblemFigure
    givens: tuple               # (pred, args, value) triples, raw point ids
    goal: tuple                 # same shape; all must hold

    def knowledge(self) -> Knowledge:
        k = Knowledge(self.figure.copy(), self.goal)
        for (pred, args, value) in self.givens:
            f = canon_fact(k, pred, args, value)
            if f is not None:
                k.add(f, GIVEN)
        return k


def _check_args(kind, args, points, errors, where):
    def pt(x):
        if not isinstance(x, str) or x not in points:
            errors.append(f"{where}: unknown point {x!r}")
            return False
        return True

    def pair(x):
        return (isinstance(x, (list, tuple)) and len(x) == 2
                and all(pt(p) for p in x))

    def triple(x):
        return (isinstance(x, (list, tuple)) and len(x) == 3
                and all(pt(p) for p in x))

    ok = True
    if kind in ("seg_eq", "perp", "parallel"):
        ok = len(args) == 2 and all(pair(a) for a in args)
    elif kind == "seg_sum":
        ok = len(args) == 3 and all(pair(a) for a in args)
    elif kind in ("angle_eq", "supplementary"):
        ok = len(args) == 2 and all(triple(a) for a in args)
    elif kind == "angle_sum":
        ok = len(args) == 3 and all(triple(a) for a in args)
    elif kind == "angle_measure":
        ok = len(args) == 1 and triple(args[0])
    elif kind == "midpoint":
        ok = (len(args) == 2 and isinstance(args[0], str) and pt(args[0])
              and pair(args[1]))
    elif kind in ("between", "collinear"):
        ok = len(args) == 3 and all(pt(a) for a in args)
    if not ok:
        errors.append(f"{where}: malformed arguments for {kind}")
    return ok


def _to_spec(entry, points, errors, where):
    kind = entry.get("kind")
    if kind not in GOAL_KINDS:
        errors.append(f"{where}: unknown kind {kind!r}")
        return None
    args = entry.get("args", [])
    if kind == "between" or kind == "collinear":
        if not _check_args(kind, args, points, errors, where):
            return None
        return (kind, tuple(args), None)
    if not _check_args(kind, args, points, errors, where):
        return None
    value = None
    if kind == "angle_measure":
        if "degrees" not in entry:
            errors.append(f"{where}: angle_measure needs 'degrees'")
            return None
        value = math.radians(float(entry["degrees"]))

    def conv(a):
        return tuple(a) if isinstance(a, (list, tuple)) else a

    return (kind, tuple(conv(a) for a in args), value)


def parse_problem(data: dict, name: str = "problem") -> Problem:
    errors = []
    points = data.get("points", {})
    if not isinstance(points, dict) or len(points) < 2:
        raise ProblemError(["problem needs a 'points' table"])
    fig = ProblemFigure()
    for pid, xy in points.items():
        if (not isinstance(xy, (list, tuple)) or len(xy) != 2
                or not all(isinstance(v, (int, float)) for v in xy)):
            errors.append(f"point {pid}: coordinates must be [x, y]")
            continue
        fig.add_point(Point(pid, float(xy[0]), float(xy[1])))
    for i, pair in enumerate(data.get("segments", [])):
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or any(p not in fig.points for p in pair)):
            errors.append(f"segment #{i + 1}: must join two known points")
            continue
        fig.add_segment(seg(pair[0], pair[1]))
    if not fig.segments:
        errors.append("problem needs at least one segment")
    givens = []
    for i, entry in enumerate(data.get("constraints", [])):
        spec = _to_spec(entry, points, errors, f"constraint #{i + 1}")
        if spec and spec[0] not in CONSTRAINT_KINDS:
            errors.append(f"constraint #{i + 1}: {spec[0]} is goal-only")
        elif spec:
            givens.append(spec)
    goal_entries = data.get("goal", [])
    if isinstance(goal_entries, dict):
        goal_entries = [goal_entries]
    goal = []
    for i, entry in enumerate(goal_entries):
        spec = _to_spec(entry, points, errors, f"goal #{i + 1}")
        if spec:
            goal.append(spec)
    if not goal:
        errors.append("problem needs a goal")
    if errors:
        raise ProblemError(errors)

    fig = normalize(fig)
    k = Knowledge(fig, ())
    for i, (pred, args, value) in enumerate(givens + goal):
        which = ("constraint" if i < len(givens)
                 else "goal")
        f = canon_fact(k, pred, args, value)
        if f is None:
            errors.append(f"{which} {pred}{args}: degenerate on this figure")
        elif not fact_holds(fig, f, NUMERIC_TOL):
            errors.append(
                f"{which} {pred}{args}: coordinates do not satisfy it")
    if errors:
        raise ProblemError(errors)
    return Problem(data.get("name", name), fig, tuple(givens), tuple(goal))


def load_problem(path) -> Problem:
    with open(path) as fh:
        data = json.load(fh)
    return parse_problem(data, name=str(path))
