"""Regenerate the problem corpus.

Coordinates are computed analytically so every stated constraint holds to
full double precision; the loader refuses figures whose coordinates do not
satisfy the givens.  Run from the repository root:

    python tools/make_corpus.py
"""
import json
import math
import os

OUT = os.path.join(os.path.dirname(__file__), os.pardir, "corpus")


def foot(p, a, d):
    """Foot of the perpendicular from p onto the line a + t*d."""
    px, py = p
    ax, ay = a
    dx, dy = d
    t = ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)
    return (ax + t * dx, ay + t * dy)


def isect(a, d1, b, d2):
    """Intersection of lines a + t*d1 and b + s*d2."""
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    t = ((b[0] - a[0]) * d2[1] - (b[1] - a[1]) * d2[0]) / cross
    return (a[0] + t * d1[0], a[1] + t * d1[1])


def unit(v):
    n = math.hypot(*v)
    return (v[0] / n, v[1] / n)


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def pre1():
    """Right angles on a cevian: prove DF = EF."""
    B, C, F = (0.0, 0.0), (6.0, 0.0), (3.0, 0.0)
    E = (2.0, -1.0)
    A = (3.5, 2.0)                      # on the line through E with slope 2
    D = foot(C, E, sub(A, E))           # foot of the perpendicular from C
    return {
        "name": "pre1",
        "points": {"A": A, "B": B, "C": C, "D": D, "E": E, "F": F},
        "segments": [["A", "B"], ["B", "E"], ["E", "F"], ["F", "C"],
                     ["C", "A"], ["A", "E"], ["C", "D"], ["D", "F"],
                     ["B", "F"]],
        "constraints": [
            {"kind": "perp", "args": [["A", "E"], ["C", "D"]]},
            {"kind": "perp", "args": [["A", "E"], ["B", "E"]]},
            {"kind": "seg_eq", "args": [["B", "F"], ["C", "F"]]},
        ],
        "goal": [{"kind": "seg_eq", "args": [["D", "F"], ["E", "F"]]}],
    }


def pre2():
    """Bisector hits a doubled altitude: prove BD bisects angle ABC."""
    C, A, B = (0.0, 0.0), (0.0, 4.0), (4.0, 0.0)
    D = (0.0, 4.0 * math.tan(math.radians(22.5)))
    E = foot(A, B, sub(D, B))
    return {
        "name": "pre2",
        "points": {"A": A, "B": B, "C": C, "D": D, "E": E},
        "segments": [["A", "C"], ["C", "B"], ["A", "B"], ["A", "E"],
                     ["E", "B"]],
        "constraints": [
            {"kind": "perp", "args": [["A", "C"], ["C", "B"]]},
            {"kind": "seg_eq", "args": [["A", "C"], ["C", "B"]]},
            {"kind": "perp", "args": [["A", "E"], ["B", "E"]]},
            {"kind": "seg_sum",
             "args": [["A", "E"], ["A", "E"], ["B", "D"]]},
        ],
        "goal": [{"kind": "angle_eq",
                  "args": [["B", "A", "D"], ["B", "C", "D"]]}],
    }


def pre3():
    """Doubled angle with a bisector: prove AC + CD = AB."""
    B, C = (0.0, 0.0), (1.0, 0.0)
    t40 = math.tan(math.radians(40))
    t80 = math.tan(math.radians(80))
    x = t80 / (t40 + t80)
    A = (x, x * t40)
    ab = math.dist(A, B)
    ac = math.dist(A, C)
    D = (ab / (ab + ac), 0.0)           # bisector foot: BD/DC = AB/AC
    return {
        "name": "pre3",
        "points": {"A": A, "B": B, "C": C, "D": D},
        "segments": [["A", "B"], ["B", "D"], ["D", "C"], ["C", "A"],
                     ["A", "D"]],
        "constraints": [
            {"kind": "angle_sum",
             "args": [["B", "A", "C"], ["B", "A", "C"], ["C", "A", "B"]]},
            {"kind": "angle_eq",
             "args": [["A", "B", "D"], ["A", "C", "D"]]},
        ],
        "goal": [{"kind": "seg_sum",
                  "args": [["A", "C"], ["C", "D"], ["A", "B"]]}],
    }


def post1():
    """Trapezoid with AB = AD + BC: prove AE and BE bisect the base angles."""
    B, C = (0.0, 0.0), (4.0, 0.0)
    h = math.sqrt(36.0 - 1.44)
    A, D = (1.2, h), (3.2, h)
    E = ((D[0] + C[0]) / 2, (D[1] + C[1]) / 2)
    return {
        "name": "post1",
        "points": {"A": A, "B": B, "C": C, "D": D, "E": E},
        "segments": [["A", "B"], ["B", "C"], ["C", "D"], ["D", "A"],
                     ["A", "E"], ["B", "E"]],
        "constraints": [
            {"kind": "seg_sum",
             "args": [["A", "D"], ["B", "C"], ["A", "B"]]},
            {"kind": "seg_eq", "args": [["D", "E"], ["E", "C"]]},
            {"kind": "parallel", "args": [["A", "D"], ["B", "C"]]},
        ],
        "goal": [
            {"kind": "angle_eq", "args": [["A", "B", "E"], ["A", "D", "E"]]},
            {"kind": "angle_eq", "args": [["B", "A", "E"], ["B", "C", "E"]]},
        ],
    }


def post2():
    """Feet of perpendiculars onto the bisectors: prove KH parallel to BC."""
    B, C, A = (0.0, 0.0), (6.0, 0.0), (2.0, 4.0)
    ub = unit((unit(sub(A, B))[0] + unit(sub(C, B))[0],
               unit(sub(A, B))[1] + unit(sub(C, B))[1]))
    uc = unit((unit(sub(A, C))[0] + unit(sub(B, C))[0],
               unit(sub(A, C))[1] + unit(sub(B, C))[1]))
    P = isect(B, ub, A, sub(C, A))      # bisector from B meets AC
    Q = isect(C, uc, A, sub(B, A))      # bisector from C meets AB
    H = foot(A, B, ub)
    K = foot(A, C, uc)
    return {
        "name": "post2",
        "points": {"A": A, "B": B, "C": C, "P": P, "Q": Q, "H": H, "K": K},
        "segments": [["A", "B"], ["B", "C"], ["C", "A"], ["C", "Q"],
                     ["B", "P"], ["A", "K"], ["A", "H"], ["K", "H"]],
        "constraints": [
            {"kind": "angle_eq", "args": [["B", "A", "P"], ["B", "C", "P"]]},
            {"kind": "angle_eq", "args": [["C", "A", "Q"], ["C", "B", "Q"]]},
            {"kind": "perp", "args": [["A", "H"], ["B", "P"]]},
            {"kind": "perp", "args": [["A", "K"], ["C", "Q"]]},
        ],
        "goal": [{"kind": "parallel", "args": [["K", "H"], ["B", "C"]]}],
    }


def post3():
    """AB = 2 AC with AD = BD on the bisector: prove DC perpendicular to AC."""
    A = (0.0, 0.0)
    a35 = math.radians(35)
    B = (2 * math.sin(a35), -2 * math.cos(a35))
    C = (-math.sin(a35), -math.cos(a35))
    d = 1.0 / math.cos(a35) / 2 * 2     # |AD| = |AB|^2 / (2 |B_y|)
    d = 4.0 / (2 * 2 * math.cos(a35))
    D = (0.0, -d)
    return {
        "name": "post3",
        "points": {"A": A, "B": B, "C": C, "D": D},
        "segments": [["A", "B"], ["A", "C"], ["A", "D"], ["B", "D"],
                     ["D", "C"], ["B", "C"]],
        "constraints": [
            {"kind": "angle_eq", "args": [["A", "B", "D"], ["A", "C", "D"]]},
            {"kind": "seg_sum",
             "args": [["A", "C"], ["A", "C"], ["A", "B"]]},
            {"kind": "seg_eq", "args": [["A", "D"], ["B", "D"]]},
        ],
        "goal": [{"kind": "perp", "args": [["D", "C"], ["A", "C"]]}],
    }


def broken_chord():
    """Isosceles apex 100 degrees with a bisector: prove BC = BD + DP."""
    P = (0.0, 0.0)
    s50, c50 = math.sin(math.radians(50)), math.cos(math.radians(50))
    B, C = (-s50, -c50), (s50, -c50)
    pd = math.sin(math.radians(20)) / math.sin(math.radians(60))
    D = (pd * s50, -pd * c50)
    return {
        "name": "broken_chord",
        "points": {"B": B, "C": C, "D": D, "P": P},
        "segments": [["B", "P"], ["P", "C"], ["B", "C"], ["B", "D"]],
        "constraints": [
            {"kind": "seg_eq", "args": [["B", "P"], ["C", "P"]]},
            {"kind": "angle_measure", "args": [["P", "B", "C"]],
             "degrees": 100},
            {"kind": "angle_eq", "args": [["B", "P", "D"], ["B", "C", "D"]]},
        ],
        "goal": [{"kind": "seg_sum",
                  "args": [["B", "D"], ["D", "P"], ["B", "C"]]}],
    }


def iso_warmup():
    """No construction needed: equal sides give equal base angles."""
    A, B, C = (0.0, 2.0), (-1.0, 0.0), (1.0, 0.0)
    return {
        "name": "iso_warmup",
        "points": {"A": A, "B": B, "C": C},
        "segments": [["A", "B"], ["B", "C"], ["C", "A"]],
        "constraints": [
            {"kind": "seg_eq", "args": [["A", "B"], ["A", "C"]]},
        ],
        "goal": [{"kind": "angle_eq",
                  "args": [["B", "A", "C"], ["C", "A", "B"]]}],
    }


MANIFEST = {
    "problems": [
        {"file": "pre1.json", "max_depth": 3,
         "expect": {"steps": 1, "options": [
             {"template": "opposite_triangle", "strokes": 1,
              "new_points": [{"on_lines": [["E", "F"], ["D", "C"]]}]},
             {"template": "opposite_triangle", "strokes": 2,
              "new_points": [{"on_lines": [["B", "E"], ["D", "F"]]}]},
         ]}},
        {"file": "pre2.json", "max_depth": 3,
         "expect": {"steps": 1, "options": [
             {"template": "isosceles_triangle_1", "strokes": 2,
              "new_points": [{"on_lines": [["A", "E"], ["C", "B"]]}]},
         ]}},
        {"file": "pre3.json", "max_depth": 3,
         "expect": {"steps": 1, "options": [
             {"template": "congruent_triangle", "strokes": 1,
              "new_points": [{"on_lines": [["A", "B"]],
                              "dist_eq": [[["A", "@"], ["A", "C"]]]}]},
             {"template": "congruent_triangle", "strokes": 2,
              "new_points": [{"on_lines": [["A", "C"]],
                              "dist_eq": [[["A", "@"], ["A", "B"]]]}]},
         ]}},
        {"file": "post1.json", "max_depth": 3,
         "expect": {"steps": 1, "options": [
             {"template": "isosceles_triangle_2", "strokes": 2,
              "new_points": [{"on_lines": [["A", "E"], ["B", "C"]]}]},
             {"template": "isosceles_triangle_2", "strokes": 2,
              "new_points": [{"on_lines": [["B", "E"], ["A", "D"]]}]},
             {"template": "congruent_triangle", "strokes": 2,
              "new_points": [{"on_lines": [["A", "E"], ["B", "C"]]}]},
             {"template": "congruent_triangle", "strokes": 2,
              "new_points": [{"on_lines": [["B", "E"], ["A", "D"]]}]},
         ]}},
        {"file": "post2.json", "max_depth": 3,
         "expect": {"steps": 2, "options": [
             {"template": "isosceles_triangle_1", "strokes": 1,
              "new_points": [{"on_lines": [["A", "K"], ["B", "C"]]}]},
             {"template": "isosceles_triangle_1", "strokes": 1,
              "new_points": [{"on_lines": [["A", "H"], ["B", "C"]]}]},
             {"template": "isosceles_triangle_2", "strokes": 1,
              "new_points": [{"on_lines": [["A", "K"], ["B", "C"]]}]},
             {"template": "isosceles_triangle_2", "strokes": 1,
              "new_points": [{"on_lines": [["A", "H"], ["B", "C"]]}]},
         ]}},
        {"file": "post3.json", "max_depth": 3,
         "expect": {"steps": 1, "options": [
             {"template": "congruent_triangle", "strokes": 1,
              "new_points": [{"on_lines": [["A", "B"]],
                              "dist_eq": [[["A", "@"], ["A", "C"]]]}]},
         ]}},
    ]
}


def main():
    os.makedirs(OUT, exist_ok=True)
    for make in (pre1, pre2, pre3, post1, post2, post3, broken_chord,
                 iso_warmup):
        data = make()
        path = os.path.join(OUT, data["name"] + ".json")
        with open(path, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
        print("wrote", path)
    with open(os.path.join(OUT, "manifest.json"), "w") as fh:
        json.dump(MANIFEST, fh, indent=2)
        fh.write("\n")
    print("wrote manifest.json")


if __name__ == "__main__":
    main()
