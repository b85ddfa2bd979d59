"""Random figure scenarios with numerically true given facts.

Each scenario builds a knowledge base whose givens hold exactly in the
figure coordinates, so every sound deduction from them must also hold
numerically.  Together the scenarios exercise every rule in the catalog.
"""
import math

from geotutor.geom import Point, ProblemFigure, seg
from geotutor.knowledge import Knowledge, canon_fact


def make_knowledge(pts, segs, givens):
    fig = ProblemFigure()
    for pid, (x, y) in pts.items():
        fig.add_point(Point(pid, x, y))
    for ab in segs:
        fig.add_segment(seg(*ab))
    k = Knowledge(fig)
    for (pred, args, val) in givens:
        f = canon_fact(k, pred, args, val)
        if f is not None:
            k.add(f, "given")
    return k


def _angle(pts, v, p, q):
    vx, vy = pts[v]
    a1 = math.atan2(pts[p][1] - vy, pts[p][0] - vx)
    a2 = math.atan2(pts[q][1] - vy, pts[q][0] - vx)
    d = abs(a1 - a2) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def _rot(p, th, tx, ty):
    return (p[0] * math.cos(th) - p[1] * math.sin(th) + tx,
            p[0] * math.sin(th) + p[1] * math.cos(th) + ty)


def scen_iso(rng):
    """Isosceles triangle with its altitude drawn: given apex equality and
    the perpendicularity; yields base-angle and altitude-median rules."""
    ax = rng.uniform(-3, -1)
    bx = rng.uniform(1, 3)
    mx = (ax + bx) / 2
    h = rng.uniform(1.5, 4)
    pts = {"A": (ax, 0.0), "B": (bx, 0.0), "F": (mx, 0.0), "X": (mx, h)}
    segs = [("A", "F"), ("F", "B"), ("X", "A"), ("X", "B"), ("X", "F")]
    g = [("seg_eq", [["X", "A"], ["X", "B"]], None),
         ("perp", [["X", "F"], ["A", "B"]], None)]
    return make_knowledge(pts, segs, g)


def scen_iso_median(rng):
    """Isosceles triangle with the median to its base given as a midpoint."""
    ax = rng.uniform(-3, -1)
    h = rng.uniform(1.5, 4)
    pts = {"A": (ax, 0.0), "B": (-ax, 0.0), "M": (0.0, 0.0), "X": (0.0, h)}
    segs = [("A", "M"), ("M", "B"), ("X", "A"), ("X", "B"), ("X", "M")]
    g = [("seg_eq", [["X", "A"], ["X", "B"]], None),
         ("midpoint", ["M", ["A", "B"]], None)]
    return make_knowledge(pts, segs, g)


def scen_iso_converse(rng):
    """Only the base-angle equality is given, so the converse rule is the
    direct way to reach seg_eq(XA, XB)."""
    ax = rng.uniform(-3, -1)
    h = rng.uniform(1.5, 4)
    pts = {"A": (ax, 0.0), "B": (-ax, 0.0), "X": (0.0, h)}
    segs = [("A", "B"), ("X", "A"), ("X", "B")]
    g = [("angle_eq", [["A", "X", "B"], ["B", "X", "A"]], None)]
    return make_knowledge(pts, segs, g)


def scen_alt_converse(rng):
    """Equal alternate angles given on a transversal; parallel follows."""
    sl = rng.uniform(-0.3, 0.3)
    y2 = rng.uniform(2, 3)

    def on(yl, x):
        return (x, yl + sl * x)

    G, H = on(0, rng.uniform(-1, 1)), on(y2, rng.uniform(-1, 1))
    pts = {"A": on(0, -3), "B": on(0, 3), "C": on(y2, -3), "D": on(y2, 3),
           "G": G, "H": H}
    segs = [("A", "G"), ("G", "B"), ("C", "H"), ("H", "D"), ("G", "H")]
    g = [("angle_eq", [["G", "A", "H"], ["H", "D", "G"]], None)]
    return make_knowledge(pts, segs, g)


def scen_cong(rng, mode):
    """A triangle and a rigid copy, with sss / sas / asa givens."""
    A = (0, 0)
    B = (rng.uniform(2, 4), 0)
    C = (rng.uniform(0.5, 1.5), rng.uniform(1.5, 3))
    th = rng.uniform(0, 2 * math.pi)
    tx, ty = rng.uniform(6, 9), rng.uniform(-2, 2)
    D, E, F = (_rot(p, th, tx, ty) for p in (A, B, C))
    pts = dict(A=A, B=B, C=C, D=D, E=E, F=F)
    segs = [("A", "B"), ("B", "C"), ("A", "C"),
            ("D", "E"), ("E", "F"), ("D", "F")]
    if mode == "sss":
        g = [("seg_eq", [["A", "B"], ["D", "E"]], None),
             ("seg_eq", [["B", "C"], ["E", "F"]], None),
             ("seg_eq", [["A", "C"], ["D", "F"]], None)]
    elif mode == "sas":
        g = [("seg_eq", [["A", "B"], ["D", "E"]], None),
             ("angle_eq", [["A", "B", "C"], ["D", "E", "F"]], None),
             ("seg_eq", [["A", "C"], ["D", "F"]], None)]
    else:
        g = [("angle_eq", [["A", "B", "C"], ["D", "E", "F"]], None),
             ("seg_eq", [["A", "B"], ["D", "E"]], None),
             ("angle_eq", [["B", "A", "C"], ["E", "D", "F"]], None)]
    return make_knowledge(pts, segs, g)


def scen_parallel(rng):
    """Three parallels cut by a transversal, one crossing angle measured."""
    sl = rng.uniform(-0.3, 0.3)
    y2 = rng.uniform(1.5, 2.5)
    y3 = rng.uniform(3.5, 4.5)

    def on(yl, x):
        return (x, yl + sl * x)

    P1, P3 = on(0, rng.uniform(-1, 1)), on(y3, rng.uniform(-0.5, 0.5))
    dx, dy = P3[0] - P1[0], P3[1] - P1[1]
    t = (y2 - (P1[1] - sl * P1[0])) / (dy - sl * dx)
    P2 = (P1[0] + t * dx, P1[1] + t * dy)
    pts = {"A": on(0, -3), "B": on(0, 3), "C": on(y2, -3), "D": on(y2, 3),
           "E": on(y3, -3), "F": on(y3, 3), "G": P1, "H": P2, "I": P3}
    segs = [("A", "G"), ("G", "B"), ("C", "H"), ("H", "D"),
            ("E", "I"), ("I", "F"), ("G", "H"), ("H", "I")]
    g = [("parallel", [["A", "B"], ["C", "D"]], None),
         ("parallel", [["C", "D"], ["E", "F"]], None),
         ("angle_measure", [["G", "B", "H"]], _angle(pts, "G", "B", "H"))]
    return make_knowledge(pts, segs, g)


def scen_perp_parallel(rng):
    """Two perpendiculars to one line, plus the parallel connecting them."""
    x1, x2 = rng.uniform(-3, -1), rng.uniform(1, 3)
    h = rng.uniform(2, 4)
    pts = {"A": (x1, 0.0), "B": (x2, 0.0), "C": (x1, h), "D": (x2, h),
           "E": (-4.0, 0.0), "F": (4.0, 0.0)}
    segs = [("E", "A"), ("A", "B"), ("B", "F"), ("A", "C"), ("B", "D"),
            ("C", "D")]
    g = [("perp", [["A", "C"], ["A", "B"]], None),
         ("perp", [["B", "D"], ["A", "B"]], None),
         ("parallel", [["C", "D"], ["A", "B"]], None)]
    return make_knowledge(pts, segs, g)


def scen_right_angle(rng):
    """Right triangle with the median to the hypotenuse drawn."""
    b = rng.uniform(2, 4)
    h = rng.uniform(1.5, 3)
    pts = {"C": (0.0, 0.0), "A": (0.0, h), "B": (b, 0.0),
           "M": (b / 2, h / 2)}
    segs = [("C", "A"), ("C", "B"), ("A", "M"), ("M", "B"), ("C", "M")]
    g = [("angle_measure", [["C", "A", "B"]], math.pi / 2),
         ("midpoint", ["M", ["A", "B"]], None)]
    return make_knowledge(pts, segs, g)


def scen_midsegment(rng):
    """Triangle with a midsegment; one midpoint given directly, the other
    only through the defining segment equality."""
    A = (0.0, 0.0)
    B = (rng.uniform(3, 5), 0.0)
    C = (rng.uniform(0.5, 2), rng.uniform(2, 4))
    D = ((A[0] + B[0]) / 2, (A[1] + B[1]) / 2)
    E = ((A[0] + C[0]) / 2, (A[1] + C[1]) / 2)
    pts = dict(A=A, B=B, C=C, D=D, E=E)
    segs = [("A", "D"), ("D", "B"), ("A", "E"), ("E", "C"), ("B", "C"),
            ("D", "E")]
    g = [("midpoint", ["D", ["A", "B"]], None),
         ("seg_eq", [["A", "E"], ["E", "C"]], None)]
    return make_knowledge(pts, segs, g)


def scen_measures(rng):
    """Triangle with two measured angles, a side extension, and a crossing:
    angle arithmetic, supplements, exterior angles, vertical angles."""
    A = (0.0, 0.0)
    B = (rng.uniform(3, 5), 0.0)
    C = (rng.uniform(1, 2), rng.uniform(2, 3))
    D = (B[0] + rng.uniform(1, 2), 0.0)
    E = (B[0] + (B[0] - C[0]) * 0.8, -C[1] * 0.8)
    pts = dict(A=A, B=B, C=C, D=D, E=E)
    segs = [("A", "B"), ("B", "D"), ("A", "C"), ("C", "B"), ("B", "E")]
    g = [("angle_measure", [["A", "B", "C"]], _angle(pts, "A", "B", "C")),
         ("angle_measure", [["B", "A", "C"]], _angle(pts, "B", "A", "C")),
         ("between", ["C", "B", "E"], None)]
    return make_knowledge(pts, segs, g)


def scen_chain(rng):
    """Fan of equally spaced rays (angle chains and sum propagation) plus
    a collinear run with equal pieces (segment chains and sum algebra)."""
    t = rng.uniform(0.3, 0.5)
    phi = rng.uniform(0.2, 0.6)
    R = rng.uniform(2, 3)
    fan = {n: (R * math.cos(phi + i * t), R * math.sin(phi + i * t))
           for i, n in enumerate("ABCD")}
    x1 = rng.uniform(0.8, 1.5)
    pts = {"X": (0.0, 0.0), **fan,
           "P": (-1.0, -1.0), "Q": (-1.0 - x1, -1.0),
           "R": (-1.0 - 2 * x1, -1.0), "S": (-1.0 - 3 * x1, -1.0)}
    segs = [("X", n) for n in "ABCD"] + [("P", "Q"), ("Q", "R"), ("R", "S")]
    g = [("angle_eq", [["X", "A", "B"], ["X", "B", "C"]], None),
         ("angle_eq", [["X", "B", "C"], ["X", "C", "D"]], None),
         ("angle_measure", [["X", "A", "B"]], t),
         ("angle_measure", [["X", "B", "C"]], t),
         ("seg_eq", [["P", "Q"], ["Q", "R"]], None),
         ("seg_eq", [["Q", "R"], ["R", "S"]], None)]
    return make_knowledge(pts, segs, g)


SCENARIOS = (
    scen_iso,
    scen_iso_median,
    scen_iso_converse,
    scen_alt_converse,
    lambda rng: scen_cong(rng, "sss"),
    lambda rng: scen_cong(rng, "sas"),
    lambda rng: scen_cong(rng, "asa"),
    scen_parallel,
    scen_perp_parallel,
    scen_right_angle,
    scen_midsegment,
    scen_measures,
    scen_chain,
)
