"""Symbolic facts over a figure.

A Fact is a canonicalized, hashable statement.  Argument encoding per
predicate (all point / line arguments are canonical already when a Fact is
built through Knowledge helpers):

    seg_eq        ((a,b),(c,d))            |ab| = |cd|, pairs sorted
    seg_sum       ((a,b),(c,d),(e,f))      |ab| + |cd| = |ef|, addends sorted
    midpoint      (m,(a,b))                m is the midpoint of ab
    angle_eq      (A1, A2)                 angles sorted
    angle_measure (A,)                     value = radians
    angle_sum     (A1, A2, A3)             m(A1)+m(A2) = m(A3), addends sorted
    supplementary (A1, A2)                 m(A1)+m(A2) = pi, sorted
    perp          (L1, L2)                 line keys sorted
    parallel      (L1, L2)                 line keys sorted
    collinear     (a,b,c)                  sorted
    between       (a,m,b)                  outer pair sorted
    congruent_tri ((a,b,c),(d,e,f))        correspondence-canonical
    similar_tri   ((a,b,c),(d,e,f))        correspondence-canonical

where an angle key A is (vertex, (r1, r2)) with r1 < r2 the canonical ray
representatives and a line key L is the sorted tuple of every figure point
on the line.
"""
from __future__ import annotations

from dataclasses import dataclass

PREDICATES = (
    "seg_eq", "seg_sum", "midpoint",
    "angle_eq", "angle_measure", "angle_sum", "supplementary",
    "perp", "parallel",
    "collinear", "between",
    "congruent_tri", "similar_tri",
)

VALUE_NDIGITS = 9


@dataclass(frozen=True)
class Fact:
    pred: str
    args: tuple
    value: float | None = None

    def __repr__(self):
        v = f"={self.value:.6g}" if self.value is not None else ""
        return f"{self.pred}{self.args!r}{v}"


def fmt_angle(a) -> str:
    v, (r1, r2) = a
    return f"angle {r1}{v}{r2}"


def fmt_fact(f: Fact) -> str:
    """Human-readable rendering used in proof output."""
    p, a = f.pred, f.args
    if p == "seg_eq":
        return f"{''.join(a[0])} = {''.join(a[1])}"
    if p == "seg_sum":
        return f"{''.join(a[0])} + {''.join(a[1])} = {''.join(a[2])}"
    if p == "midpoint":
        return f"{a[0]} is the midpoint of {''.join(a[1])}"
    if p == "angle_eq":
        return f"{fmt_angle(a[0])} = {fmt_angle(a[1])}"
    if p == "angle_measure":
        import math
        return f"{fmt_angle(a[0])} = {math.degrees(f.value):.6g} deg"
    if p == "angle_sum":
        return f"{fmt_angle(a[0])} + {fmt_angle(a[1])} = {fmt_angle(a[2])}"
    if p == "supplementary":
        return f"{fmt_angle(a[0])} + {fmt_angle(a[1])} = 180 deg"
    if p == "perp":
        return f"line {''.join(a[0])} perp line {''.join(a[1])}"
    if p == "parallel":
        return f"line {''.join(a[0])} parallel line {''.join(a[1])}"
    if p == "collinear":
        return f"{', '.join(a)} collinear"
    if p == "between":
        return f"{a[1]} between {a[0]} and {a[2]}"
    if p == "congruent_tri":
        return f"triangle {''.join(a[0])} congruent to triangle {''.join(a[1])}"
    if p == "similar_tri":
        return f"triangle {''.join(a[0])} similar to triangle {''.join(a[1])}"
    return repr(f)


def tri_canonical(t1: tuple, t2: tuple) -> tuple:
    """Canonical form of a triangle correspondence.

    Applying the same permutation to both triples, or swapping the two
    triples, preserves the correspondence; pick the lexicographic minimum.
    """
    perms = ((0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2))
    best = None
    for pa, pb in ((t1, t2), (t2, t1)):
        for perm in perms:
            cand = (tuple(pa[i] for i in perm), tuple(pb[i] for i in perm))
            if best is None or cand < best:
                best = cand
    return best
