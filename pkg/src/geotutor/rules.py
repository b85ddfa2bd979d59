"""Deduction rule catalog.

Each rule scans the knowledge base and yields (fact, premises) pairs; the
engine adds whatever is new.  Rules may consult figure topology (incidence,
betweenness, ray membership) but never numeric lengths or angle values:
metric conclusions come only from metric premises.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .facts import Fact
from .knowledge import canon_fact

PI = math.pi
HALF_PI = round(PI / 2, 9)


@dataclass(frozen=True)
class Rule:
    id: str
    citation: str
    apply: object  # Callable[[Knowledge], Iterable[tuple[Fact, tuple]]]


# -- small helpers ----------------------------------------------------------

def _angle_ray_points(k, a):
    """Points on each ray of angle key a = (v, (r1, r2))."""
    v, (r1, r2) = a
    return (k.fig.ray_points(v, r1), k.fig.ray_points(v, r2))


def _common_on_rays(k, v1, ray1_rep, v2, ray2_rep):
    """Figure points on ray(v1->ray1_rep) and ray(v2->ray2_rep)."""
    fig = k.fig
    out = []
    for p in fig.ray_points(v1, ray1_rep):
        if fig.on_ray(v2, ray2_rep, p):
            out.append(p)
    return out


def _situations(k, fa_args, fb_args):
    """Interpret two equal-angle pairs as two angles of two triangles.

    fa_args = (alpha1, alpha2), fb_args = (beta1, beta2) with the
    correspondence alpha_i ~ beta_i at distinct vertices of triangle i.
    Yields ((A1,B1,C1), (A2,B2,C2)) where the alpha angles sit at A*, the
    beta angles at B*, and C* is the remaining vertex.

    The result depends only on figure topology, so it is memoised on the
    figure's cache.
    """
    fig = k.fig
    key = ("situ", fa_args, fb_args)
    hit = fig._cache.get(key)
    if hit is None:
        hit = tuple(_situations_raw(k, fa_args, fb_args))
        fig._cache[key] = hit
    return hit


def _situations_raw(k, fa_args, fb_args):
    fig = k.fig
    (a1, a2) = fa_args
    (b1, b2) = fb_args
    A1, A2 = a1[0], a2[0]
    B1, B2 = b1[0], b2[0]
    if A1 == B1 or A2 == B2:
        return
    for i1, r in enumerate(a1[1]):
        if not fig.on_ray(A1, r, B1):
            continue
        oa1 = a1[1][1 - i1]
        for j1, s in enumerate(b1[1]):
            if not fig.on_ray(B1, s, A1):
                continue
            ob1 = b1[1][1 - j1]
            for i2, r2 in enumerate(a2[1]):
                if not fig.on_ray(A2, r2, B2):
                    continue
                oa2 = a2[1][1 - i2]
                for j2, s2 in enumerate(b2[1]):
                    if not fig.on_ray(B2, s2, A2):
                        continue
                    ob2 = b2[1][1 - j2]
                    for C1 in _common_on_rays(k, A1, oa1, B1, ob1):
                        for C2 in _common_on_rays(k, A2, oa2, B2, ob2):
                            if C1 in (A1, B1) or C2 in (A2, B2):
                                continue
                            if fig.collinear(A1, B1, C1):
                                continue
                            if fig.collinear(A2, B2, C2):
                                continue
                            yield (A1, B1, C1), (A2, B2, C2)


def _angle_eq_pairs(k):
    """Ordered correspondences from angle_eq facts: (a, b, premises)."""
    for f in k.by_pred("angle_eq"):
        a1, a2 = f.args
        yield a1, a2, (f,)
        yield a2, a1, (f,)


# -- equality closure -------------------------------------------------------

def _r_seg_eq_chain(k):
    adj = {}
    for f in k.by_pred("seg_eq"):
        s, t = f.args
        adj.setdefault(s, []).append((t, f))
        adj.setdefault(t, []).append((s, f))
    for s, nbrs in adj.items():
        for i, (t1, f1) in enumerate(nbrs):
            for (t2, f2) in nbrs[i + 1:]:
                if t1 == t2:
                    continue
                yield Fact("seg_eq", tuple(sorted((t1, t2)))), (f1, f2)


def _r_angle_eq_chain(k):
    adj = {}
    for f in k.by_pred("angle_eq"):
        a, b = f.args
        adj.setdefault(a, []).append((b, f))
        adj.setdefault(b, []).append((a, f))
    for a, nbrs in adj.items():
        for i, (b1, f1) in enumerate(nbrs):
            for (b2, f2) in nbrs[i + 1:]:
                if b1 == b2:
                    continue
                yield Fact("angle_eq", tuple(sorted((b1, b2)))), (f1, f2)


def _r_angle_eq_from_measures(k):
    by_val = {}
    for f in k.by_pred("angle_measure"):
        by_val.setdefault(f.value, []).append(f)
    for fs in by_val.values():
        for i, f1 in enumerate(fs):
            for f2 in fs[i + 1:]:
                yield (Fact("angle_eq",
                            tuple(sorted((f1.args[0], f2.args[0])))),
                       (f1, f2))


def _r_measure_via_eq(k):
    meas = k.measures()
    for f in k.by_pred("angle_eq"):
        a, b = f.args
        if a in meas and b not in meas:
            v, mf = meas[a]
            yield Fact("angle_measure", (b,), v), (f, mf)
        elif b in meas and a not in meas:
            v, mf = meas[b]
            yield Fact("angle_measure", (a,), v), (f, mf)


# -- perpendicular / parallel ----------------------------------------------

def _r_perp_right_angles(k):
    fig = k.fig
    for f in k.by_pred("perp"):
        l1, l2 = f.args
        for v in set(l1) & set(l2):
            reps1 = {fig.ray_rep(v, p) for p in l1 if p != v}
            reps2 = {fig.ray_rep(v, p) for p in l2 if p != v}
            for r1 in sorted(reps1):
                for r2 in sorted(reps2):
                    a = k.angle_at(v, r1, r2)
                    if a is not None:
                        yield Fact("angle_measure", (a,), HALF_PI), (f,)


def _r_right_angle_perp(k):
    for f in k.by_pred("angle_measure"):
        if f.value != HALF_PI:
            continue
        v, (r1, r2) = f.args[0]
        g = canon_fact(k, "perp", ((v, r1), (v, r2)))
        if g:
            yield g, (f,)


def _r_perp_perp_parallel(k):
    adj = {}
    for f in k.by_pred("perp"):
        l1, l2 = f.args
        adj.setdefault(l1, []).append((l2, f))
        adj.setdefault(l2, []).append((l1, f))
    for l, nbrs in adj.items():
        for i, (m1, f1) in enumerate(nbrs):
            for (m2, f2) in nbrs[i + 1:]:
                if m1 == m2:
                    continue
                yield Fact("parallel", tuple(sorted((m1, m2)))), (f1, f2)


def _r_parallel_perp(k):
    perps = k.by_pred("perp")
    for fp in k.by_pred("parallel"):
        p1, p2 = fp.args
        for fq in perps:
            q1, q2 = fq.args
            for a, b in ((p1, p2), (p2, p1)):
                for c, d in ((q1, q2), (q2, q1)):
                    if a == c and b != d:
                        yield (Fact("perp", tuple(sorted((b, d)))), (fp, fq))


def _r_parallel_chain(k):
    adj = {}
    for f in k.by_pred("parallel"):
        l1, l2 = f.args
        adj.setdefault(l1, []).append((l2, f))
        adj.setdefault(l2, []).append((l1, f))
    for l, nbrs in adj.items():
        for i, (m1, f1) in enumerate(nbrs):
            for (m2, f2) in nbrs[i + 1:]:
                if m1 == m2:
                    continue
                yield Fact("parallel", tuple(sorted((m1, m2)))), (f1, f2)


def _side(fig, p1, p2, x):
    """Which side of line p1p2 the point x lies on (-1, 0, 1)."""
    ax, ay = fig.xy(p1)
    bx, by = fig.xy(p2)
    xx, xy_ = fig.xy(x)
    c = (bx - ax) * (xy_ - ay) - (by - ay) * (xx - ax)
    n = math.hypot(bx - ax, by - ay)
    if abs(c) / max(n, 1e-12) <= fig.epsilon_len:
        return 0
    return 1 if c > 0 else -1


def _r_alternate_angles(k):
    """Parallel lines cut by a drawn transversal: alternate angles equal,
    co-interior angles supplementary."""
    fig = k.fig
    drawn = set(fig.lines())
    for f in k.by_pred("parallel"):
        l1, l2 = f.args
        for P1 in l1:
            for P2 in l2:
                if P1 == P2 or P2 in l1 or P1 in l2:
                    continue
                t = fig.line_of(P1, P2)
                if t not in drawn:
                    continue
                reps1 = sorted({fig.ray_rep(P1, p) for p in l1 if p != P1})
                reps2 = sorted({fig.ray_rep(P2, p) for p in l2 if p != P2})
                for r1 in reps1:
                    s1 = _side(fig, P1, P2, r1)
                    a1 = k.angle_at(P1, r1, P2)
                    if a1 is None or s1 == 0:
                        continue
                    for r2 in reps2:
                        s2 = _side(fig, P1, P2, r2)
                        a2 = k.angle_at(P2, r2, P1)
                        if a2 is None or s2 == 0:
                            continue
                        if s1 * s2 < 0:
                            if a1 != a2:
                                yield (Fact("angle_eq",
                                            tuple(sorted((a1, a2)))), (f,))
                        else:
                            yield (Fact("supplementary",
                                        tuple(sorted((a1, a2)))), (f,))


def _r_alternate_converse(k):
    fig = k.fig
    for a1, a2, prem in _angle_eq_pairs(k):
        v1, rays1 = a1
        v2, rays2 = a2
        if v1 == v2:
            continue
        for i, r in enumerate(rays1):
            if not fig.on_ray(v1, r, v2):
                continue
            o1 = rays1[1 - i]
            for j, s in enumerate(rays2):
                if not fig.on_ray(v2, s, v1):
                    continue
                o2 = rays2[1 - j]
                if _side(fig, v1, v2, o1) * _side(fig, v1, v2, o2) < 0:
                    g = canon_fact(k, "parallel", ((v1, o1), (v2, o2)))
                    if g:
                        yield g, prem


def _r_vertical_angles(k):
    fig = k.fig
    for v in sorted(fig.points):
        rays = fig.rays_at(v)
        if len(rays) < 3:
            continue
        opp = {r: fig.opposite_ray_rep(v, r) for r in rays}
        for i, r1 in enumerate(rays):
            for r2 in rays[i + 1:]:
                o1, o2 = opp[r1], opp[r2]
                if o1 is None or o2 is None:
                    continue
                a = k.angle_at(v, r1, r2)
                b = k.angle_at(v, o1, o2)
                if a and b and a != b:
                    yield Fact("angle_eq", tuple(sorted((a, b)))), ()


# -- triangles: angle sums and congruence -----------------------------------

def _r_triangle_sum(k):
    fig = k.fig
    meas = k.measures()
    eqs = {tuple(sorted(f.args)): f for f in k.by_pred("angle_eq")}
    pts = sorted(fig.points)
    for i, X in enumerate(pts):
        for j, Y in enumerate(pts[i + 1:], i + 1):
            for Z in pts[j + 1:]:
                if fig.collinear(X, Y, Z):
                    continue
                ax = k.angle_at(X, Y, Z)
                ay = k.angle_at(Y, X, Z)
                az = k.angle_at(Z, X, Y)
                if None in (ax, ay, az):
                    continue
                angles = [ax, ay, az]
                known = [(a, meas[a]) for a in angles if a in meas]
                unknown = [a for a in angles if a not in meas]
                if len(known) == 2 and len(unknown) == 1:
                    v = PI - known[0][1][0] - known[1][1][0]
                    if v > 1e-9:
                        yield (Fact("angle_measure", (unknown[0],),
                                    round(v, 9)),
                               (known[0][1][1], known[1][1][1]))
                elif len(known) == 1 and len(unknown) == 2:
                    key = tuple(sorted(unknown))
                    if key in eqs:
                        v = (PI - known[0][1][0]) / 2
                        if v > 1e-9:
                            for a in unknown:
                                yield (Fact("angle_measure", (a,),
                                            round(v, 9)),
                                       (known[0][1][1], eqs[key]))


def _r_third_angle(k):
    eqs = list(_angle_eq_pairs(k))
    for a1, a2, prem_a in eqs:
        for b1, b2, prem_b in eqs:
            if (a1, a2) == (b1, b2):
                continue
            for T1, T2 in _situations(k, (a1, a2), (b1, b2)):
                (A1, B1, C1), (A2, B2, C2) = T1, T2
                g = canon_fact(k, "angle_eq",
                               ((C1, A1, B1), (C2, A2, B2)))
                if g:
                    yield g, tuple(dict.fromkeys(prem_a + prem_b))


def _r_asa(k):
    eqs = list(_angle_eq_pairs(k))
    for a1, a2, prem_a in eqs:
        for b1, b2, prem_b in eqs:
            if (a1, a2) == (b1, b2):
                continue
            for T1, T2 in _situations(k, (a1, a2), (b1, b2)):
                (A1, B1, C1), (A2, B2, C2) = T1, T2
                side = k.eq_len(k.seg(A1, B1), k.seg(A2, B2))
                if side is None:
                    continue
                g = canon_fact(k, "congruent_tri",
                               ((A1, B1, C1), (A2, B2, C2)))
                if g and g.args[0] != g.args[1]:
                    yield g, tuple(dict.fromkeys(prem_a + prem_b + side))


def _r_sas(k):
    fig = k.fig
    for a1, a2, prem in _angle_eq_pairs(k):
        V1, rays1 = a1
        V2, rays2 = a2
        for flip in (False, True):
            m1, m2 = rays2 if not flip else (rays2[1], rays2[0])
            pts11 = fig.ray_points(V1, rays1[0])
            pts12 = fig.ray_points(V1, rays1[1])
            pts21 = fig.ray_points(V2, m1)
            pts22 = fig.ray_points(V2, m2)
            for Y1 in pts11:
                for Y2 in pts21:
                    e1 = k.eq_len(k.seg(V1, Y1), k.seg(V2, Y2))
                    if e1 is None:
                        continue
                    for Z1 in pts12:
                        for Z2 in pts22:
                            e2 = k.eq_len(k.seg(V1, Z1), k.seg(V2, Z2))
                            if e2 is None:
                                continue
                            g = canon_fact(k, "congruent_tri",
                                           ((Y1, V1, Z1), (Y2, V2, Z2)))
                            if g and g.args[0] != g.args[1]:
                                yield (g, tuple(dict.fromkeys(
                                    prem + e1 + e2)))


def _r_sss(k):
    fig = k.fig
    fs = k.by_pred("seg_eq")
    for i, f1 in enumerate(fs):
        for f2 in fs[i + 1:]:
            for (s1, t1) in (f1.args, f1.args[::-1]):
                for (s2, t2) in (f2.args, f2.args[::-1]):
                    c1 = set(s1) & set(s2)
                    c2 = set(t1) & set(t2)
                    if len(c1) != 1 or len(c2) != 1:
                        continue
                    X1, X2 = c1.pop(), c2.pop()
                    Y1 = s1[0] if s1[1] == X1 else s1[1]
                    Z1 = s2[0] if s2[1] == X1 else s2[1]
                    Y2 = t1[0] if t1[1] == X2 else t1[1]
                    Z2 = t2[0] if t2[1] == X2 else t2[1]
                    if Y1 == Z1 or Y2 == Z2:
                        continue
                    third = k.eq_len(k.seg(Y1, Z1), k.seg(Y2, Z2))
                    if third is None:
                        continue
                    if fig.collinear(X1, Y1, Z1) or fig.collinear(X2, Y2, Z2):
                        continue
                    g = canon_fact(k, "congruent_tri",
                                   ((X1, Y1, Z1), (X2, Y2, Z2)))
                    if g and g.args[0] != g.args[1]:
                        yield g, tuple(dict.fromkeys((f1, f2) + third))


def _r_cpctc(k):
    for f in k.by_pred("congruent_tri"):
        (a, b, c), (d, e, g_) = f.args
        for (s1, s2) in (((a, b), (d, e)), ((b, c), (e, g_)),
                         ((a, c), (d, g_))):
            x = canon_fact(k, "seg_eq", (s1, s2))
            if x:
                yield x, (f,)
        for (t1, t2) in (((a, b, c), (d, e, g_)), ((b, a, c), (e, d, g_)),
                         ((c, a, b), (g_, d, e))):
            x = canon_fact(k, "angle_eq", (t1, t2))
            if x:
                yield x, (f,)


def _r_iso_base_angles(k):
    fig = k.fig
    for f in k.by_pred("seg_eq"):
        s, t = f.args
        common = set(s) & set(t)
        if len(common) != 1:
            continue
        X = common.pop()
        Y = s[0] if s[1] == X else s[1]
        Z = t[0] if t[1] == X else t[1]
        if fig.collinear(X, Y, Z):
            continue
        g = canon_fact(k, "angle_eq", ((Y, X, Z), (Z, X, Y)))
        if g:
            yield g, (f,)


def _r_iso_converse(k):
    for f in k.by_pred("angle_eq"):
        a1, a2 = f.args
        for T1, T2 in _situations(k, (a1, a2), (a2, a1)):
            (A1, B1, C1), (A2, B2, C2) = T1, T2
            # both angles in one triangle: A1,B1,C1 == A2,B2,C2 as a set
            if {A1, B1, C1} != {A2, B2, C2} or C1 != C2:
                continue
            g = canon_fact(k, "seg_eq", ((C1, A1), (C1, B1)))
            if g:
                yield g, (f,)


# -- midpoints ---------------------------------------------------------------

def _r_midpoint_from_eq(k):
    betweens = {f.args: f for f in k.by_pred("between")}
    for f in k.by_pred("seg_eq"):
        s, t = f.args
        common = set(s) & set(t)
        if len(common) != 1:
            continue
        M = common.pop()
        A = s[0] if s[1] == M else s[1]
        B = t[0] if t[1] == M else t[1]
        key = (min(A, B), M, max(A, B))
        if key in betweens:
            g = canon_fact(k, "midpoint", (M, (A, B)))
            if g:
                yield g, (f, betweens[key])


def _r_midpoint_unfold(k):
    for f in k.by_pred("midpoint"):
        m, (a, b) = f.args
        g = canon_fact(k, "seg_eq", ((m, a), (m, b)))
        if g:
            yield g, (f,)


def _r_midsegment(k):
    fig = k.fig
    mids = k.by_pred("midpoint")
    for i, f1 in enumerate(mids):
        for f2 in mids[i + 1:]:
            M1, e1 = f1.args
            M2, e2 = f2.args
            common = set(e1) & set(e2)
            if len(common) != 1 or M1 == M2:
                continue
            A = common.pop()
            B = e1[0] if e1[1] == A else e1[1]
            C = e2[0] if e2[1] == A else e2[1]
            if fig.collinear(A, B, C):
                continue
            g = canon_fact(k, "parallel", ((M1, M2), (B, C)))
            if g:
                yield g, (f1, f2)
            h = canon_fact(k, "seg_sum", ((M1, M2), (M1, M2), (B, C)))
            if h:
                yield h, (f1, f2)


def _r_hypotenuse_median(k):
    fig = k.fig
    rights = [f for f in k.by_pred("angle_measure") if f.value == HALF_PI]
    for fm in k.by_pred("midpoint"):
        M, (X, Y) = fm.args
        for fr in rights:
            Z, (r1, r2) = fr.args[0]
            if Z in (X, Y, M):
                continue
            ok = ((fig.on_ray(Z, r1, X) and fig.on_ray(Z, r2, Y))
                  or (fig.on_ray(Z, r1, Y) and fig.on_ray(Z, r2, X)))
            if not ok:
                continue
            for P in (X, Y):
                g = canon_fact(k, "seg_eq", ((M, Z), (M, P)))
                if g:
                    yield g, (fm, fr)


def _r_iso_median_perp(k):
    """Isosceles apex + midpoint of base: median is altitude and bisector."""
    mids = {f.args[1]: f for f in k.by_pred("midpoint")}
    fig = k.fig
    for f in k.by_pred("seg_eq"):
        s, t = f.args
        common = set(s) & set(t)
        if len(common) != 1:
            continue
        X = common.pop()
        A = s[0] if s[1] == X else s[1]
        B = t[0] if t[1] == X else t[1]
        base = k.seg(A, B)
        if base not in mids or fig.collinear(X, A, B):
            continue
        fm = mids[base]
        M = fm.args[0]
        g = canon_fact(k, "perp", ((X, M), (A, B)))
        if g:
            yield g, (f, fm)
        h = canon_fact(k, "angle_eq", ((A, X, M), (B, X, M)))
        if h:
            yield h, (f, fm)


def _r_iso_altitude_median(k):
    """Isosceles apex + foot of the altitude: the foot is the midpoint."""
    fig = k.fig
    perps = k.by_pred("perp")
    for f in k.by_pred("seg_eq"):
        s, t = f.args
        common = set(s) & set(t)
        if len(common) != 1:
            continue
        X = common.pop()
        A = s[0] if s[1] == X else s[1]
        B = t[0] if t[1] == X else t[1]
        if fig.collinear(X, A, B):
            continue
        base_line = fig.line_of(A, B)
        for fp in perps:
            l1, l2 = fp.args
            for la, lb in ((l1, l2), (l2, l1)):
                if la != base_line or X not in lb:
                    continue
                for F in set(lb) & set(la):
                    if not fig.between(A, F, B):
                        continue
                    g = canon_fact(k, "midpoint", (F, (A, B)))
                    if g:
                        yield g, (f, fp)
                    h = canon_fact(k, "angle_eq", ((A, X, F), (B, X, F)))
                    if h:
                        yield h, (f, fp)


# -- exterior angle -----------------------------------------------------------

def _r_exterior_angle(k):
    fig = k.fig
    for fb in k.by_pred("between"):
        a, f, b = fb.args
        for (A, B) in ((a, b), (b, a)):
            for D in sorted(fig.points):
                if D in (A, B, f) or fig.collinear(A, f, D):
                    continue
                g = canon_fact(k, "angle_sum",
                               ((B, f, D), (D, f, B), (f, A, D)))
                if g:
                    yield g, (fb,)


# -- segment arithmetic --------------------------------------------------------

def _r_seg_sum_subst(k):
    sums = k.by_pred("seg_sum")
    eqs = k.by_pred("seg_eq")
    for fs in sums:
        s1, s2, s3 = fs.args
        for fe in eqs:
            u, v = fe.args
            for (x, y) in ((u, v), (v, u)):
                if x == s1:
                    yield Fact("seg_sum", (*sorted((y, s2)), s3)), (fs, fe)
                if x == s2:
                    yield Fact("seg_sum", (*sorted((s1, y)), s3)), (fs, fe)
                if x == s3:
                    yield Fact("seg_sum", (s1, s2, y)), (fs, fe)


def _r_seg_sum_algebra(k):
    sums = k.by_pred("seg_sum")
    for i, f1 in enumerate(sums):
        a1, b1, c1 = f1.args
        for f2 in sums[i + 1:]:
            a2, b2, c2 = f2.args
            if (a1, b1) == (a2, b2) and c1 != c2:
                g = canon_fact(k, "seg_eq", (c1, c2))
                if g:
                    yield g, (f1, f2)
            if c1 == c2:
                # shared addend -> remaining addends equal
                for (x1, y1) in ((a1, b1), (b1, a1)):
                    for (x2, y2) in ((a2, b2), (b2, a2)):
                        if x1 == x2 and y1 != y2:
                            g = canon_fact(k, "seg_eq", (y1, y2))
                            if g:
                                yield g, (f1, f2)
                # doubled addend: a+a = c and b+b = c -> a = b
                if a1 == b1 and a2 == b2 and a1 != a2:
                    g = canon_fact(k, "seg_eq", (a1, a2))
                    if g:
                        yield g, (f1, f2)


# -- angle arithmetic -----------------------------------------------------------

def _r_angle_sum_subst(k):
    sums = k.by_pred("angle_sum")
    eqs = k.by_pred("angle_eq")
    for fs in sums:
        s1, s2, s3 = fs.args
        for fe in eqs:
            u, v = fe.args
            for (x, y) in ((u, v), (v, u)):
                if x == s1 and y != s2:
                    yield Fact("angle_sum", (*sorted((y, s2)), s3)), (fs, fe)
                if x == s2 and y != s1:
                    yield Fact("angle_sum", (*sorted((s1, y)), s3)), (fs, fe)
                if x == s3:
                    yield Fact("angle_sum", (s1, s2, y)), (fs, fe)


def _r_angle_sum_algebra(k):
    sums = k.by_pred("angle_sum")
    for i, f1 in enumerate(sums):
        a1, b1, c1 = f1.args
        for f2 in sums[i + 1:]:
            a2, b2, c2 = f2.args
            if (a1, b1) == (a2, b2) and c1 != c2:
                g = Fact("angle_eq", tuple(sorted((c1, c2))))
                yield g, (f1, f2)
            if c1 == c2:
                for (x1, y1) in ((a1, b1), (b1, a1)):
                    for (x2, y2) in ((a2, b2), (b2, a2)):
                        if x1 == x2 and y1 != y2:
                            yield (Fact("angle_eq", tuple(sorted((y1, y2)))),
                                   (f1, f2))
                if a1 == b1 and a2 == b2 and a1 != a2:
                    yield (Fact("angle_eq", tuple(sorted((a1, a2)))),
                           (f1, f2))


def _r_angle_sum_measures(k):
    meas = k.measures()
    for f in k.by_pred("angle_sum"):
        a, b, c = f.args
        ka, kb, kc = a in meas, b in meas, c in meas
        if ka and kb and not kc:
            v = meas[a][0] + meas[b][0]
            if 0 < v < PI:
                yield (Fact("angle_measure", (c,), round(v, 9)),
                       (f, meas[a][1], meas[b][1]))
        elif ka and kc and not kb:
            v = meas[c][0] - meas[a][0]
            if v > 1e-9:
                yield (Fact("angle_measure", (b,), round(v, 9)),
                       (f, meas[a][1], meas[c][1]))
        elif kb and kc and not ka:
            v = meas[c][0] - meas[b][0]
            if v > 1e-9:
                yield (Fact("angle_measure", (a,), round(v, 9)),
                       (f, meas[b][1], meas[c][1]))


def _r_supplementary(k):
    meas = k.measures()
    supps = k.by_pred("supplementary")
    adj = {}
    for f in supps:
        a, b = f.args
        adj.setdefault(a, []).append((b, f))
        adj.setdefault(b, []).append((a, f))
        for (x, y) in ((a, b), (b, a)):
            if x in meas and y not in meas:
                v = PI - meas[x][0]
                if v > 1e-9:
                    yield (Fact("angle_measure", (y,), round(v, 9)),
                           (f, meas[x][1]))
    # same supplement -> equal
    for x, nbrs in adj.items():
        for i, (y1, f1) in enumerate(nbrs):
            for (y2, f2) in nbrs[i + 1:]:
                if y1 == y2:
                    continue
                yield Fact("angle_eq", tuple(sorted((y1, y2)))), (f1, f2)
    # substitution through angle equality
    eqs = k.by_pred("angle_eq")
    for f in supps:
        a, b = f.args
        for fe in eqs:
            u, v = fe.args
            for (x, y) in ((u, v), (v, u)):
                if x == a and y != b:
                    yield (Fact("supplementary", tuple(sorted((y, b)))),
                           (f, fe))
                if x == b and y != a:
                    yield (Fact("supplementary", tuple(sorted((a, y)))),
                           (f, fe))


def _r_aa_similar(k):
    eqs = list(_angle_eq_pairs(k))
    for a1, a2, prem_a in eqs:
        for b1, b2, prem_b in eqs:
            if (a1, a2) == (b1, b2):
                continue
            for T1, T2 in _situations(k, (a1, a2), (b1, b2)):
                g = canon_fact(k, "similar_tri", (T1, T2))
                if g and g.args[0] != g.args[1]:
                    yield g, tuple(dict.fromkeys(prem_a + prem_b))


CATALOG = [
    Rule("seg_eq_chain", "transitivity of segment equality", _r_seg_eq_chain),
    Rule("angle_eq_chain", "transitivity of angle equality", _r_angle_eq_chain),
    Rule("angle_eq_from_measures", "angles of equal measure are equal",
         _r_angle_eq_from_measures),
    Rule("measure_via_eq", "equal angles share their measure", _r_measure_via_eq),
    Rule("perp_right_angles", "perpendicular lines form right angles",
         _r_perp_right_angles),
    Rule("right_angle_perp", "a right angle makes its rays perpendicular",
         _r_right_angle_perp),
    Rule("perp_perp_parallel", "two lines perpendicular to a third are parallel",
         _r_perp_perp_parallel),
    Rule("parallel_perp", "a perpendicular to one of two parallels is "
         "perpendicular to the other", _r_parallel_perp),
    Rule("parallel_chain", "transitivity of parallelism", _r_parallel_chain),
    Rule("alternate_angles", "parallel lines: alternate angles equal, "
         "co-interior supplementary", _r_alternate_angles),
    Rule("alternate_converse", "equal alternate angles imply parallel lines",
         _r_alternate_converse),
    Rule("vertical_angles", "vertical angles are equal", _r_vertical_angles),
    Rule("triangle_sum", "triangle angles sum to a straight angle",
         _r_triangle_sum),
    Rule("third_angle", "two equal angle pairs force the third pair equal",
         _r_third_angle),
    Rule("asa", "angle-side-angle congruence", _r_asa),
    Rule("sas", "side-angle-side congruence", _r_sas),
    Rule("sss", "side-side-side congruence", _r_sss),
    Rule("cpctc", "corresponding parts of congruent triangles", _r_cpctc),
    Rule("iso_base_angles", "isosceles base angles are equal",
         _r_iso_base_angles),
    Rule("iso_converse", "equal base angles imply isosceles",
         _r_iso_converse),
    Rule("midpoint_from_eq", "equidistant interior point is the midpoint",
         _r_midpoint_from_eq),
    Rule("midpoint_unfold", "a midpoint halves its segment",
         _r_midpoint_unfold),
    Rule("midsegment", "midsegment is parallel to and half the base",
         _r_midsegment),
    Rule("hypotenuse_median", "hypotenuse midpoint is equidistant from the "
         "vertices", _r_hypotenuse_median),
    Rule("iso_median_perp", "isosceles median is altitude and bisector",
         _r_iso_median_perp),
    Rule("iso_altitude_median", "isosceles altitude foot is the base midpoint",
         _r_iso_altitude_median),
    Rule("exterior_angle", "exterior angle equals the two remote interior "
         "angles", _r_exterior_angle),
    Rule("seg_sum_subst", "substitute equal segments in a length sum",
         _r_seg_sum_subst),
    Rule("seg_sum_algebra", "cancel shared terms across length sums",
         _r_seg_sum_algebra),
    Rule("angle_sum_subst", "substitute equal angles in an angle sum",
         _r_angle_sum_subst),
    Rule("angle_sum_algebra", "cancel shared terms across angle sums",
         _r_angle_sum_algebra),
    Rule("angle_sum_measures", "propagate measures through angle sums",
         _r_angle_sum_measures),
    Rule("supplementary_rules", "linear-pair arithmetic", _r_supplementary),
    Rule("aa_similar", "angle-angle similarity", _r_aa_similar),
]

RULES_BY_ID = {r.id: r for r in CATALOG}
