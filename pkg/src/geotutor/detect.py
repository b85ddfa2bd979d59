"""Figure digitization: raster image -> line segments -> recovered figure
-> candidate constraints.

The pipeline is a classical Hough accumulator over ink pixels followed by
three cleanup passes: merging near-duplicate lines (stretching each group
through its two farthest endpoints), merging nearby endpoints to their
mean, and recovering T-junction and X-crossing intersections.  Constraint
synthesis then proposes perpendicularity, parallelism, length equality and
addition, angle bisectors, and special polygons, suppressing constraints a
found polygon already implies.
"""
from __future__ import annotations

import math
import string
from dataclasses import dataclass, field, replace

import numpy as np

from .geom import Point, ProblemFigure, normalize, seg

INK_LEVEL = 128                # pixels darker than this are ink
HOUGH_THRESHOLD = 40           # accumulator votes to accept a line
MIN_SEG_LEN = 18.0             # pixels
MAX_RUN_GAP = 5.0              # pixels of blank along a line splitting runs
LINE_BAND = 2.0                # pixel-to-line distance counted as "on"
MAX_LINES = 64                 # safety valve per image

D_RHO = 5.0                    # similar-line merge: pixels
D_THETA = math.radians(3.0)    # similar-line merge: radians
ENDPOINT_RADIUS = 8.0          # endpoint merge neighborhood: pixels
SNAP_THRESHOLD = 6.0           # on-line endpoint snap: pixels

CONSTRAINT_TOL_ANG = math.radians(2.0)
CONSTRAINT_TOL_LEN = 0.03      # relative

POLYGON_KINDS = ("square", "rectangle", "diamond", "parallelogram",
                 "equilateral_triangle")


@dataclass(frozen=True)
class DetectedLine:
    p1: tuple
    p2: tuple
    rho: float
    theta: float


@dataclass(frozen=True)
class ConstraintCandidate:
    kind: str
    elements: tuple
    confidence: float
    selected: bool = False


@dataclass
class ProblemSpecDraft:
    """Recovered figure plus candidate constraints awaiting confirmation."""

    figure: ProblemFigure
    candidates: tuple = ()
    pixel_points: dict = field(default_factory=dict)  # id -> (px, py)

    def to_json(self) -> dict:
        return {
            "points": {pid: [round(p.x, 3), round(p.y, 3)]
                       for pid, p in sorted(self.figure.points.items())},
            "segments": [list(s) for s in sorted(self.figure.segments)],
            "constraints": [
                {"kind": c.kind, "args": _json_args(c.elements),
                 "confidence": round(c.confidence, 4),
                 "selected": c.selected}
                for c in self.candidates],
            "goal": [],
        }


class FigureTooSparseError(ValueError):
    """Fewer than two segments recovered; .draft holds the partial result."""

    def __init__(self, message: str, draft: ProblemSpecDraft = None):
        super().__init__(message)
        self.draft = draft


def _json_args(elements):
    return [list(e) if isinstance(e, tuple) else e for e in elements]


def _line_params(p1, p2):
    """(rho, theta) of the infinite line through two pixel points."""
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    theta = math.atan2(dy, dx) + math.pi / 2
    theta %= math.pi
    rho = p1[0] * math.cos(theta) + p1[1] * math.sin(theta)
    return rho, theta


# -- step 0: Hough detection --------------------------------------------

def detect_lines(img: np.ndarray, threshold: int = HOUGH_THRESHOLD,
                 min_len: float = MIN_SEG_LEN) -> list[DetectedLine]:
    """Raw line segments from a grayscale image via a Hough accumulator.

    Repeatedly takes the strongest (rho, theta) cell, extracts the ink runs
    within LINE_BAND of that line, emits each sufficiently long run as a
    segment, and removes the claimed pixels before re-voting.
    """
    ink0 = img < INK_LEVEL           # pristine mask, used to trace runs
    ink = ink0.copy()                # working mask, depleted per peak
    ys0, xs0 = np.nonzero(ink0)
    thetas = np.radians(np.arange(0.0, 180.0, 1.0))
    cos_t, sin_t = np.cos(thetas), np.sin(thetas)
    diag = int(math.hypot(*img.shape)) + 1
    out = []
    for _ in range(MAX_LINES):
        ys, xs = np.nonzero(ink)
        if xs.size < threshold:
            break
        rho = np.rint(xs[:, None] * cos_t + ys[:, None] * sin_t
                      ).astype(int) + diag
        acc = np.bincount((rho * len(thetas)
                           + np.arange(len(thetas))).ravel(),
                          minlength=2 * diag * len(thetas))
        peak = int(acc.argmax())
        if acc[peak] < threshold:
            break
        t_idx = peak % len(thetas)
        r = peak // len(thetas) - diag
        theta = float(thetas[t_idx])
        # trace runs along the full original ink so corners shared with
        # already-claimed lines are not lost
        member = (np.abs(xs0 * cos_t[t_idx] + ys0 * sin_t[t_idx] - r)
                  <= LINE_BAND)
        proj = (-xs0[member] * sin_t[t_idx] + ys0[member] * cos_t[t_idx])
        order = np.argsort(proj, kind="stable")
        mx, my, mp = xs0[member][order], ys0[member][order], proj[order]
        start = 0
        for i in range(1, len(mp) + 1):
            if i == len(mp) or mp[i] - mp[i - 1] > MAX_RUN_GAP:
                if mp[i - 1] - mp[start] >= min_len:
                    p1 = _foot(mx[start], my[start], r, theta)
                    p2 = _foot(mx[i - 1], my[i - 1], r, theta)
                    out.append(DetectedLine(p1, p2, float(r), theta))
                start = i
        dead = np.abs(xs * cos_t[t_idx] + ys * sin_t[t_idx] - r) <= LINE_BAND
        if not dead.any():
            break
        ink[ys[dead], xs[dead]] = False
    return out


def _foot(x, y, rho, theta):
    """Perpendicular foot of a pixel on the (rho, theta) line."""
    c, s = math.cos(theta), math.sin(theta)
    d = x * c + y * s - rho
    return (float(x - d * c), float(y - d * s))


# -- step 1: merge similar lines -----------------------------------------

def _similar(l1: DetectedLine, l2: DetectedLine,
             d_rho: float, d_theta: float) -> bool:
    dt = abs(l1.theta - l2.theta)
    if dt <= d_theta and abs(l1.rho - l2.rho) <= d_rho:
        return True
    # theta wraps at pi with rho changing sign
    if math.pi - dt <= d_theta and abs(l1.rho + l2.rho) <= d_rho:
        return True
    return False


def merge_similar_lines(lines: list[DetectedLine], d_rho: float = D_RHO,
                        d_theta: float = D_THETA) -> list[DetectedLine]:
    """Group similar lines and stretch each group through its two farthest
    endpoints; repeated until no similar pair remains."""
    lines = list(lines)
    while True:
        n = len(lines)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if _similar(lines[i], lines[j], d_rho, d_theta):
                    parent[find(i)] = find(j)
        groups: dict[int, list] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(lines[i])
        merged = []
        for grp in groups.values():
            pts = [l.p1 for l in grp] + [l.p2 for l in grp]
            best = max(((a, b) for a in pts for b in pts),
                       key=lambda ab: math.dist(ab[0], ab[1]))
            rho, theta = _line_params(*best)
            merged.append(DetectedLine(best[0], best[1], rho, theta))
        merged.sort(key=lambda l: (l.theta, l.rho, l.p1, l.p2))
        if len(merged) == n:
            return merged
        lines = merged


# -- step 2: merge endpoints ----------------------------------------------

def merge_endpoints(lines: list[DetectedLine],
                    radius: float = ENDPOINT_RADIUS):
    """Cluster nearby endpoints (connected components of the proximity
    graph) to their means; returns (points, segments by point index)."""
    eps = [l.p1 for l in lines] + [l.p2 for l in lines]
    n = len(eps)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if math.dist(eps[i], eps[j]) <= radius:
                parent[find(i)] = find(j)
    cluster_of = {}
    points = []
    for i in range(n):
        r = find(i)
        if r not in cluster_of:
            members = [eps[j] for j in range(n) if find(j) == r]
            cluster_of[r] = len(points)
            points.append((sum(p[0] for p in members) / len(members),
                           sum(p[1] for p in members) / len(members)))
    segments = []
    for idx in range(len(lines)):
        a = cluster_of[find(idx)]
        b = cluster_of[find(idx + len(lines))]
        if a != b and tuple(sorted((a, b))) not in segments:
            segments.append(tuple(sorted((a, b))))
    return points, segments


# -- step 3: recover intersections ----------------------------------------

def recover_intersections(points: list, segments: list,
                          threshold: float = SNAP_THRESHOLD):
    """Snap endpoints onto nearby lines (T-junctions) and materialize
    X-crossings, splitting segments at every recovered incidence."""
    points = [tuple(p) for p in points]
    segments = [tuple(s) for s in segments]

    def seg_geom(s):
        return points[s[0]], points[s[1]]

    changed = True
    while changed:
        changed = False
        # case 1: an endpoint lies on (or just off) another segment
        for pi in range(len(points)):
            for s in list(segments):
                if pi in s:
                    continue
                a, b = seg_geom(s)
                foot, t = _project(points[pi], a, b)
                if math.dist(points[pi], foot) > threshold:
                    continue
                slack = threshold / max(math.dist(a, b), 1e-9)
                if t < -slack or t > 1 + slack:
                    continue
                points[pi] = foot
                if 1e-9 < t < 1 - 1e-9:
                    segments.remove(s)
                    for piece in ((s[0], pi), (pi, s[1])):
                        piece = tuple(sorted(piece))
                        if piece[0] != piece[1] and piece not in segments:
                            segments.append(piece)
                changed = True
                break
            if changed:
                break
        if changed:
            continue
        # case 2: proper crossings
        for i in range(len(segments)):
            for j in range(i + 1, len(segments)):
                s1, s2 = segments[i], segments[j]
                if set(s1) & set(s2):
                    continue
                hit = _crossing(seg_geom(s1), seg_geom(s2))
                if hit is None:
                    continue
                points.append(hit)
                pi = len(points) - 1
                segments.remove(s1)
                segments.remove(s2)
                for (u, v) in (s1, s2):
                    for piece in ((u, pi), (pi, v)):
                        piece = tuple(sorted(piece))
                        if piece[0] != piece[1] and piece not in segments:
                            segments.append(piece)
                changed = True
                break
            if changed:
                break
    return points, segments


def _project(p, a, b):
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / max(den, 1e-12)
    return (ax + t * dx, ay + t * dy), t


def _crossing(s1, s2):
    """Interior intersection point of two segments, or None."""
    (x1, y1), (x2, y2) = s1
    (x3, y3), (x4, y4) = s2
    den = (x2 - x1) * (y4 - y3) - (y2 - y1) * (x4 - x3)
    if abs(den) < 1e-9:
        return None
    t = ((x3 - x1) * (y4 - y3) - (y3 - y1) * (x4 - x3)) / den
    u = ((x3 - x1) * (y2 - y1) - (y3 - y1) * (x2 - x1)) / den
    margin = 1e-6
    if margin < t < 1 - margin and margin < u < 1 - margin:
        return (x1 + t * (x2 - x1), y1 + t * (y2 - y1))
    return None


# -- constraint synthesis --------------------------------------------------

def _chains(fig: ProblemFigure):
    """Drawn lines as (endpoint pair, length, unit direction) summaries."""
    out = []
    for cls in fig.line_classes():
        xs = [(fig.xy(p), p) for p in cls]
        (a_xy, a), (b_xy, b) = max(
            ((u, v) for u in xs for v in xs),
            key=lambda uv: math.dist(uv[0][0], uv[1][0]))
        length = math.dist(a_xy, b_xy)
        ux = (b_xy[0] - a_xy[0]) / length
        uy = (b_xy[1] - a_xy[1]) / length
        out.append(((a, b), length, (ux, uy)))
    out.sort(key=lambda c: c[0])
    return out


def _angle_between(u, v):
    dot = abs(u[0] * v[0] + u[1] * v[1])
    return math.acos(min(1.0, dot))


def synthesize_constraints(fig: ProblemFigure,
                           tol_ang: float = CONSTRAINT_TOL_ANG,
                           tol_len: float = CONSTRAINT_TOL_LEN
                           ) -> list[ConstraintCandidate]:
    """Candidate constraints of the recovered figure.

    Pairwise relations are proposed over whole drawn lines (maximal
    chains), not the split pieces between intersections.  Constraints a
    detected special polygon implies are suppressed.
    """
    chains = _chains(fig)
    cands: list[ConstraintCandidate] = []
    polygons = _find_polygons(fig, tol_ang, tol_len)
    covered_pairs = set()
    for (kind, cycle) in polygons:
        cands.append(ConstraintCandidate(kind, tuple(cycle), 1.0))
        sides = [tuple(sorted((cycle[i], cycle[(i + 1) % len(cycle)])))
                 for i in range(len(cycle))]
        for i in range(len(sides)):
            for j in range(i + 1, len(sides)):
                covered_pairs.add(frozenset((sides[i], sides[j])))

    def side_of(pair):
        return tuple(sorted(pair))

    for i in range(len(chains)):
        (pa, la, ua) = chains[i]
        for j in range(i + 1, len(chains)):
            (pb, lb, ub) = chains[j]
            if frozenset((side_of(pa), side_of(pb))) in covered_pairs:
                continue
            ang = _angle_between(ua, ub)
            if abs(ang - math.pi / 2) <= tol_ang:
                cands.append(ConstraintCandidate(
                    "perp", (pa, pb),
                    1 - abs(ang - math.pi / 2) / tol_ang))
            elif ang <= tol_ang:
                cands.append(ConstraintCandidate(
                    "parallel", (pa, pb), 1 - ang / tol_ang))
            if abs(la - lb) <= tol_len * max(la, lb):
                cands.append(ConstraintCandidate(
                    "seg_eq", (pa, pb),
                    1 - abs(la - lb) / (tol_len * max(la, lb))))
    for i in range(len(chains)):
        for j in range(i, len(chains)):
            for k in range(len(chains)):
                if k in (i, j):
                    continue
                la, lb, lc = chains[i][1], chains[j][1], chains[k][1]
                if abs(la + lb - lc) <= tol_len * lc:
                    cands.append(ConstraintCandidate(
                        "seg_sum", (chains[i][0], chains[j][0],
                                    chains[k][0]),
                        1 - abs(la + lb - lc) / (tol_len * lc)))
    cands.extend(_find_bisectors(fig, tol_ang))
    cands.sort(key=lambda c: (c.kind, c.elements))
    return cands


def _find_polygons(fig: ProblemFigure, tol_ang, tol_len):
    """Special polygons among simple cycles of drawn segments."""
    adj: dict[str, set] = {}
    for (a, b) in fig.segments:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    found = []
    pts = sorted(adj)
    # triangles
    seen = set()
    for a in pts:
        for b in sorted(adj[a]):
            for c in sorted(adj[a] & adj[b]):
                tri = tuple(sorted((a, b, c)))
                if tri in seen:
                    continue
                seen.add(tri)
                sides = [fig.dist(tri[0], tri[1]), fig.dist(tri[1], tri[2]),
                         fig.dist(tri[0], tri[2])]
                if max(sides) - min(sides) <= tol_len * max(sides):
                    found.append(("equilateral_triangle", tri))
    # quadrilaterals
    seen = set()
    for a in pts:
        for b in sorted(adj[a]):
            for c in sorted(adj[b] - {a}):
                for d in sorted(adj[c] & adj[a] - {b}):
                    quad = frozenset((a, b, c, d))
                    if len(quad) < 4 or quad in seen:
                        continue
                    seen.add(quad)
                    kind = _classify_quad(fig, (a, b, c, d), tol_ang,
                                          tol_len)
                    if kind:
                        found.append((kind, (a, b, c, d)))
    found.sort(key=lambda f: (POLYGON_KINDS.index(f[0]), f[1]))
    return found


def _classify_quad(fig, cycle, tol_ang, tol_len):
    a, b, c, d = cycle
    if any(fig.collinear(*tri) for tri in
           ((a, b, c), (b, c, d), (c, d, a), (d, a, b))):
        return None
    sides = [fig.dist(a, b), fig.dist(b, c), fig.dist(c, d), fig.dist(d, a)]

    def unit(p, q):
        (px, py), (qx, qy) = fig.xy(p), fig.xy(q)
        n = math.hypot(qx - px, qy - py)
        return ((qx - px) / n, (qy - py) / n)

    opp_parallel = (_angle_between(unit(a, b), unit(d, c)) <= tol_ang
                    and _angle_between(unit(b, c), unit(a, d)) <= tol_ang)
    if not opp_parallel:
        return None
    eq_sides = max(sides) - min(sides) <= tol_len * max(sides)
    right = abs(_angle_between(unit(a, b), unit(b, c))
                - math.pi / 2) <= tol_ang
    if eq_sides and right:
        return "square"
    if right:
        return "rectangle"
    if eq_sides:
        return "diamond"
    return "parallelogram"


def _find_bisectors(fig: ProblemFigure, tol_ang):
    """Rays that bisect an angle formed by two other rays at their vertex."""
    out = []
    for v in sorted(fig.points):
        rays = sorted(fig.rays_at(v))
        if len(rays) < 3:
            continue
        for mi in range(len(rays)):
            m = rays[mi]
            for i in range(len(rays)):
                for j in range(i + 1, len(rays)):
                    p, q = rays[i], rays[j]
                    if m in (p, q):
                        continue
                    a1 = _ray_angle(fig, v, p, m)
                    a2 = _ray_angle(fig, v, m, q)
                    total = _ray_angle(fig, v, p, q)
                    if (abs(a1 - a2) <= tol_ang
                            and abs(a1 + a2 - total) <= tol_ang
                            and total > 2 * tol_ang):
                        out.append(ConstraintCandidate(
                            "angle_bisector", (v, m, p, q),
                            1 - abs(a1 - a2) / tol_ang))
    return out


def _ray_angle(fig, v, p, q):
    (vx, vy), (px, py), (qx, qy) = fig.xy(v), fig.xy(p), fig.xy(q)
    a1 = math.atan2(py - vy, px - vx)
    a2 = math.atan2(qy - vy, qx - vx)
    d = abs(a1 - a2) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


# -- full pipeline ----------------------------------------------------------

def _point_labels(n: int):
    letters = string.ascii_uppercase
    labels = list(letters)
    primes = 1
    while len(labels) < n:
        tick = "'" * primes
        labels.extend(c + tick for c in letters)
        primes += 1
    return labels[:n]


def digitize(img: np.ndarray, threshold: int = HOUGH_THRESHOLD,
             min_len: float = MIN_SEG_LEN) -> ProblemSpecDraft:
    """Full pipeline: image -> figure draft with candidate constraints.

    Points are named deterministically top-to-bottom then left-to-right in
    image orientation; figure coordinates flip y so the figure is in the
    usual mathematical orientation.
    """
    lines = merge_similar_lines(detect_lines(img, threshold, min_len))
    pts, segs = merge_endpoints(lines)
    pts, segs = recover_intersections(pts, segs)
    order = sorted(range(len(pts)), key=lambda i: (pts[i][1], pts[i][0]))
    labels = _point_labels(len(pts))
    name_of = {orig: labels[rank] for rank, orig in enumerate(order)}
    height = img.shape[0]
    fig = ProblemFigure()
    for orig, (px, py) in enumerate(pts):
        fig.add_point(Point(name_of[orig], px, height - 1 - py))
    for (a, b) in sorted(tuple(sorted((name_of[u], name_of[v])))
                         for (u, v) in segs):
        fig.add_segment(seg(a, b))
    pixel_points = {name_of[i]: pts[i] for i in range(len(pts))}
    if len(fig.segments) < 2:
        raise FigureTooSparseError(
            f"figure too sparse: {len(fig.segments)} segment(s) recovered",
            ProblemSpecDraft(fig, (), pixel_points))
    fig = normalize(fig)
    cands = tuple(synthesize_constraints(fig))
    return ProblemSpecDraft(fig, cands, pixel_points)
