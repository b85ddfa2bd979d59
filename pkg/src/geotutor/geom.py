"""Planar geometry substrate: labeled points, segments and incidence topology.

Coordinates are treated as a topological hint: they decide incidence,
betweenness and ray membership, while metric statements (equal lengths,
angle measures) live in the symbolic fact layer.  All tolerance decisions
are made relative to the figure diameter.
"""
from __future__ import annotations

import math
import string
from dataclasses import dataclass

EPSILON_ANG = 1e-7  # radians, for parallelism / degeneracy decisions


class MalformedFigureError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    id: str
    x: float
    y: float


@dataclass(frozen=True)
class Segment:
    """Undirected segment between two named points (a < b).

    `line` optionally names the declared supporting line (a pair of point
    ids) an auxiliary stroke was drawn along; strokes without a declaration
    never merge into existing lines on numeric alignment alone.
    """

    a: str
    b: str
    kind: str = "given"  # "given" | "auxiliary"
    line: tuple = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.a, self.b)


def seg(a: str, b: str, kind: str = "given", line: tuple = None) -> Segment:
    if a == b:
        raise MalformedFigureError(f"degenerate segment {a}{b}")
    if b < a:
        a, b = b, a
    return Segment(a, b, kind, line)


@dataclass(frozen=True)
class AngleRef:
    """Angle at `vertex` between the rays toward `p` and `q`."""

    vertex: str
    p: str
    q: str


class ProblemFigure:
    """A set of named points plus drawn segments, with tolerant topology."""

    def __init__(self, points=(), segments=(), epsilon_len=None):
        self.points: dict[str, Point] = {}
        self.segments: dict[tuple[str, str], Segment] = {}
        self._cache: dict = {}
        for p in points:
            self.add_point(p)
        for s in segments:
            self.add_segment(s)
        self._epsilon_len = epsilon_len

    # -- construction ------------------------------------------------
    def copy(self) -> "ProblemFigure":
        f = ProblemFigure(epsilon_len=self._epsilon_len)
        f.points = dict(self.points)
        f.segments = dict(self.segments)
        f._cache = dict(self._cache)
        return f

    def add_point(self, p: Point) -> None:
        self._cache.clear()
        if p.id in self.points:
            old = self.points[p.id]
            if abs(old.x - p.x) > 1e-12 or abs(old.y - p.y) > 1e-12:
                raise MalformedFigureError(f"duplicate point id {p.id}")
            return
        for q in self.points.values():
            if math.hypot(q.x - p.x, q.y - p.y) <= self.epsilon_len:
                raise MalformedFigureError(
                    f"points {q.id} and {p.id} coincide within tolerance")
        self.points[p.id] = p

    def add_segment(self, s: Segment) -> None:
        self._cache.clear()
        if s.a not in self.points or s.b not in self.points:
            raise MalformedFigureError(f"segment {s.a}{s.b} references unknown point")
        self.segments.setdefault(s.key, s)

    def next_point_id(self) -> str:
        for ch in string.ascii_uppercase:
            if ch not in self.points:
                return ch
        n = 1
        while True:
            for ch in string.ascii_uppercase:
                cand = ch + "'" * n
                if cand not in self.points:
                    return cand
            n += 1

    # -- metrics -----------------------------------------------------
    @property
    def epsilon_len(self) -> float:
        if self._epsilon_len is not None:
            return self._epsilon_len
        d = self.diameter()
        return 1e-6 * d if d > 0 else 1e-9

    def diameter(self) -> float:
        cached = self._cache.get("diam")
        if cached is not None:
            return cached
        pts = list(self.points.values())
        best = 0.0
        for i, p in enumerate(pts):
            for q in pts[i + 1:]:
                best = max(best, math.hypot(p.x - q.x, p.y - q.y))
        self._cache["diam"] = best
        return best

    def xy(self, pid: str):
        p = self.points[pid]
        return (p.x, p.y)

    def dist(self, a: str, b: str) -> float:
        pa, pb = self.points[a], self.points[b]
        return math.hypot(pa.x - pb.x, pa.y - pb.y)

    # -- topology ----------------------------------------------------
    def _line_dist(self, a: str, b: str, q: str) -> float:
        ax, ay = self.xy(a)
        bx, by = self.xy(b)
        qx, qy = self.xy(q)
        dx, dy = bx - ax, by - ay
        n = math.hypot(dx, dy)
        if n == 0:
            return math.hypot(qx - ax, qy - ay)
        return abs((qx - ax) * dy - (qy - ay) * dx) / n

    def collinear(self, a: str, b: str, c: str) -> bool:
        if len({a, b, c}) < 3:
            return True
        key = ("coll",) + tuple(sorted((a, b, c)))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self._collinear_raw(a, b, c)
        self._cache[key] = out
        return out

    def _collinear_raw(self, a: str, b: str, c: str) -> bool:
        # measure from the longest baseline for stability
        pairs = [(a, b, c), (a, c, b), (b, c, a)]
        base = max(pairs, key=lambda t: self.dist(t[0], t[1]))
        return self._line_dist(base[0], base[1], base[2]) <= self.epsilon_len

    def between_given(self, a: str, m: str, b: str) -> bool:
        """Betweenness supported by drawn strokes.

        Requires all three points to sit on one connected chain of collinear
        segments; numeric alignment alone is treated as coincidence.
        """
        return m in self.line_of(a, b) and self.between(a, m, b)

    def between(self, a: str, m: str, b: str) -> bool:
        """True when m lies strictly between a and b on segment ab."""
        if len({a, m, b}) < 3 or not self.collinear(a, m, b):
            return False
        ax, ay = self.xy(a)
        bx, by = self.xy(b)
        mx, my = self.xy(m)
        dx, dy = bx - ax, by - ay
        t = ((mx - ax) * dx + (my - ay) * dy) / (dx * dx + dy * dy)
        eps = self.epsilon_len / max(math.hypot(dx, dy), 1e-12)
        return eps < t < 1 - eps

    def on_ray(self, v: str, through: str, q: str) -> bool:
        """True when q lies on the ray from v through `through` (q != v)."""
        if q == v or v == through:
            return False
        if q == through:
            return True
        key = ("onray", v, through, q)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._on_ray_raw(v, through, q)
            self._cache[key] = hit
        return hit

    def _on_ray_raw(self, v: str, through: str, q: str) -> bool:
        if q not in self.line_of(v, through):
            return False
        vx, vy = self.xy(v)
        tx, ty = self.xy(through)
        qx, qy = self.xy(q)
        return (tx - vx) * (qx - vx) + (ty - vy) * (qy - vy) > 0

    def ray_points(self, v: str, through: str) -> list[str]:
        key = ("raypts", v, through)
        hit = self._cache.get(key)
        if hit is None:
            hit = sorted(p for p in self.points
                         if self.on_ray(v, through, p))
            self._cache[key] = hit
        return hit

    def ray_rep(self, v: str, through: str) -> str:
        """Canonical representative of the ray from v through `through`."""
        pts = self.ray_points(v, through)
        return pts[0] if pts else through

    def opposite_ray_rep(self, v: str, through: str):
        for p in self.line_of(v, through):
            if p in (v, through):
                continue
            if not self.on_ray(v, through, p):
                return p
        return None

    def line_classes(self) -> list[tuple[str, ...]]:
        """Maximal connected chains of mutually collinear drawn segments.

        Two collinear segments count as one line only when they are linked
        through shared points; disjoint strokes that merely happen to align
        are coincidence, not incidence.  Returns the sorted point ids of
        each chain.
        """
        hit = self._cache.get(("lcls",))
        if hit is not None:
            return hit
        segs = sorted(self.segments)
        objs = [self.segments[k] for k in segs]
        parent = list(range(len(segs)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        by_point: dict[str, list[int]] = {}
        for i, (a, b) in enumerate(segs):
            by_point.setdefault(a, []).append(i)
            by_point.setdefault(b, []).append(i)

        def class_points(i):
            r = find(i)
            return {p for j, key in enumerate(segs) if find(j) == r
                    for p in key}

        def may_merge(i, j):
            s1, s2 = objs[i], objs[j]
            # the given figure's topology is given: aligned given strokes
            # through a shared point are one line
            if s1.kind == "given" and s2.kind == "given":
                return True
            # auxiliary strokes join a line only by declaration
            if s1.line is not None and s1.line == s2.line:
                return True
            for tagged, other in ((s1, j), (s2, i)):
                if tagged.line is None:
                    continue
                a, b = tagged.line
                pts = class_points(other)
                if a in pts and b in pts:
                    return True
            return False

        changed = True
        while changed:
            changed = False
            for ids in by_point.values():
                for x, i in enumerate(ids):
                    for j in ids[x + 1:]:
                        if find(i) == find(j):
                            continue
                        trio = set(segs[i]) | set(segs[j])
                        if (len(trio) == 3 and self.collinear(*trio)
                                and may_merge(i, j)):
                            parent[find(i)] = find(j)
                            changed = True
        groups: dict[int, set] = {}
        for i, key in enumerate(segs):
            groups.setdefault(find(i), set()).update(key)
        hit = sorted(tuple(sorted(g)) for g in groups.values())
        self._cache[("lcls",)] = hit
        return hit

    def line_of(self, p: str, q: str) -> tuple[str, ...]:
        """Canonical key of the drawn line through p and q.

        The key lists the point ids on the connected chain of collinear
        segments supporting the line.  When no drawn chain contains both
        points the key falls back to the sorted pair itself.
        """
        if p == q:
            raise MalformedFigureError("line through a single point")
        key = ("line", p, q) if p < q else ("line", q, p)
        hit = self._cache.get(key)
        if hit is None:
            for cls in self.line_classes():
                if p in cls and q in cls:
                    hit = cls
                    break
            else:
                hit = tuple(sorted((p, q)))
            self._cache[key] = hit
        return hit

    def lines(self) -> list[tuple[str, ...]]:
        """Canonical keys of all drawn lines."""
        return self.line_classes()

    def rays_at(self, v: str) -> list[str]:
        """Representatives of all segment-supported rays out of v."""
        hit = self._cache.get(("rays", v))
        if hit is not None:
            return hit
        reps = set()
        for line in self.lines():
            if v not in line:
                continue
            for p in line:
                if p != v:
                    reps.add(self.ray_rep(v, p))
        self._cache[("rays", v)] = sorted(reps)
        return sorted(reps)

    def segment_present(self, p: str, q: str) -> bool:
        """True when the stretch from p to q is covered by drawn segments."""
        if p == q:
            return False
        key = ("segpr", p, q) if p < q else ("segpr", q, p)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self._segment_present_raw(p, q)
        self._cache[key] = out
        return out

    def _segment_present_raw(self, p: str, q: str) -> bool:
        if (min(p, q), max(p, q)) in self.segments:
            return True
        px, py = self.xy(p)
        qx, qy = self.xy(q)
        dx, dy = qx - px, qy - py
        L2 = dx * dx + dy * dy
        eps = self.epsilon_len / math.sqrt(L2)
        intervals = []
        for (a, b) in self.segments:
            if not (self.collinear(p, q, a) and self.collinear(p, q, b)):
                continue
            ax, ay = self.xy(a)
            bx, by = self.xy(b)
            ta = ((ax - px) * dx + (ay - py) * dy) / L2
            tb = ((bx - px) * dx + (by - py) * dy) / L2
            lo, hi = min(ta, tb), max(ta, tb)
            if hi < -eps or lo > 1 + eps:
                continue
            intervals.append((max(lo, 0.0), min(hi, 1.0)))
        intervals.sort()
        cover = 0.0
        for lo, hi in intervals:
            if lo > cover + eps:
                return False
            cover = max(cover, hi)
        return cover >= 1 - eps

    def nearest_point(self, x: float, y: float, radius: float):
        best, bd = None, radius
        for p in sorted(self.points):
            d = math.hypot(self.points[p].x - x, self.points[p].y - y)
            if d <= bd:
                best, bd = p, d
        return best

    def signature(self, ndigits: int = 6):
        """Relabeling-invariant snapshot of the figure (for dedup)."""
        pts = sorted((round(p.x, ndigits), round(p.y, ndigits))
                     for p in self.points.values())
        segs = sorted(
            tuple(sorted([
                (round(self.points[a].x, ndigits), round(self.points[a].y, ndigits)),
                (round(self.points[b].x, ndigits), round(self.points[b].y, ndigits)),
            ])) for (a, b) in self.segments)
        return (tuple(pts), tuple(segs))


# -- numeric operations ----------------------------------------------

def line_intersection(p1, p2, p3, p4):
    """Intersection of infinite lines p1p2 and p3p4, or None if parallel."""
    x1, y1 = p1
    x2, y2 = p2
    x3, y3 = p3
    x4, y4 = p4
    d1 = (x2 - x1, y2 - y1)
    d2 = (x4 - x3, y4 - y3)
    n1 = math.hypot(*d1)
    n2 = math.hypot(*d2)
    if n1 == 0 or n2 == 0:
        raise MalformedFigureError("degenerate line")
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(cross) / (n1 * n2) <= EPSILON_ANG:
        return None
    t = ((x3 - x1) * d2[1] - (y3 - y1) * d2[0]) / cross
    return (x1 + t * d1[0], y1 + t * d1[1])


def intersect(fig: ProblemFigure, s1: tuple[str, str], s2: tuple[str, str]):
    """Intersection of the supporting lines of two segments.

    Returns (x, y, on_s1, on_s2) or None for parallel lines.  on_s* report
    whether the intersection lies within the closed segment (extended by
    epsilon_len).
    """
    a1, b1 = s1
    a2, b2 = s2
    pt = line_intersection(fig.xy(a1), fig.xy(b1), fig.xy(a2), fig.xy(b2))
    if pt is None:
        return None
    x, y = pt

    def on(a, b):
        ax, ay = fig.xy(a)
        bx, by = fig.xy(b)
        dx, dy = bx - ax, by - ay
        L2 = dx * dx + dy * dy
        t = ((x - ax) * dx + (y - ay) * dy) / L2
        eps = fig.epsilon_len / math.sqrt(L2)
        return -eps <= t <= 1 + eps

    return (x, y, on(a1, b1), on(a2, b2))


def measure_angle(fig: ProblemFigure, ref: AngleRef) -> float:
    """Numeric measure of the angle, in (0, pi)."""
    v = fig.xy(ref.vertex)
    p = fig.xy(ref.p)
    q = fig.xy(ref.q)
    u = (p[0] - v[0], p[1] - v[1])
    w = (q[0] - v[0], q[1] - v[1])
    nu, nw = math.hypot(*u), math.hypot(*w)
    if nu <= fig.epsilon_len or nw <= fig.epsilon_len:
        raise MalformedFigureError(f"angle with coincident vertex: {ref}")
    c = (u[0] * w[0] + u[1] * w[1]) / (nu * nw)
    return math.acos(max(-1.0, min(1.0, c)))


def normalize(fig: ProblemFigure, declared: dict = None) -> ProblemFigure:
    """Materialize segment crossings and split segments at interior points.

    With `declared=None` (problem-figure mode) every point numerically
    interior to a segment splits it: the drawn figure itself is the given.
    With a `declared` mapping (construction mode: point id -> list of (a, b)
    point pairs naming lines the point is known to lie on) splits happen
    only at declared or chain-incident points, so a stroke that merely
    happens to pass over an unrelated point does not acquire that incidence.

    Idempotent; leaves existing ids untouched and names new points with the
    next unused capital letter (then primed letters).
    """
    strict = declared is not None
    declared = {p: list(pairs) for p, pairs in (declared or {}).items()}
    fig = fig.copy()

    def may_split(key, p):
        # In strict mode a point only splits a stroke when some declared
        # incidence of the point pins it to the stroke's supporting line;
        # numeric alignment alone is coincidence, not a given.
        if not strict:
            return True
        u, v = key
        for (a, b) in declared.get(p, ()):
            if a == b:
                continue
            cls = set(fig.line_of(a, b)) | {a, b}
            if u in cls and v in cls:
                return True
        return p in fig.line_of(u, v)

    changed = True
    while changed:
        changed = False
        # 1. materialize proper crossings
        keys = sorted(fig.segments)
        for i, k1 in enumerate(keys):
            for k2 in keys[i + 1:]:
                if set(k1) & set(k2):
                    continue
                res = intersect(fig, k1, k2)
                if res is None:
                    continue
                x, y, on1, on2 = res
                if not (on1 and on2):
                    continue
                if fig.nearest_point(x, y, 2 * fig.epsilon_len) is not None:
                    continue
                pid = fig.next_point_id()
                fig.add_point(Point(pid, x, y))
                if strict:
                    declared[pid] = [k1, k2]
                changed = True
        # 2. split segments at interior points
        for key in sorted(fig.segments):
            s = fig.segments[key]
            a, b = key
            inner = [p for p in fig.points
                     if fig.between(a, p, b) and may_split(key, p)]
            if not inner:
                continue
            ax, ay = fig.xy(a)
            bx, by = fig.xy(b)
            dx, dy = bx - ax, by - ay

            def t_of(p):
                px, py = fig.xy(p)
                return ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)

            chain = [a] + sorted(inner, key=t_of) + [b]
            del fig.segments[key]
            # pieces of one stroke stay one line; an auxiliary stroke with
            # no declared line is tagged with its own endpoints
            tag = s.line or (key if s.kind == "auxiliary" else None)
            for u, v in zip(chain, chain[1:]):
                fig.add_segment(seg(u, v, s.kind, tag))
            changed = True
    return fig


def rigid_transform(fig: ProblemFigure, angle: float, tx: float, ty: float,
                    reflect: bool = False) -> ProblemFigure:
    """Apply a rigid motion (optionally with reflection) to every point."""
    c, s_ = math.cos(angle), math.sin(angle)
    out = ProblemFigure(epsilon_len=fig._epsilon_len)
    for p in fig.points.values():
        x, y = p.x, p.y
        if reflect:
            y = -y
        out.add_point(Point(p.id, c * x - s_ * y + tx, s_ * x + c * y + ty))
    for s in fig.segments.values():
        out.add_segment(s)
    return out
