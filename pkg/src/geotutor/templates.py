"""Construction templates: matching against a figure and synthesis of the
auxiliary strokes that complete a partial match.

A template is a small shape pattern (slots, defining facts, required
segments).  Matching binds slots to figure points, allowing up to two slots
to stay open; a score in [0, 1] measures how much of the pattern is already
present.  Synthesis then proposes concrete constructions (new points plus
strokes) realising the open slots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geom import MalformedFigureError, line_intersection
from .knowledge import Construction, Knowledge, NewPoint, canon_fact

SCORE_THRESHOLD = 0.5
MAX_MISSING = 2
MAX_MATCHES = 256
SPEC_TOL_LEN = 1e-5        # relative length tolerance for numeric spec checks
SPEC_TOL_ANG = 1e-7        # radians


@dataclass(frozen=True)
class Template:
    id: str
    name: str
    slots: tuple
    facts: tuple               # raw specs over slot names
    segments: tuple            # slot-name pairs
    symmetry: tuple            # slot-name permutations (incl. identity)
    distinct_groups: tuple = ()  # slot groups that must not coincide pointwise
    noncollinear: tuple = ()   # slot triples that must form real triangles
    max_missing: int = 1       # open slots this template tolerates


TEMPLATES = (
    Template(
        "isosceles_triangle_1", "isosceles triangle with altitude",
        slots=("X", "A", "F", "B"),
        facts=(("seg_eq", ("X", "A"), ("X", "B")),
               ("perp", ("X", "F"), ("A", "B")),
               ("between", "A", "F", "B")),
        segments=(("X", "A"), ("X", "B"), ("X", "F"), ("A", "F"), ("F", "B")),
        symmetry=(("X", "A", "F", "B"), ("X", "B", "F", "A")),
        noncollinear=(("X", "A", "B"),),
    ),
    Template(
        "isosceles_triangle_2", "isosceles triangle",
        slots=("X", "A", "B"),
        facts=(("seg_eq", ("X", "A"), ("X", "B")),),
        segments=(("X", "A"), ("X", "B"), ("A", "B")),
        symmetry=(("X", "A", "B"), ("X", "B", "A")),
        noncollinear=(("X", "A", "B"),),
    ),
    Template(
        "opposite_triangle", "triangles on opposite sides of a crossing",
        slots=("A", "B", "O", "C", "D"),
        facts=(("between", "A", "O", "D"), ("between", "B", "O", "C"),
               ("seg_eq", ("A", "O"), ("O", "D")),
               ("seg_eq", ("B", "O"), ("O", "C"))),
        segments=(("O", "A"), ("O", "B"), ("O", "C"), ("O", "D"),
                  ("A", "B"), ("C", "D")),
        symmetry=(("A", "B", "O", "C", "D"), ("B", "A", "O", "D", "C"),
                  ("D", "C", "O", "B", "A"), ("C", "D", "O", "A", "B")),
        noncollinear=(("A", "O", "B"), ("C", "O", "D")),
        max_missing=2,
    ),
    Template(
        "midpoint_connector", "segment joining two midpoints",
        slots=("A", "B", "C", "D", "E"),
        facts=(("midpoint", "D", ("A", "B")),
               ("midpoint", "E", ("A", "C"))),
        segments=(("A", "B"), ("A", "C"), ("B", "C"), ("D", "E")),
        symmetry=(("A", "B", "C", "D", "E"), ("A", "C", "B", "E", "D")),
        noncollinear=(("A", "B", "C"),),
        max_missing=2,
    ),
    Template(
        "congruent_triangle", "pair of congruent triangles",
        slots=("A", "B", "C", "D", "E", "F"),
        facts=(("seg_eq", ("A", "B"), ("D", "E")),
               ("seg_eq", ("B", "C"), ("E", "F")),
               ("seg_eq", ("A", "C"), ("D", "F"))),
        segments=(("A", "B"), ("B", "C"), ("A", "C"),
                  ("D", "E"), ("E", "F"), ("D", "F")),
        symmetry=tuple(
            tuple("ABCDEF"[p + off] for off in halves for p in perm)
            for halves in ((0, 3), (3, 0))
            for perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1),
                         (0, 2, 1), (2, 1, 0), (1, 0, 2))
        ),
        distinct_groups=((("A", "B", "C"), ("D", "E", "F")),),
        noncollinear=(("A", "B", "C"), ("D", "E", "F")),
    ),
    Template(
        "equivalent_area_triangle", "triangles with equal base and height",
        slots=("B", "C", "P", "A", "E", "F", "Q", "D"),
        facts=(("seg_eq", ("B", "C"), ("E", "F")),
               ("seg_eq", ("A", "P"), ("D", "Q")),
               ("perp", ("A", "P"), ("B", "C")),
               ("perp", ("D", "Q"), ("E", "F")),
               ("between", "B", "P", "C"),
               ("between", "E", "Q", "F")),
        segments=(("A", "B"), ("B", "C"), ("A", "C"), ("A", "P"),
                  ("D", "E"), ("E", "F"), ("D", "F"), ("D", "Q")),
        symmetry=(("B", "C", "P", "A", "E", "F", "Q", "D"),
                  ("C", "B", "P", "A", "E", "F", "Q", "D"),
                  ("B", "C", "P", "A", "F", "E", "Q", "D"),
                  ("C", "B", "P", "A", "F", "E", "Q", "D"),
                  ("E", "F", "Q", "D", "B", "C", "P", "A"),
                  ("F", "E", "Q", "D", "B", "C", "P", "A"),
                  ("E", "F", "Q", "D", "C", "B", "P", "A"),
                  ("F", "E", "Q", "D", "C", "B", "P", "A")),
        distinct_groups=((("A", "B", "C"), ("D", "E", "F")),),
        noncollinear=(("A", "B", "C"), ("D", "E", "F")),
    ),
)

TEMPLATES_BY_ID = {t.id: t for t in TEMPLATES}


@dataclass(frozen=True)
class Match:
    template: Template
    binding: tuple              # (slot, point-or-None) pairs in slot order
    score: float
    missing: tuple              # open slot names

    def bound(self) -> dict:
        return dict(self.binding)

    @property
    def complete(self) -> bool:
        return not self.missing

    def describe(self) -> str:
        shape = "".join(p if p else "?" for _, p in self.binding)
        return f"{self.template.name} {shape}"


# -- numeric spec checks ------------------------------------------------

def _spec_refs(spec):
    """Slot names referenced by a raw spec, in order of appearance."""
    out = []

    def walk(x):
        if isinstance(x, str):
            out.append(x)
        else:
            for y in x:
                walk(y)

    for part in spec[1:]:
        walk(part)
    return out


def _map_spec(spec, binding):
    """Substitute bound point ids into a raw spec."""

    def walk(x):
        if isinstance(x, str):
            return binding[x]
        return tuple(walk(y) for y in x)

    return (spec[0],) + tuple(walk(part) for part in spec[1:])


def spec_holds(fig, spec, tol_len=None, tol_ang=SPEC_TOL_ANG) -> bool:
    """Numerically check a raw (pred, point ids...) spec on the figure."""
    if tol_len is None:
        tol_len = SPEC_TOL_LEN * max(fig.diameter(), 1e-9)
    pred = spec[0]
    if pred == "seg_eq":
        (a, b), (c, d) = spec[1], spec[2]
        return abs(fig.dist(a, b) - fig.dist(c, d)) <= tol_len
    if pred == "between":
        a, m, b = spec[1], spec[2], spec[3]
        if len({a, m, b}) < 3:
            return False
        return abs(fig.dist(a, m) + fig.dist(m, b)
                   - fig.dist(a, b)) <= tol_len
    if pred == "perp":
        (a, b), (c, d) = spec[1], spec[2]
        if a == b or c == d:
            return False
        ax, ay = fig.xy(a)
        bx, by = fig.xy(b)
        cx, cy = fig.xy(c)
        dx, dy = fig.xy(d)
        u = (bx - ax, by - ay)
        v = (dx - cx, dy - cy)
        nu = math.hypot(*u)
        nv = math.hypot(*v)
        if nu < 1e-12 or nv < 1e-12:
            return False
        return abs(u[0] * v[0] + u[1] * v[1]) / (nu * nv) <= SPEC_TOL_LEN
    if pred == "midpoint":
        m, (a, b) = spec[1], spec[2]
        if len({a, m, b}) < 3:
            return False
        return (abs(fig.dist(m, a) - fig.dist(m, b)) <= tol_len
                and abs(fig.dist(m, a) + fig.dist(m, b)
                        - fig.dist(a, b)) <= tol_len)
    raise ValueError(f"unsupported template predicate {pred}")


def _fact_known(k: Knowledge, spec) -> bool:
    """Is the fully bound spec already established in the knowledge base?"""
    pred = spec[0]
    try:
        f = canon_fact(k, pred, spec[1:])
    except MalformedFigureError:
        return False
    if f is None:
        # degenerate canonicalisation: reflexive equality counts as known
        return pred == "seg_eq" and (tuple(sorted(spec[1]))
                                     == tuple(sorted(spec[2])))
    return k.has(f)


# -- matching -------------------------------------------------------------

def _canonical_binding(tpl: Template, binding: dict):
    best = None
    for perm in tpl.symmetry:
        cand = tuple(binding.get(s) or "?" for s in perm)
        if best is None or cand < best:
            best = cand
    return best


MATCH_NODE_CAP = 200_000       # safety valve per template


def _compile_spec(spec, slot_pos):
    """Precompile a raw spec into a fast binding-list -> mapped-spec builder."""
    pred = spec[0]
    pat = []
    for part in spec[1:]:
        if isinstance(part, str):
            pat.append(slot_pos[part])
        else:
            pat.append(tuple(slot_pos[s] for s in part))

    def build(bv, pred=pred, pat=pat):
        return (pred,) + tuple(
            bv[p] if isinstance(p, int) else tuple(bv[q] for q in p)
            for p in pat)

    return build


def match_templates(k: Knowledge, max_missing: int = MAX_MISSING,
                    cap: int | None = MAX_MATCHES) -> list[Match]:
    """All partial template matches scoring at least the threshold."""
    fig = k.fig
    pts = sorted(fig.points)
    seg_cache: dict = {}
    fact_cache: dict = {}

    def seg_present(p, q):
        key = (p, q) if p < q else (q, p)
        if key not in seg_cache:
            seg_cache[key] = fig.segment_present(p, q)
        return seg_cache[key]

    def fact_state(spec):
        """1.0 established, 0.5 plausible but unproven, None impossible."""
        if spec in fact_cache:
            return fact_cache[spec]
        if spec[0] == "between":
            a, m, b = spec[1:]
            if len({a, m, b}) < 3 or not fig.between(a, m, b):
                st = None
            elif fig.between_given(a, m, b):
                st = 1.0
            else:
                # true in coordinates but unsupported by strokes; drawing
                # the template segments will establish it
                st = 0.5
        elif _fact_known(k, spec):
            st = 1.0
        elif spec_holds(fig, spec):
            st = 0.5
        else:
            st = None
        fact_cache[spec] = st
        return st

    results = []
    for tpl in TEMPLATES:
        seen = set()
        n = len(tpl.slots)
        slot_pos = {s: i for i, s in enumerate(tpl.slots)}
        # (kind, payload, ref positions); scheduled at the depth all refs bind
        items = ([("fact", _compile_spec(f, slot_pos),
                   [slot_pos[r] for r in _spec_refs(f)]) for f in tpl.facts]
                 + [("seg", None, [slot_pos[r] for r in s])
                    for s in tpl.segments]
                 + [("ncl", None, [slot_pos[r] for r in t])
                    for t in tpl.noncollinear])
        total = sum(1 for kind, _, _ in items if kind != "ncl")
        by_depth = [[] for _ in tpl.slots]
        for item in items:
            by_depth[max(item[2])].append(item)
        # symmetry perms as slot positions, identity dropped
        perms = [tuple(slot_pos[s] for s in perm) for perm in tpl.symmetry
                 if tuple(perm) != tpl.slots]
        groups = [([slot_pos[s] for s in g1], [slot_pos[s] for s in g2])
                  for g1, g2 in tpl.distinct_groups]
        bv = [None] * n
        nodes = [0]

        def symmetry_pruned(i):
            """True when some symmetric reordering of the current partial
            binding sorts strictly earlier, so its canonical twin will be
            enumerated separately."""
            for perm in perms:
                for j in range(i + 1):
                    pj = perm[j]
                    if pj > i:
                        break
                    vi = bv[j] or "?"
                    vp = bv[pj] or "?"
                    if vi < vp:
                        break
                    if vi > vp:
                        return True
            return False

        def eval_item(kind, build, refs):
            vals = [bv[r] for r in refs]
            if kind == "ncl":
                if None in vals:
                    return "skip"
                if len(set(vals)) < 3 or fig.collinear(*vals):
                    return None
                return "skip"
            if None in vals:
                return 0.5
            if kind == "seg":
                p, q = vals
                if p == q:
                    return None
                return 1.0 if seg_present(p, q) else 0.0
            return fact_state(build(bv))

        def assign(i, missing_left, done, evaluated):
            nodes[0] += 1
            if nodes[0] > MATCH_NODE_CAP:
                return
            if i == n:
                score = done / total
                if score < SCORE_THRESHOLD:
                    return
                for g1, g2 in groups:
                    if all(bv[a] == bv[b] for a, b in zip(g1, g2)):
                        return
                binding = dict(zip(tpl.slots, bv))
                key = _canonical_binding(tpl, binding)
                if key in seen:
                    return
                seen.add(key)
                missing = tuple(s for s in tpl.slots if binding[s] is None)
                results.append(Match(tpl, tuple(zip(tpl.slots, bv)),
                                     round(score, 6), missing))
                return
            options = list(pts)
            if missing_left > 0:
                options.append(None)
            for p in options:
                bv[i] = p
                if symmetry_pruned(i):
                    continue
                ok = True
                d2, e2 = done, evaluated
                for kind, build, refs in by_depth[i]:
                    st = eval_item(kind, build, refs)
                    if st is None:
                        ok = False
                        break
                    if st != "skip":
                        d2 += st
                        e2 += 1
                # optimistic bound: unseen items could all be satisfied
                if ok and (d2 + (total - e2)) / total >= SCORE_THRESHOLD:
                    assign(i + 1, missing_left - (p is None), d2, e2)
            bv[i] = None

        assign(0, min(max_missing, tpl.max_missing), 0.0, 0)
    tpl_index = {t.id: i for i, t in enumerate(TEMPLATES)}
    results.sort(key=lambda m: (-m.score, len(m.missing),
                                tpl_index[m.template.id],
                                _canonical_binding(m.template, m.bound())))
    return results[:cap] if cap is not None else results


# -- construction synthesis -------------------------------------------------

@dataclass
class _Locus:
    kind: str                   # line | segment_on | extension | circle | point
    p1: tuple = None            # coordinates
    p2: tuple = None
    center: tuple = None
    radius: float = 0.0
    fact_spec: tuple = None     # metric spec to assert if used, already mapped
    point_kind: str = "intersection"
    incidence: tuple = None     # (p, q) ids when the locus is a drawn line


def _map_inc(inc, ids):
    """Resolve slot-name incidence sentinels to point ids."""
    out = []
    for e in inc:
        if e and e[0] == "slot":
            a, b = ids.get(e[1], e[1]), ids.get(e[2], e[2])
            if a != b:
                out.append((a, b))
        else:
            out.append(tuple(e))
    return tuple(out)


def _loci_for_slot(fig, tpl, slot, coords):
    """Loci constraining an open slot, given coordinates for the others.

    `coords` maps slot name -> (x, y) for every resolved slot.  Returns None
    when some constraint on this slot still depends on an unresolved slot.
    """
    loci = []
    for spec in tpl.facts:
        refs = _spec_refs(spec)
        if slot not in refs:
            continue
        if any(r != slot and r not in coords for r in refs):
            return None
        pred = spec[0]
        if pred == "between":
            a, m, b = spec[1], spec[2], spec[3]
            if m == slot:
                loci.append(_Locus("segment_on", p1=coords[a], p2=coords[b],
                                   fact_spec=spec,
                                   incidence=("slot", a, b)))
            else:
                o, far = (m, b) if a == slot else (m, a)
                loci.append(_Locus("extension", p1=coords[far],
                                   p2=coords[o], fact_spec=spec,
                                   incidence=("slot", far, o)))
        elif pred == "perp":
            pairs = [spec[1], spec[2]]
            for idx, pair in enumerate(pairs):
                if slot in pair:
                    other = pair[0] if pair[1] == slot else pair[1]
                    base = pairs[1 - idx]
                    if slot in base:
                        return None
                    bx, by = coords[base[0]]
                    cx, cy = coords[base[1]]
                    ox, oy = coords[other]
                    # line through `other` perpendicular to the base
                    loci.append(_Locus(
                        "line", p1=(ox, oy),
                        p2=(ox - (cy - by), oy + (cx - bx)),
                        fact_spec=spec))
        elif pred == "seg_eq":
            (a, b), (c, d) = spec[1], spec[2]
            side1 = slot in (a, b)
            side2 = slot in (c, d)
            if side1 and side2:
                # |slot-p| = |slot-q|: perpendicular bisector of pq
                p = a if b == slot else b
                q = c if d == slot else d
                px, py = coords[p]
                qx, qy = coords[q]
                mid = ((px + qx) / 2, (py + qy) / 2)
                loci.append(_Locus(
                    "line", p1=mid,
                    p2=(mid[0] - (qy - py), mid[1] + (qx - px)),
                    fact_spec=spec))
            else:
                if side2:
                    (a, b), (c, d) = (c, d), (a, b)
                center = a if b == slot else b
                cx, cy = coords[center]
                r = math.dist(coords[c], coords[d])
                loci.append(_Locus("circle", center=(cx, cy), radius=r,
                                   fact_spec=spec))
        elif pred == "midpoint":
            m, (a, b) = spec[1], spec[2]
            if m == slot:
                ax, ay = coords[a]
                bx, by = coords[b]
                loci.append(_Locus("point",
                                   p1=((ax + bx) / 2, (ay + by) / 2),
                                   fact_spec=spec, point_kind="midpoint"))
            else:
                # slot is the reflection of the other end across m
                other = b if a == slot else a
                mx, my = coords[m]
                ox, oy = coords[other]
                loci.append(_Locus("point",
                                   p1=(2 * mx - ox, 2 * my - oy),
                                   fact_spec=spec, point_kind="transfer"))
    return loci


def _line_line(l1: _Locus, l2: _Locus):
    try:
        return line_intersection(l1.p1, l1.p2, l2.p1, l2.p2)
    except MalformedFigureError:
        return None


def _line_circle(line: _Locus, circ: _Locus):
    (x1, y1), (x2, y2) = line.p1, line.p2
    cx, cy = circ.center
    dx, dy = x2 - x1, y2 - y1
    n2 = dx * dx + dy * dy
    if n2 < 1e-18:
        return []
    t0 = ((cx - x1) * dx + (cy - y1) * dy) / n2
    px, py = x1 + t0 * dx, y1 + t0 * dy
    h2 = circ.radius ** 2 - ((px - cx) ** 2 + (py - cy) ** 2)
    if h2 < -1e-12:
        return []
    h = math.sqrt(max(h2, 0.0)) / math.sqrt(n2)
    if h < 1e-12:
        return [(px, py)]
    return [(px + h * dx, py + h * dy), (px - h * dx, py - h * dy)]


def _circle_circle(c1: _Locus, c2: _Locus):
    (x1, y1), (x2, y2) = c1.center, c2.center
    d = math.dist(c1.center, c2.center)
    if d < 1e-12:
        return []
    a = (c1.radius ** 2 - c2.radius ** 2 + d * d) / (2 * d)
    h2 = c1.radius ** 2 - a * a
    if h2 < -1e-12:
        return []
    h = math.sqrt(max(h2, 0.0))
    ux, uy = (x2 - x1) / d, (y2 - y1) / d
    px, py = x1 + a * ux, y1 + a * uy
    if h < 1e-12:
        return [(px, py)]
    return [(px + h * -uy, py + h * ux), (px - h * -uy, py - h * ux)]


def _on_locus(locus: _Locus, xy, tol) -> bool:
    x, y = xy
    if locus.kind == "point":
        return math.dist(xy, locus.p1) <= tol
    if locus.kind == "circle":
        return abs(math.dist(xy, locus.center) - locus.radius) <= tol
    (x1, y1), (x2, y2) = locus.p1, locus.p2
    dx, dy = x2 - x1, y2 - y1
    n = math.hypot(dx, dy)
    if n < 1e-12:
        return False
    off = abs((x - x1) * dy - (y - y1) * dx) / n
    if off > tol:
        return False
    t = ((x - x1) * dx + (y - y1) * dy) / (n * n)
    if locus.kind == "segment_on":
        return 0 < t < 1
    if locus.kind == "extension":
        return t > 1
    return True


def _partner_lines(fig, tpl, slot, binding):
    """Existing figure lines through the slot's required-segment partners."""
    partners = set()
    for (p, q) in tpl.segments:
        if slot in (p, q):
            other = q if p == slot else p
            if binding.get(other):
                partners.add(binding[other])
    lines = []
    for key in fig.lines():
        for partner in sorted(partners):
            if partner in key:
                lines.append(_Locus("line", p1=fig.xy(key[0]),
                                    p2=fig.xy(key[-1]),
                                    incidence=(key[0], key[-1])))
                break
    return lines


def _candidate_defs(fig, tpl, slot, binding, coords):
    """Candidate (xy, point_kind, asserted_specs) triples for an open slot."""
    loci = _loci_for_slot(fig, tpl, slot, coords)
    if loci is None:
        return None
    tol = 1e-6 * max(fig.diameter(), 1e-9)
    out = []

    def add(xy, kind, used):
        if xy is None or not all(map(math.isfinite, xy)):
            return
        if not all(_on_locus(l, xy, tol) for l in loci):
            return
        if fig.nearest_point(xy[0], xy[1], 2 * fig.epsilon_len):
            return
        specs = tuple(l.fact_spec for l in used if l.fact_spec)
        inc = tuple(l.incidence for l in used if l.incidence)
        out.append((xy, kind, specs, inc))

    points = [l for l in loci if l.kind == "point"]
    lines = [l for l in loci if l.kind in ("line", "segment_on", "extension")]
    circles = [l for l in loci if l.kind == "circle"]
    for l in points:
        add(l.p1, l.point_kind, (l,))
    for i, l1 in enumerate(lines):
        for l2 in lines[i + 1:]:
            add(_line_line(l1, l2), "intersection", (l1, l2))
    for l1 in lines:
        for ex in _partner_lines(fig, tpl, slot, binding):
            add(_line_line(l1, ex), "intersection", (l1, ex))
    for l1 in lines:
        for c in circles:
            for xy in _line_circle(l1, c):
                add(xy, "transfer", (l1, c))
    for c in circles:
        cx, cy = c.center
        center_id = fig.nearest_point(cx, cy, fig.epsilon_len)
        if center_id:
            for rep in fig.rays_at(center_id):
                rx, ry = fig.xy(rep)
                n = math.hypot(rx - cx, ry - cy)
                ux, uy = (rx - cx) / n, (ry - cy) / n
                ray = _Locus("line", p1=(cx, cy), p2=(rx, ry),
                             incidence=(center_id, rep))
                add((cx + c.radius * ux, cy + c.radius * uy),
                    "transfer", (c, ray))
                add((cx - c.radius * ux, cy - c.radius * uy),
                    "transfer", (c, ray))
        for ex in _partner_lines(fig, tpl, slot, binding):
            for xy in _line_circle(ex, c):
                add(xy, "transfer", (c, ex))
    for i, c1 in enumerate(circles):
        for c2 in circles[i + 1:]:
            for xy in _circle_circle(c1, c2):
                add(xy, "transfer", (c1, c2))
    # distinct definitions of the same point assert different given facts;
    # keep the intersection definitions (incidence only) and one transfer
    dedup = []
    for cand in out:
        if any(math.dist(cand[0], other[0]) <= tol
               and cand[1:] == other[1:] for other in dedup):
            continue
        same_pt = [o for o in dedup if math.dist(cand[0], o[0]) <= tol]
        if cand[1] == "transfer" and any(o[1] == "transfer" for o in same_pt):
            continue
        if cand[1] == "intersection" and \
                sum(o[1] == "intersection" for o in same_pt) >= 3:
            continue
        dedup.append(cand)
    return dedup


def _mapped_spec_with_ids(spec, ids):
    return _map_spec(spec, ids)


def _new_ink(fig, trial, strokes):
    """The genuinely new ink a set of strokes adds, as sorted coordinate
    intervals.

    Each stroke is split at the chain points it passes through, and pieces
    already drawn in the base figure are dropped, so strokes that describe
    the same extension with different endpoints compare equal (e.g. drawing
    F-B versus F-C when C already lies on segment B-C).
    """
    pieces = []
    for (a, b) in strokes:
        ax, ay = trial.xy(a)
        bx, by = trial.xy(b)
        chain = [p for p in trial.line_of(a, b)
                 if p in (a, b) or trial.between(a, p, b)]
        if a not in chain:
            chain = [a, b]
        chain.sort(key=lambda p: (trial.xy(p)[0] - ax) * (bx - ax)
                   + (trial.xy(p)[1] - ay) * (by - ay))
        for u, v in zip(chain, chain[1:]):
            if (u in fig.points and v in fig.points
                    and fig.segment_present(u, v)):
                continue
            pieces.append(tuple(sorted(
                (tuple(round(c, 6) for c in trial.xy(u)),
                 tuple(round(c, 6) for c in trial.xy(v))))))
    return tuple(sorted(pieces))


def synthesize_constructions(k: Knowledge, match: Match) -> list[Construction]:
    """Concrete constructions completing a partial match.

    Each returned construction was verified: applying it yields a figure on
    which every template fact holds numerically and every required segment
    is drawn (directly or covered by collinear strokes).
    """
    if match.complete:
        return []
    fig = k.fig
    tpl = match.template
    binding = match.bound()
    coords = {s: fig.xy(p) for s, p in binding.items() if p}

    # resolve open slots in dependency order
    plans = [((), coords)]          # (tuple of (slot, xy, kind, specs), coords)
    pending = list(match.missing)
    while pending:
        progressed = False
        for slot in list(pending):
            new_plans = []
            any_resolved = False
            for (steps, cmap) in plans:
                cands = _candidate_defs(fig, tpl, slot, binding, cmap)
                if cands is None:
                    new_plans.append((steps, cmap))
                    continue
                any_resolved = True
                for (xy, kind, specs, inc) in cands[:6]:
                    c2 = dict(cmap)
                    c2[slot] = xy
                    new_plans.append(
                        (steps + ((slot, xy, kind, specs, inc),), c2))
            if any_resolved:
                plans = new_plans
                pending.remove(slot)
                progressed = True
        if not progressed:
            return []
    if not plans:
        return []

    results = []
    seen = set()
    for (steps, cmap) in plans:
        if len(steps) != len(match.missing):
            continue
        trial = fig.copy()
        ids = dict(binding)
        new_points = []
        ok = True
        for (slot, xy, kind, specs, inc) in steps:
            pid = trial.next_point_id()
            ids[slot] = pid
            try:
                from .geom import Point
                trial.add_point(Point(pid, xy[0], xy[1]))
            except MalformedFigureError:
                ok = False
                break
            new_points.append((slot, pid, xy, kind, specs, inc))
        if not ok:
            continue
        new_points = [(slot, pid, xy, kind, specs, _map_inc(inc, ids))
                      for (slot, pid, xy, kind, specs, inc) in new_points]
        # same incidence declarations add_construction will use, so the
        # trial figure forms the same line chains as the applied one
        declared: dict = {}
        for (slot, pid, xy, kind, specs, inc) in new_points:
            pairs = declared.setdefault(pid, [])
            pairs.extend(tuple(pr) for pr in inc)
            for spec in specs:
                mapped = _map_spec(spec, ids)
                if mapped[0] == "between" and mapped[2] == pid:
                    pairs.append((mapped[1], mapped[3]))
                elif mapped[0] == "midpoint":
                    m, (ma, mb) = mapped[1], mapped[2]
                    if m == pid:
                        pairs.append((ma, mb))
                    elif pid in (ma, mb):
                        pairs.append((mb if ma == pid else ma, m))
        # strokes: required segments not already covered
        strokes = []
        for (p, q) in tpl.segments:
            a, b = ids[p], ids[q]
            if a == b:
                ok = False
                break
            if not trial.segment_present(a, b):
                strokes.append((a, b))
                from .geom import seg as mkseg
                from .knowledge import _stroke_line
                trial.add_segment(mkseg(a, b, kind="auxiliary",
                                        line=_stroke_line(trial, declared,
                                                          a, b)))
        if not ok:
            continue
        # verify the completed figure satisfies the template numerically
        if not all(spec_holds(trial, _map_spec(s, ids)) for s in tpl.facts):
            continue
        if not all(trial.segment_present(ids[p], ids[q])
                   for (p, q) in tpl.segments):
            continue
        if any(len({ids[a], ids[b], ids[c]}) < 3
               or trial.collinear(ids[a], ids[b], ids[c])
               for (a, b, c) in tpl.noncollinear):
            continue
        if any(tuple(ids[s] for s in g1) == tuple(ids[s] for s in g2)
               for g1, g2 in tpl.distinct_groups):
            continue
        np_objs = tuple(
            NewPoint(pid, xy[0], xy[1], kind,
                     facts=tuple(_mapped_spec_with_ids(s, ids)
                                 for s in specs),
                     on_lines=inc,
                     note=f"{tpl.id} slot {slot}")
            for (slot, pid, xy, kind, specs, inc) in new_points)
        shape = "".join(ids[s] for s in tpl.slots)
        key = (tuple(sorted((round(x, 6), round(y, 6),
                             tuple(sorted((tuple(pr) for pr in inc),
                                          key=repr)),
                             tuple(sorted((_map_spec(s, ids) for s in specs),
                                          key=repr)))
                            for (_, _, (x, y), _, specs, inc) in new_points)),
               _new_ink(fig, trial, strokes))
        cons = Construction(
            points=np_objs, segments=tuple(strokes),
            description=f"{tpl.name} {shape}",
            shape=shape, figure_key=key,
            realizes=((tpl.id, shape),))
        if key in seen:
            continue
        seen.add(key)
        results.append(cons)
    results.sort(key=lambda c: (c.strokes, not c.straightedge, c.description))
    return results
