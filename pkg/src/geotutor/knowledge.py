"""Knowledge base, implicit topology facts, forward chaining and proofs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .facts import Fact, fmt_fact
from .geom import (AngleRef, MalformedFigureError, Point, ProblemFigure,
                   measure_angle, normalize, seg)

DEFAULT_BUDGET = 50_000

GIVEN = "given"
FIGURE = "figure"
CONSTRUCTED = "constructed"


@dataclass(frozen=True)
class Provenance:
    rule: str                      # rule id, or given/figure/constructed
    premises: tuple = ()           # Facts this derivation used


@dataclass(frozen=True)
class NewPoint:
    id: str
    x: float
    y: float
    kind: str                      # intersection | transfer | midpoint | on_segment
    facts: tuple = ()              # raw fact specs, e.g. ("seg_eq", ("A","F"), ("A","C"))
    on_lines: tuple = ()           # (p, q) pairs of drawn lines the point is placed on
    note: str = ""


@dataclass(frozen=True)
class Construction:
    """Auxiliary elements completing a template match."""

    points: tuple = ()             # NewPoint instances
    segments: tuple = ()           # new strokes, as (p, q) id pairs
    description: str = ""
    shape: str = ""                # template slot ids in slot order
    figure_key: tuple = ()         # geometry of the added ink, for dedup
    # every (template id, shape) this construction completes; the same new
    # point and strokes can realize several templates at once
    realizes: tuple = ()

    @property
    def strokes(self) -> int:
        return len(self.segments)

    @property
    def straightedge(self) -> bool:
        return all(p.kind == "intersection" for p in self.points)


class Knowledge:
    """A figure plus the set of facts currently known about it."""

    def __init__(self, fig: ProblemFigure, goal_spec=()):
        self.fig = fig
        self.goal_spec = tuple(goal_spec)   # raw (pred, args, value) triples
        self.facts: dict[Fact, Provenance] = {}
        self._by_pred: dict[str, list[Fact]] = {}
        self.derived_count = 0
        self.budget_exhausted = False

    # -- canonical key builders ---------------------------------------
    def seg(self, a: str, b: str):
        if a == b:
            return None
        return (a, b) if a < b else (b, a)

    def line(self, p: str, q: str):
        return self.fig.line_of(p, q)

    def angle_at(self, v: str, p: str, q: str):
        """Canonical angle key for the angle p-v-q, or None if degenerate."""
        if v in (p, q) or p == q:
            return None
        fig = self.fig
        if fig.collinear(v, p, q):
            return None
        r1 = fig.ray_rep(v, p)
        r2 = fig.ray_rep(v, q)
        if r1 == r2:
            return None
        if r2 < r1:
            r1, r2 = r2, r1
        return (v, (r1, r2))

    def recanon_angle(self, a):
        v, (r1, r2) = a
        return self.angle_at(v, r1, r2)

    # -- fact storage --------------------------------------------------
    def by_pred(self, pred: str) -> list[Fact]:
        return self._by_pred.get(pred, [])

    def has(self, fact: Fact) -> bool:
        return fact in self.facts

    def add(self, fact: Fact, rule: str, premises: tuple = ()) -> bool:
        if fact in self.facts:
            return False
        self.facts[fact] = Provenance(rule, premises)
        self._by_pred.setdefault(fact.pred, []).append(fact)
        return True

    def copy(self) -> "Knowledge":
        k = Knowledge(self.fig.copy(), self.goal_spec)
        k.facts = dict(self.facts)
        k._by_pred = {p: list(v) for p, v in self._by_pred.items()}
        k.derived_count = self.derived_count
        k.budget_exhausted = self.budget_exhausted
        return k

    # -- equality helpers used by rules ---------------------------------
    def eq_len(self, s1, s2):
        """Premises making |s1| = |s2|, or None. Same segment -> ()."""
        if s1 is None or s2 is None:
            return None
        if s1 == s2:
            return ()
        f = Fact("seg_eq", tuple(sorted((s1, s2))))
        return (f,) if f in self.facts else None

    def eq_angle(self, a1, a2):
        if a1 is None or a2 is None:
            return None
        if a1 == a2:
            return ()
        f = Fact("angle_eq", tuple(sorted((a1, a2))))
        return (f,) if f in self.facts else None

    def measures(self) -> dict:
        out = {}
        for f in self.by_pred("angle_measure"):
            out[f.args[0]] = (f.value, f)
        return out

    # -- goal ------------------------------------------------------------
    def goal_facts(self) -> list[Fact]:
        return [canon_fact(self, pred, args, value)
                for (pred, args, value) in self.goal_spec]

    def goal_proved(self) -> bool:
        try:
            goals = self.goal_facts()
        except MalformedFigureError:
            return False
        return bool(goals) and all(g is not None and g in self.facts
                                   for g in goals)


def canon_fact(k: Knowledge, pred: str, args, value=None):
    """Build a canonical Fact from raw point-id arguments.

    Raw argument shapes:
      seg_eq/seg_sum: pairs of ids; midpoint: (m,(a,b)); perp/parallel: pairs
      of ids naming the lines; angle preds: (v,p,q) triples; between:
      (a,m,b); congruent/similar: two id triples.
    Returns None for degenerate statements.
    """
    from .facts import tri_canonical
    if pred == "seg_eq":
        s1, s2 = k.seg(*args[0]), k.seg(*args[1])
        if s1 is None or s2 is None or s1 == s2:
            return None
        return Fact("seg_eq", tuple(sorted((s1, s2))))
    if pred == "seg_sum":
        s1, s2, s3 = (k.seg(*a) for a in args)
        if None in (s1, s2, s3):
            return None
        return Fact("seg_sum", (*sorted((s1, s2)), s3))
    if pred == "midpoint":
        m, (a, b) = args
        s = k.seg(a, b)
        if s is None or m in s:
            return None
        return Fact("midpoint", (m, s))
    if pred in ("perp", "parallel"):
        l1, l2 = k.line(*args[0]), k.line(*args[1])
        if l1 == l2:
            return None
        return Fact(pred, tuple(sorted((l1, l2))))
    if pred == "angle_eq":
        a1 = k.angle_at(*args[0])
        a2 = k.angle_at(*args[1])
        if a1 is None or a2 is None or a1 == a2:
            return None
        return Fact("angle_eq", tuple(sorted((a1, a2))))
    if pred == "angle_measure":
        a = k.angle_at(*args[0])
        if a is None:
            return None
        return Fact("angle_measure", (a,), round(value, 9))
    if pred == "angle_sum":
        a1, a2, a3 = (k.angle_at(*x) for x in args)
        if None in (a1, a2, a3):
            return None
        return Fact("angle_sum", (*sorted((a1, a2)), a3))
    if pred == "supplementary":
        a1, a2 = k.angle_at(*args[0]), k.angle_at(*args[1])
        if a1 is None or a2 is None:
            return None
        return Fact("supplementary", tuple(sorted((a1, a2))))
    if pred == "between":
        a, m, b = args
        if len({a, m, b}) < 3:
            return None
        if b < a:
            a, b = b, a
        return Fact("between", (a, m, b))
    if pred == "collinear":
        return Fact("collinear", tuple(sorted(args)))
    if pred in ("congruent_tri", "similar_tri"):
        return Fact(pred, tri_canonical(tuple(args[0]), tuple(args[1])))
    raise ValueError(f"unknown predicate {pred}")


def fact_holds(fig: ProblemFigure, fact: Fact, rel_tol: float = 1e-6) -> bool:
    """Numerically check a canonical fact against figure coordinates."""
    scale = max(fig.diameter(), 1e-9)
    tol_len = rel_tol * scale
    tol_ang = rel_tol * math.pi

    def d(s):
        return fig.dist(*s)

    def ang(a):
        v, (r1, r2) = a
        return measure_angle(fig, AngleRef(v, r1, r2))

    def direction(line_key):
        a, b = line_key[0], line_key[-1]
        ax, ay = fig.xy(a)
        bx, by = fig.xy(b)
        n = math.hypot(bx - ax, by - ay)
        return ((bx - ax) / n, (by - ay) / n)

    p, a = fact.pred, fact.args
    if p == "seg_eq":
        return abs(d(a[0]) - d(a[1])) <= tol_len
    if p == "seg_sum":
        return abs(d(a[0]) + d(a[1]) - d(a[2])) <= tol_len
    if p == "midpoint":
        m, (x, y) = a
        return (abs(fig.dist(m, x) - fig.dist(m, y)) <= tol_len
                and abs(fig.dist(m, x) + fig.dist(m, y)
                        - fig.dist(x, y)) <= tol_len)
    if p in ("perp", "parallel"):
        u = direction(a[0])
        v = direction(a[1])
        dot = u[0] * v[0] + u[1] * v[1]
        cross = u[0] * v[1] - u[1] * v[0]
        return abs(dot) <= rel_tol if p == "perp" else abs(cross) <= rel_tol
    if p == "angle_eq":
        return abs(ang(a[0]) - ang(a[1])) <= tol_ang
    if p == "angle_measure":
        return abs(ang(a[0]) - fact.value) <= tol_ang
    if p == "angle_sum":
        return abs(ang(a[0]) + ang(a[1]) - ang(a[2])) <= tol_ang
    if p == "supplementary":
        return abs(ang(a[0]) + ang(a[1]) - math.pi) <= tol_ang
    if p == "between":
        x, m, y = a
        return abs(fig.dist(x, m) + fig.dist(m, y)
                   - fig.dist(x, y)) <= tol_len
    if p == "collinear":
        return abs(fig.dist(a[0], a[1]) + fig.dist(a[1], a[2])
                   - fig.dist(a[0], a[2])) <= tol_len or fig.collinear(*a)
    if p in ("congruent_tri", "similar_tri"):
        (x1, y1, z1), (x2, y2, z2) = a
        s1 = [fig.dist(x1, y1), fig.dist(y1, z1), fig.dist(x1, z1)]
        s2 = [fig.dist(x2, y2), fig.dist(y2, z2), fig.dist(x2, z2)]
        if p == "congruent_tri":
            return all(abs(u - v) <= tol_len for u, v in zip(s1, s2))
        r = s2[0] / s1[0]
        return all(abs(v - u * r) <= tol_len for u, v in zip(s1, s2))
    raise ValueError(f"unknown predicate {p}")


# -- implicit topology facts -------------------------------------------

def implicit_facts(k: Knowledge) -> None:
    """Record facts read directly off the figure topology.

    Betweenness / collinearity (and the segment-sum decompositions they
    induce), linear-pair supplements, and in-angle ray decompositions.
    """
    fig = k.fig
    pts = sorted(fig.points)
    lines = fig.lines()
    for line in lines:
        members = sorted(line)
        # order along the line
        a0, b0 = line[0], line[-1]
        ax, ay = fig.xy(a0)
        # pick the most distant pair as the axis
        axis = max(((p, q) for p in members for q in members if p < q),
                   key=lambda pq: fig.dist(*pq))
        ax, ay = fig.xy(axis[0])
        bx, by = fig.xy(axis[1])
        dx, dy = bx - ax, by - ay

        def t_of(p):
            px, py = fig.xy(p)
            return ((px - ax) * dx + (py - ay) * dy)

        ordered = sorted(members, key=t_of)
        n = len(ordered)
        for i in range(n):
            for j in range(i + 1, n):
                for l in range(j + 1, n):
                    a, m, b = ordered[i], ordered[j], ordered[l]
                    k.add(canon_fact(k, "collinear", (a, m, b)), FIGURE)
                    f = canon_fact(k, "between", (a, m, b))
                    if f:
                        k.add(f, FIGURE)
                    s = canon_fact(k, "seg_sum",
                                   ((a, m), (m, b), (a, b)))
                    if s:
                        k.add(s, FIGURE)
    # angle decompositions at each vertex
    for v in pts:
        rays = fig.rays_at(v)
        if len(rays) < 2:
            continue
        vx, vy = fig.xy(v)

        def ang(r):
            rx, ry = fig.xy(r)
            return math.atan2(ry - vy, rx - vx)

        for i, r1 in enumerate(rays):
            for r2 in rays[i + 1:]:
                # linear pair: r1, r2 opposite -> any third ray splits pi
                if r2 in fig.line_of(v, r1) and not fig.on_ray(v, r1, r2):
                    for r3 in rays:
                        if r3 in (r1, r2):
                            continue
                        f = canon_fact(k, "supplementary",
                                       ((v, r1, r3), (v, r3, r2)))
                        if f:
                            k.add(f, FIGURE)
                    continue
                # r3 strictly inside angle (r1, r2)
                a1 = k.angle_at(v, r1, r2)
                if a1 is None:
                    continue
                total = measure_angle(fig, AngleRef(v, r1, r2))
                for r3 in rays:
                    if r3 in (r1, r2):
                        continue
                    p1 = measure_angle(fig, AngleRef(v, r1, r3))
                    p2 = measure_angle(fig, AngleRef(v, r3, r2))
                    if (abs(p1 + p2 - total) < 1e-7
                            and p1 > 1e-7 and p2 > 1e-7):
                        f = canon_fact(k, "angle_sum",
                                       ((v, r1, r3), (v, r3, r2), (v, r1, r2)))
                        if f:
                            k.add(f, FIGURE)


# -- reasoning ------------------------------------------------------------

def reasoning(k: Knowledge, budget: int = DEFAULT_BUDGET):
    """Forward-chain the rule catalog to fixpoint (or budget / goal).

    Returns (proved, k'); the input knowledge is not mutated.
    """
    from .rules import CATALOG
    k = k.copy()
    implicit_facts(k)
    k.budget_exhausted = False
    if k.goal_proved():
        return True, k
    changed = True
    while changed:
        changed = False
        for rule in CATALOG:
            added = 0
            for fact, premises in rule.apply(k):
                if fact is None or fact in k.facts:
                    continue
                k.add(fact, rule.id, tuple(premises))
                k.derived_count += 1
                added += 1
                changed = True
                if k.derived_count >= budget:
                    k.budget_exhausted = True
                    return k.goal_proved(), k
            if added and k.goal_proved():
                return True, k
    return k.goal_proved(), k


def add_construction(k: Knowledge, construction: Construction) -> Knowledge:
    """Apply auxiliary points/segments, renormalize and recanonicalize."""
    k2 = k.copy()
    fig = k2.fig
    declared: dict = {}
    for np_ in construction.points:
        fig.add_point(Point(np_.id, np_.x, np_.y))
        pairs = declared.setdefault(np_.id, [])
        pairs.extend(np_.on_lines)
        for spec in np_.facts:
            if spec[0] == "between" and spec[2] == np_.id:
                pairs.append((spec[1], spec[3]))
            elif spec[0] == "midpoint":
                m, (a, b) = spec[1], spec[2]
                if m == np_.id:
                    pairs.append((a, b))
                elif np_.id in (a, b):
                    # reflection through m: the new point extends that line
                    other = b if a == np_.id else a
                    pairs.append((other, m))
    for (a, b) in construction.segments:
        fig.add_segment(seg(a, b, kind="auxiliary",
                            line=_stroke_line(fig, declared, a, b)))
    k2.fig = normalize(fig, declared)
    _recanonicalize(k2)
    for np_ in construction.points:
        for spec in np_.facts:
            pred, *args = spec
            f = canon_fact(k2, pred, args)
            if f:
                k2.add(f, CONSTRUCTED)
    implicit_facts(k2)
    return k2


def _stroke_line(fig, declared: dict, a: str, b: str):
    """The declared line a new stroke runs along, if any.

    A stroke extends a line when both endpoints are pinned to it: either as
    one of its two naming points, as a point of its drawn chain, or through
    an explicit incidence declaration.  Strokes connecting points with no
    shared line stay untagged and never merge into existing lines.
    """
    candidates = []
    for p in (a, b):
        candidates.extend(tuple(pr) for pr in declared.get(p, ()))
    if a in fig.points and b in fig.points:
        chain = fig.line_of(a, b)
        if len(chain) > 2 or tuple(sorted(chain)) in fig.segments:
            candidates.append((chain[0], chain[-1]))

    def pinned(p, u, v):
        if p in (u, v):
            return True
        if (u, v) in (tuple(x) for x in declared.get(p, ())) \
                or (v, u) in (tuple(x) for x in declared.get(p, ())):
            return True
        return (u in fig.points and v in fig.points
                and p in fig.line_of(u, v))

    for (u, v) in candidates:
        if u == v:
            continue
        if pinned(a, u, v) and pinned(b, u, v):
            return (u, v)
    return None


def _recanonicalize(k: Knowledge) -> None:
    """Rebuild canonical keys after the figure changed."""
    old = list(k.facts.items())
    k.facts = {}
    k._by_pred = {}
    remap = {}
    for fact, prov in old:
        nf = _recanon_fact(k, fact)
        remap[fact] = nf
        if nf is None:
            continue
        if nf not in k.facts:
            k.facts[nf] = prov
            k._by_pred.setdefault(nf.pred, []).append(nf)
    # remap premise references
    for fact, prov in list(k.facts.items()):
        if prov.premises:
            newp = tuple(remap.get(p, p) for p in prov.premises)
            newp = tuple(p for p in newp if p is not None)
            k.facts[fact] = Provenance(prov.rule, newp)


def _recanon_fact(k: Knowledge, f: Fact):
    a = f.args
    if f.pred in ("seg_eq", "seg_sum", "midpoint", "between", "collinear",
                  "congruent_tri", "similar_tri"):
        return f
    if f.pred in ("perp", "parallel"):
        l1 = k.line(a[0][0], a[0][1])
        l2 = k.line(a[1][0], a[1][1])
        if l1 == l2:
            return None
        return Fact(f.pred, tuple(sorted((l1, l2))))
    if f.pred == "angle_measure":
        na = k.recanon_angle(a[0])
        return Fact(f.pred, (na,), f.value) if na else None
    if f.pred in ("angle_eq", "supplementary"):
        a1, a2 = k.recanon_angle(a[0]), k.recanon_angle(a[1])
        if a1 is None or a2 is None or (f.pred == "angle_eq" and a1 == a2):
            return None
        return Fact(f.pred, tuple(sorted((a1, a2))))
    if f.pred == "angle_sum":
        xs = [k.recanon_angle(x) for x in a]
        if None in xs:
            return None
        return Fact(f.pred, (*sorted(xs[:2]), xs[2]))
    return f


# -- proofs ---------------------------------------------------------------

@dataclass(frozen=True)
class ProofStep:
    fact: Fact
    rule: str
    premises: tuple  # indices into the step list; -1 for base facts


@dataclass
class Proof:
    steps: list = field(default_factory=list)
    goals: tuple = ()

    def render(self) -> str:
        lines = []
        for i, st in enumerate(self.steps):
            src = st.rule
            if st.premises:
                src += " from " + ", ".join(str(j + 1) for j in st.premises)
            lines.append(f"{i + 1}. {fmt_fact(st.fact)}   [{src}]")
        return "\n".join(lines)


class ProofError(ValueError):
    pass


def get_proof(k: Knowledge) -> Proof:
    """Backward slice from the goal facts through provenance."""
    goals = [g for g in k.goal_facts() if g is not None]
    if not goals or not all(g in k.facts for g in goals):
        raise ProofError("goal not established in knowledge base")
    order: list[Fact] = []
    seen = set()

    def visit(f: Fact):
        if f in seen:
            return
        seen.add(f)
        prov = k.facts[f]
        for p in prov.premises:
            if p in k.facts:
                visit(p)
        order.append(f)

    for g in goals:
        visit(g)
    index = {f: i for i, f in enumerate(order)}
    steps = []
    for f in order:
        prov = k.facts[f]
        prem = tuple(index[p] for p in prov.premises if p in index)
        steps.append(ProofStep(f, prov.rule, prem))
    return Proof(steps, tuple(goals))


def check_proof(proof: Proof, base: Knowledge) -> bool:
    """Replay a proof step by step against the cited rules.

    `base` must hold the figure and the given/constructed facts.  Raises
    ProofError when a step cannot be re-derived.
    """
    from .rules import CATALOG
    rules = {r.id: r for r in CATALOG}
    known: list[Fact] = []
    for i, st in enumerate(proof.steps):
        if st.rule in (GIVEN, FIGURE, CONSTRUCTED):
            if st.fact not in base.facts:
                raise ProofError(f"step {i + 1}: base fact not in knowledge")
        else:
            if st.rule not in rules:
                raise ProofError(f"step {i + 1}: unknown rule {st.rule}")
            scratch = Knowledge(base.fig, base.goal_spec)
            for j in st.premises:
                scratch.add(proof.steps[j].fact, GIVEN)
            derived = {f for f, _ in rules[st.rule].apply(scratch)}
            if st.fact not in derived:
                raise ProofError(
                    f"step {i + 1}: {st.fact} not derivable by {st.rule}")
        known.append(st.fact)
    for g in proof.goals:
        if g not in known:
            raise ProofError("goal missing from proof steps")
    return True
