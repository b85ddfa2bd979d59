"""Interactive tutoring state machine.

A session walks a student through the auxiliary constructions of a stored
solution: at each step it offers up to four template choices (the solution
template always among them while the student is on the solution path), the
student draws strokes, the strokes are snapped and verified against the
chosen template (any valid completion is accepted, not only the stored
one), and feedback escalates over failed attempts.  Departures from the
solution path are tolerated and recoverable through backtracking.

Outcome codes per attempt: W (wrong template, or any attempt made off the
solution path), M (solution construction obtained through the reveal
tier), C (solution construction supplied unaided), I (valid non-solution
construction).  Markers: B = automatic backtrack, D = student pressed the
back button.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .knowledge import Knowledge, add_construction, get_proof, reasoning
from .search import candidate_constructions, prove
from .templates import TEMPLATES_BY_ID

DEFAULT_MAX_DEPTH = 3
CHOICE_LIMIT = 4
SNAP_FRACTION = 0.04           # endpoint snap radius / figure diameter
EXTENSION_TOL_DEG = 5.0        # stroke-to-line alignment for extensions
MINIMAL_TIER_ATTEMPTS = 2      # failed attempts 1-2: minimal feedback
HIGHLIGHT_TIER_ATTEMPTS = 4    # failed attempts 3-4: highlight
                               # failed attempt 5: reveal and perform

HELP_TEXT = {
    "isosceles_triangle_1":
        "Form an isosceles triangle together with the altitude to its "
        "base; the altitude bisects the base and the apex angle.",
    "isosceles_triangle_2":
        "Form an isosceles triangle; its base angles are equal.",
    "opposite_triangle":
        "Form two triangles on opposite sides of a crossing so that the "
        "crossing point bisects both connecting segments.",
    "midpoint_connector":
        "Connect two midpoints of a triangle's sides; the connector is "
        "parallel to the third side and half its length.",
    "congruent_triangle":
        "Build a triangle congruent to an existing one (three pairs of "
        "equal sides).",
    "equivalent_area_triangle":
        "Build a triangle with the same base length and height as an "
        "existing one; the two have equal area.",
}


class TutorError(ValueError):
    """Protocol violation: operation not valid in the current phase."""


class NoTutoringPlanError(ValueError):
    """The problem is valid but not provable within the depth bound."""


@dataclass(frozen=True)
class TemplateChoice:
    template_id: str
    name: str
    help_text: str
    is_solution: bool = False   # hidden from students; never serialized out


@dataclass(frozen=True)
class Feedback:
    tier: str                   # minimal | highlight | reveal
    message: str
    highlights: tuple = ()      # segment id pairs worth another look
    reveal: tuple = ()          # coordinate strokes of the revealed ink


@dataclass
class _Attempt:
    step: int
    template_id: str
    on_path: bool
    is_solution_template: bool
    used_reveal: bool = False
    failed: int = 0
    outcome: str = None
    marker: str = None


# -- stroke snapping (contract shared with the drawing client) ------------

def snap_point(fig, xy, radius):
    """(point id or None, snapped coordinates) for one stroke endpoint."""
    hit = fig.nearest_point(xy[0], xy[1], radius)
    if hit is not None:
        return hit, fig.xy(hit)
    return None, (float(xy[0]), float(xy[1]))


def snap_stroke(fig, stroke, radius=None, ang_tol_deg=EXTENSION_TOL_DEG):
    """Snap a drawn stroke into figure space.

    Endpoints within the snap radius of an existing point take that
    point's exact position.  If exactly one endpoint lands on an existing
    point and the stroke runs within `ang_tol_deg` of a drawn line through
    that point, the free endpoint is projected onto the line, so slightly
    skewed extensions align exactly.
    """
    if radius is None:
        radius = SNAP_FRACTION * fig.diameter()
    (e1, e2) = stroke
    id1, p1 = snap_point(fig, e1, radius)
    id2, p2 = snap_point(fig, e2, radius)
    if math.dist(p1, p2) <= radius:
        raise TutorError("stroke too short to interpret")
    if (id1 is None) != (id2 is None):
        anchor, a_xy, free = (id1, p1, p2) if id1 else (id2, p2, p1)
        best = None
        for line in fig.lines():
            if anchor not in line or len(line) < 2:
                continue
            other = next(p for p in line if p != anchor)
            ux, uy = _unit(fig.xy(anchor), fig.xy(other))
            vx, vy = _unit(a_xy, free)
            dev = math.degrees(math.acos(min(1.0, abs(ux * vx + uy * vy))))
            if dev <= ang_tol_deg and (best is None or dev < best[0]):
                best = (dev, (ux, uy))
        if best is not None:
            ux, uy = best[1]
            t = (free[0] - a_xy[0]) * ux + (free[1] - a_xy[1]) * uy
            free = (a_xy[0] + t * ux, a_xy[1] + t * uy)
        p1, p2 = (a_xy, free) if id1 else (free, a_xy)
    return (p1, p2)


def _unit(a, b):
    d = math.dist(a, b)
    return ((b[0] - a[0]) / d, (b[1] - a[1]) / d)


def _covers(stroke, piece, tol):
    """True when both endpoints of an ink piece lie on the stroke."""
    return all(_point_on(stroke, e, tol) for e in piece)


def _point_on(stroke, p, tol):
    (a, b) = stroke
    foot_t = (((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]))
              / max(math.dist(a, b) ** 2, 1e-12))
    slack = tol / max(math.dist(a, b), 1e-9)
    if foot_t < -slack or foot_t > 1 + slack:
        return False
    foot = (a[0] + foot_t * (b[0] - a[0]), a[1] + foot_t * (b[1] - a[1]))
    return math.dist(p, foot) <= tol


def strokes_match_ink(strokes, ink, tol) -> bool:
    """Snapped strokes realize an ink key iff every ink piece is covered
    by some stroke and every stroke covers at least one piece."""
    if not ink or not strokes:
        return False
    if not all(any(_covers(s, piece, tol) for s in strokes)
               for piece in ink):
        return False
    return all(any(_covers(s, piece, tol) for piece in ink)
               for s in strokes)


# -- the session -----------------------------------------------------------

class TutorSession:
    """One student's interaction with one problem.

    Operations are strictly sequential; events are an append-only log
    from which the whole session can be rebuilt.
    """

    def __init__(self, knowledge: Knowledge, seed: int = 0,
                 max_depth: int = DEFAULT_MAX_DEPTH):
        result = prove(knowledge.copy(), max_depth=max_depth)
        if not result.proved:
            raise NoTutoringPlanError(
                "no tutoring plan: problem not provable within depth "
                f"{max_depth}")
        self.seed = seed
        self.max_depth = max_depth
        self.solution = result.steps
        self.depth = 0
        self.knowledge = knowledge.copy()
        reasoning(self.knowledge)
        self.snapshots = {0: self.knowledge.copy()}
        self.accepted = []          # ink keys of accepted constructions
        self.events = []
        self.attempts: list[_Attempt] = []
        self._choice_epoch = 0
        self._candidates = []
        self.current_choices: list[TemplateChoice] = []
        self._pending = None        # _Attempt in drawing phase
        if not self.solution:
            self.phase = "proof_complete"
            self._log("session_started", note="goal already reachable")
            self._log("proof_revealed")
        else:
            self.phase = "choosing_template"
            self._log("session_started")
            self._refresh_choices()

    # -- bookkeeping -------------------------------------------------

    def _log(self, kind, **detail):
        self.events.append({"seq": len(self.events), "step": self.depth,
                            "kind": kind, **detail})

    @property
    def turning_point(self) -> int:
        for i, ink in enumerate(self.accepted):
            if (i >= len(self.solution)
                    or ink != self.solution[i].construction.figure_key[1]):
                return i
        return self.depth

    @property
    def on_path(self) -> bool:
        return (self.turning_point == self.depth
                and self.depth < len(self.solution))

    def snap_radius(self) -> float:
        return SNAP_FRACTION * self.knowledge.fig.diameter()

    # -- choices -------------------------------------------------------

    def _refresh_choices(self):
        """Regenerate template choices; auto-backtrack on empty."""
        while True:
            choices = self._generate_choices()
            if choices:
                self.current_choices = choices
                self.phase = "choosing_template"
                self._log("choices_offered",
                          templates=[c.template_id for c in choices])
                return
            if self.depth == 0:
                raise TutorError("no template choices at the root")
            self._auto_backtrack()

    def _generate_choices(self) -> list[TemplateChoice]:
        # uncapped: choices come from the top ranks anyway, and
        # verification must accept any valid completion, not only the
        # search engine's favourites
        self._candidates = candidate_constructions(self.knowledge,
                                                   cap=None)
        ids = []
        for match, cons in self._candidates:
            if match.template.id not in ids:
                ids.append(match.template.id)
        sol_tid = None
        if self.on_path:
            step = self.solution[self.depth]
            sol_tid = step.template_id
            sol_ink = step.construction.figure_key[1]
            # the ranked candidate pool is capped; make sure the stored
            # solution construction itself is always verifiable
            if not any(c.figure_key[1] == sol_ink
                       and any(r[0] == sol_tid for r in c.realizes)
                       for _, c in self._candidates):
                self._candidates.append((None, step.construction))
        if sol_tid is not None and sol_tid not in ids:
            ids.append(sol_tid)
        if len(ids) > CHOICE_LIMIT:
            kept = ids[:CHOICE_LIMIT]
            if sol_tid is not None and sol_tid not in kept:
                kept[-1] = sol_tid
            ids = kept
        rng = random.Random(f"{self.seed}:{self._choice_epoch}")
        self._choice_epoch += 1
        rng.shuffle(ids)
        return [TemplateChoice(tid, TEMPLATES_BY_ID[tid].name,
                               HELP_TEXT.get(tid, ""),
                               is_solution=(tid == sol_tid))
                for tid in ids]

    # -- operations ------------------------------------------------------

    def submit_template(self, template_id: str):
        if self.phase != "choosing_template":
            raise TutorError(f"cannot select a template in phase "
                             f"{self.phase}")
        if template_id not in [c.template_id for c in self.current_choices]:
            raise TutorError(f"template {template_id!r} was not offered")
        self._pending = _Attempt(
            step=self.depth, template_id=template_id, on_path=self.on_path,
            is_solution_template=(
                self.on_path
                and template_id == self.solution[self.depth].template_id))
        self.phase = "drawing_construction"
        self._log("template_selected", template=template_id)

    def submit_construction(self, strokes):
        """Verify drawn strokes; returns ('correct', None) or
        ('incorrect', Feedback)."""
        if self.phase != "drawing_construction":
            raise TutorError(f"cannot submit a construction in phase "
                             f"{self.phase}")
        if not strokes:
            raise TutorError("no strokes drawn")
        tol = self.snap_radius()
        snapped = [snap_stroke(self.knowledge.fig, s, tol) for s in strokes]
        cons = self._matching_candidate(snapped, tol)
        if cons is not None:
            self._accept(cons)
            return "correct", None
        self._pending.failed += 1
        fb = self._feedback()
        self._log("feedback_given", tier=fb.tier,
                  attempt=self._pending.failed)
        if fb.tier == "reveal":
            self._pending.used_reveal = True
            revealed = self._reveal_candidate()
            self._accept(revealed)
        return "incorrect", fb

    def _matching_candidate(self, snapped, tol):
        """The candidate construction the snapped strokes realize.

        The same ink can define its new points in several ways (e.g. a
        point erected by a perpendicular versus the intersection of two
        extended lines); the definition with the most declared incidences
        is applied, and the stored solution's definition wins outright
        when the strokes draw the solution ink on the solution path.
        """
        tid = self._pending.template_id
        hits = [cons for match, cons in self._candidates
                if any(r[0] == tid for r in cons.realizes)
                and strokes_match_ink(snapped, cons.figure_key[1], tol)]
        if not hits:
            return None
        if self._pending.on_path:
            sol = self.solution[self._pending.step].construction
            if any(c.figure_key == sol.figure_key for c in hits):
                return next(c for c in hits
                            if c.figure_key == sol.figure_key)
        return max(hits, key=lambda c: sum(len(p.on_lines) + len(p.facts)
                                           for p in c.points))

    def _reveal_candidate(self):
        if (self._pending.is_solution_template
                and self._pending.on_path):
            return self.solution[self.depth].construction
        tid = self._pending.template_id
        for match, cons in self._candidates:
            if any(r[0] == tid for r in cons.realizes):
                return cons
        raise TutorError(f"no construction available for {tid!r}")

    def _accept(self, cons):
        att = self._pending
        self._pending = None
        sol_ink = (self.solution[att.step].construction.figure_key[1]
                   if att.on_path else None)
        is_sol = att.on_path and cons.figure_key[1] == sol_ink
        if is_sol:
            att.outcome = "M" if att.used_reveal else "C"
        elif not att.on_path or not att.is_solution_template:
            att.outcome = "W"
        else:
            att.outcome = "I"
        self.attempts.append(att)
        self._log("construction_accepted", outcome=att.outcome,
                  description=cons.description,
                  ink=[list(map(list, piece))
                       for piece in cons.figure_key[1]])
        self.knowledge = add_construction(self.knowledge, cons)
        proved, self.knowledge = reasoning(self.knowledge)
        self.accepted.append(cons.figure_key[1])
        self.depth += 1
        self.snapshots[self.depth] = self.knowledge.copy()
        if proved:
            self.phase = "proof_complete"
            self._log("proof_revealed")
            return
        if self.depth >= self.max_depth:
            self._auto_backtrack()
        self._refresh_choices()

    def _auto_backtrack(self):
        target = self.turning_point
        if self.attempts:
            self.attempts[-1].marker = "B"
        self._restore(target)
        self._log("backtracked", mode="auto")

    def backtrack(self):
        """Student pressed the back button."""
        if self.phase == "proof_complete":
            raise TutorError("session already complete")
        if self.phase == "drawing_construction":
            att = self._pending
            self._pending = None
            att.outcome = "W"
            att.marker = "D"
            self.attempts.append(att)
        elif self.attempts:
            self.attempts[-1].marker = "D"
        if self.depth == 0 and self.phase == "choosing_template":
            self._log("backtracked", mode="user", note="nothing to undo")
            return
        self._restore(max(self.depth - 1, 0))
        self._log("backtracked", mode="user")
        self._refresh_choices()

    def _restore(self, target: int):
        self.knowledge = self.snapshots[target].copy()
        self.snapshots = {d: k for d, k in self.snapshots.items()
                          if d <= target}
        self.accepted = self.accepted[:target]
        self.depth = target
        self._pending = None

    # -- feedback ----------------------------------------------------------

    def _feedback(self) -> Feedback:
        n = self._pending.failed
        if n <= MINIMAL_TIER_ATTEMPTS:
            return Feedback("minimal", "Not quite - try again.")
        reveal_ok = self._pending.on_path
        if n <= HIGHLIGHT_TIER_ATTEMPTS or not reveal_ok:
            return Feedback(
                "highlight",
                "Look at the highlighted segments: the template must be "
                "completed around them.",
                highlights=self._highlight_segments())
        cons = self._reveal_candidate()
        return Feedback(
            "reveal",
            f"Here is one way: {cons.description}. Drawing it for you.",
            reveal=tuple(cons.figure_key[1]))

    def _highlight_segments(self):
        tid = self._pending.template_id
        for match, cons in self._candidates:
            if any(r[0] == tid for r in cons.realizes):
                if match is not None:
                    bound = [p for _, p in match.binding if p]
                else:
                    bound = [p for p in cons.shape
                             if p in self.knowledge.fig.points]
                fig = self.knowledge.fig
                return tuple(s for s in sorted(fig.segments)
                             if s[0] in bound and s[1] in bound)
        return ()

    # -- exports -----------------------------------------------------------

    def history(self) -> str:
        """Coded attempt history, e.g. 'I, W(D), C'."""
        parts = []
        for att in self.attempts:
            code = att.outcome or "?"
            if att.marker:
                code += f"({att.marker})"
            parts.append(code)
        return ", ".join(parts)

    def proof(self):
        if self.phase != "proof_complete":
            raise TutorError("proof not yet earned")
        return get_proof(self.knowledge)

    def state(self) -> dict:
        """Public view of the session; never exposes solution secrets."""
        fig = self.knowledge.fig
        return {
            "phase": self.phase,
            "depth": self.depth,
            "max_depth": self.max_depth,
            "history": self.history(),
            "choices": [{"template_id": c.template_id, "name": c.name,
                         "help_text": c.help_text}
                        for c in self.current_choices]
            if self.phase == "choosing_template" else [],
            "figure": {
                "points": {pid: [fig.points[pid].x, fig.points[pid].y]
                           for pid in sorted(fig.points)},
                "segments": [list(s) for s in sorted(
                    (min(s.a, s.b), max(s.a, s.b), s.kind)
                    for s in fig.segments.values())],
            },
            "snap_radius": self.snap_radius(),
        }


# -- scripted replay ---------------------------------------------------------

class ReplayError(ValueError):
    def __init__(self, step, message):
        super().__init__(f"script step {step}: {message}")
        self.step = step


def replay(knowledge: Knowledge, script, seed: int = 0,
           max_depth: int = DEFAULT_MAX_DEPTH) -> TutorSession:
    """Drive a session headlessly from a script.

    Script actions: {"action": "template", "template": id},
    {"action": "construct", "strokes": [[[x,y],[x,y]], ...]},
    {"action": "back"}.
    """
    session = TutorSession(knowledge, seed=seed, max_depth=max_depth)
    for i, step in enumerate(script):
        if session.phase == "proof_complete":
            raise ReplayError(i, "session already complete")
        act = step.get("action")
        try:
            if act == "template":
                session.submit_template(step["template"])
            elif act == "construct":
                session.submit_construction(
                    [tuple(map(tuple, s)) for s in step["strokes"]])
            elif act == "back":
                session.backtrack()
            else:
                raise ReplayError(i, f"unknown action {act!r}")
        except TutorError as exc:
            raise ReplayError(i, str(exc)) from exc
    return session
