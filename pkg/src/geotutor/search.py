"""Proof search over auxiliary constructions.

States are figures plus everything currently derivable about them.  The
search expands states by applying synthesized template constructions and is
ordered by (total auxiliary strokes, construction steps), so the first
solution found is the simplest one: fewest new strokes, then fewest
template applications.  Ties fall to straightedge-only constructions and
higher-scoring template matches.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field, replace

from .geom import MalformedFigureError
from .knowledge import (Construction, Knowledge, add_construction, get_proof,
                        reasoning)
from .templates import Match, match_templates, synthesize_constructions

CANDIDATE_CAP = 64             # constructions tried per expanded state
DEFAULT_MAX_DEPTH = 3


@dataclass(frozen=True)
class SolutionStep:
    template_id: str
    template_name: str
    shape: str                  # slot point ids in slot order, e.g. "ACDAED"
    construction: Construction

    def describe(self) -> str:
        return self.construction.description


@dataclass
class SearchResult:
    proved: bool
    steps: tuple = ()           # SolutionStep per construction, in order
    knowledge: Knowledge = None
    proof: object = None
    expanded: int = 0
    elapsed: float = 0.0
    timed_out: bool = False

    @property
    def strokes(self) -> int:
        return sum(s.construction.strokes for s in self.steps)


def _shape(match: Match, construction: Construction) -> str:
    ids = match.bound()
    new_ids = iter(p.id for p in construction.points)
    return "".join(ids[s] or next(new_ids, "?") for s in match.template.slots)


def candidate_constructions(k: Knowledge, cap: int = CANDIDATE_CAP):
    """Ranked (match, construction) pairs for one expansion step.

    Candidates whose added points and ink coincide are merged: the
    best-ranked match supplies the construction, and `realizes` collects
    every template instance the shared construction completes.
    """
    ranked = []
    state_seen = set()
    ink_groups: dict[tuple, list] = {}
    for rank, match in enumerate(match_templates(k, cap=None)):
        if match.complete:
            continue
        for cons in synthesize_constructions(k, match):
            # a construction is identified by its ink and points; every
            # template description of the same ink lands in `realizes`
            ink_key = (tuple(sorted((round(p.x, 6), round(p.y, 6))
                                    for p in cons.points)),
                       cons.figure_key[1])
            ink_groups.setdefault(ink_key, []).append(cons.realizes[0])
            # declared facts distinguish search states: a point defined two
            # ways supports different derivations at the same coordinates
            state_key = (tuple(sorted((round(p.x, 6), round(p.y, 6),
                                       tuple(sorted(p.on_lines, key=repr)),
                                       tuple(sorted(p.facts, key=repr)))
                                      for p in cons.points)),
                         cons.figure_key[1])
            if state_key in state_seen:
                continue
            state_seen.add(state_key)
            ranked.append((cons.strokes, 0 if cons.straightedge else 1,
                           rank, ink_key, match, cons))
    ranked.sort(key=lambda t: t[:3])
    out = []
    for (_, _, _, ink_key, m, c) in ranked[:cap]:
        seen_r = []
        for r in ink_groups[ink_key]:
            if r not in seen_r:
                seen_r.append(r)
        out.append((m, replace(c, realizes=tuple(seen_r))))
    return out


def _state_sig(k: Knowledge):
    """Dedup key for a search state.

    The figure snapshot alone is too coarse: the same point and ink can be
    constructed under different declarations (incidences, asserted metric
    facts), and those differ in what they let the reasoner derive.
    """
    fig = k.fig

    def pc(p):
        pt = fig.points[p]
        return (round(pt.x, 6), round(pt.y, 6))

    def coordize(x):
        if isinstance(x, str) and x in fig.points:
            return pc(x)
        if isinstance(x, tuple):
            return tuple(coordize(e) for e in x)
        return x

    chains = tuple(sorted(tuple(sorted(pc(p) for p in cls))
                          for cls in fig.line_classes()))
    cfacts = tuple(sorted(
        repr((f.pred, coordize(f.args), f.value))
        for f, prov in k.facts.items()
        if getattr(prov, "rule", prov) == "constructed"))
    return (fig.signature(), chains, cfacts)


def prove(k0: Knowledge, max_depth: int = DEFAULT_MAX_DEPTH,
          time_limit: float = None, candidate_cap: int = CANDIDATE_CAP
          ) -> SearchResult:
    """Find the simplest sequence of constructions proving the goal."""
    start = time.monotonic()

    def out_of_time():
        return time_limit is not None and time.monotonic() - start > time_limit

    counter = 0
    # Two kinds of heap entries, ordered by (strokes, depth, tier, seq):
    #   tier 0 -- a state to check: (..., parent knowledge, construction,
    #             path); the child figure is materialized when popped
    #   tier 1 -- a deferred expansion of an already-checked state, keyed by
    #             a lower bound on its children (strokes + 1, depth + 1), so
    #             candidate generation only runs once the budget requires it
    frontier = [(0, 0, 0, counter, k0, None, ())]
    visited = set()
    expanded = 0
    timed_out = False
    while frontier:
        if out_of_time():
            timed_out = True
            break
        strokes, depth, tier, _, parent, cons, path = heapq.heappop(frontier)
        if tier == 1:
            # `parent` is the reasoned knowledge; (strokes, depth) already
            # name the cheapest possible child
            for match, cons2 in candidate_constructions(parent, candidate_cap):
                counter += 1
                step = SolutionStep(match.template.id, match.template.name,
                                    _shape(match, cons2), cons2)
                heapq.heappush(frontier,
                               (max(strokes + cons2.strokes - 1, strokes),
                                depth, 0, counter, parent, cons2,
                                path + (step,)))
            continue
        if cons is None:
            k = parent
        else:
            try:
                k = add_construction(parent, cons)
            except MalformedFigureError:
                continue
        sig = _state_sig(k)
        if sig in visited:
            continue
        visited.add(sig)
        proved, kf = reasoning(k)
        expanded += 1
        if proved:
            return SearchResult(True, path, kf, get_proof(kf), expanded,
                                time.monotonic() - start)
        if depth >= max_depth:
            continue
        counter += 1
        heapq.heappush(frontier,
                       (strokes + 1, depth + 1, 1, counter, kf, None, path))
    return SearchResult(False, (), None, None, expanded,
                        time.monotonic() - start, timed_out)
