"""Independent brute-force oracles the search tests freeze against.

The solution ordering minimizes (auxiliary strokes, template steps)
lexicographically.  Every candidate construction draws at least one new
stroke (asserted below), so a one-step solution using s strokes can only
be beaten by another one-step solution using fewer strokes; multi-step
solutions cost at least as many strokes as steps.  That reduces minimality
checks to exhaustive one-step enumeration.
"""
from geotutor.knowledge import add_construction, reasoning
from geotutor.problemspec import load_problem
from geotutor.search import candidate_constructions


def root_unproved(k):
    """True when the goal needs at least one construction."""
    proved, _ = reasoning(k.copy())
    return not proved


def one_step_solutions(k):
    """Every single construction that completes the proof, with stroke
    counts; also verifies every candidate draws ink."""
    solutions = []
    for match, cons in candidate_constructions(k, cap=None):
        assert cons.strokes >= 1, f"strokeless construction {cons}"
        k2 = add_construction(k, cons)
        proved, _ = reasoning(k2)
        if proved:
            solutions.append((cons.strokes, cons))
    return solutions


def minimal_cost(k, max_steps=2):
    """Brute-force minimum (strokes, steps) over solutions of <= max_steps.

    Returns None when nothing proves within the step budget.  Uses plain
    exhaustive expansion, independent of the search module's ordering
    and dedup heuristics.
    """
    if not root_unproved(k):
        return (0, 0)
    best = None
    frontier = [(0, k)]
    for step in range(1, max_steps + 1):
        nxt = []
        for (strokes, state) in frontier:
            for _, cons in candidate_constructions(state, cap=None):
                cost = (strokes + cons.strokes, step)
                if best is not None and cost >= best:
                    continue
                k2 = add_construction(state, cons)
                proved, _ = reasoning(k2)
                if proved:
                    best = cost if best is None else min(best, cost)
                elif step < max_steps:
                    nxt.append((strokes + cons.strokes, k2))
        frontier = nxt
    return best


def problem_knowledge(path):
    return load_problem(path).knowledge()
