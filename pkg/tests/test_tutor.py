"""Tutoring sessions: snapping, verification, feedback, and backtracking."""
import math

import pytest

from geotutor.geom import Point, ProblemFigure, seg
from geotutor.problemspec import load_problem
from geotutor.tutor import (CHOICE_LIMIT, NoTutoringPlanError, ReplayError,
                            TutorError, TutorSession, replay, snap_stroke,
                            strokes_match_ink)

# pre-test problem 1: extend the midsegment to the far side
SCRIPT_EXTEND_MIDSEGMENT = [
    {"action": "template", "template": "opposite_triangle"},
    {"action": "construct",
     "strokes": [[[0.4, 2.8], [2.9, 0.8]], [[0.4, 2.8], [3.2, 1.4]]]},
    {"action": "template", "template": "opposite_triangle"},
    {"action": "back"},
    {"action": "template", "template": "opposite_triangle"},
    {"action": "construct", "strokes": [[[3.0, 0.0], [4.0, 1.0]]]},
]


def _k(name):
    return load_problem(f"corpus/{name}.json").knowledge()


# -- snapping ---------------------------------------------------------------

def _line_fig():
    fig = ProblemFigure()
    fig.add_point(Point("A", 0.0, 0.0))
    fig.add_point(Point("B", 4.0, 0.0))
    fig.add_segment(seg("A", "B"))
    return fig


def test_snap_endpoints_to_points():
    fig = _line_fig()
    p1, p2 = snap_stroke(fig, ((0.05, -0.08), (2.0, 2.0)), radius=0.2)
    assert p1 == (0.0, 0.0)
    assert p2 == (2.0, 2.0)


def test_snap_aligns_extension_strokes():
    fig = _line_fig()
    # starts at B, runs 2 degrees off the AB direction: snapped flat
    p1, p2 = snap_stroke(fig, ((4.1, 0.0), (6.0, 0.07)), radius=0.2)
    assert p1 == (4.0, 0.0)
    assert math.isclose(p2[1], 0.0, abs_tol=1e-9)
    assert p2[0] > 5.5


def test_snap_keeps_misaligned_strokes():
    fig = _line_fig()
    # 45 degrees off AB: no extension alignment
    p1, p2 = snap_stroke(fig, ((4.0, 0.1), (6.0, 2.0)), radius=0.2)
    assert p1 == (4.0, 0.0)
    assert p2 == (6.0, 2.0)


def test_snap_rejects_degenerate_stroke():
    fig = _line_fig()
    with pytest.raises(TutorError):
        snap_stroke(fig, ((0.0, 0.0), (0.05, 0.05)), radius=0.2)


def test_strokes_match_ink_requires_mutual_cover():
    ink = (((0.0, 0.0), (2.0, 0.0)),)
    assert strokes_match_ink([((-0.1, 0.0), (2.1, 0.02))], ink, 0.1)
    # stroke misses the piece
    assert not strokes_match_ink([((0.0, 1.0), (2.0, 1.0))], ink, 0.1)
    # extra stroke covering nothing
    assert not strokes_match_ink(
        [((0.0, 0.0), (2.0, 0.0)), ((5.0, 5.0), (7.0, 7.0))], ink, 0.1)


# -- scripted sessions -------------------------------------------------------

@pytest.fixture(scope="module")
def extend_session():
    return replay(_k("pre1"), SCRIPT_EXTEND_MIDSEGMENT, seed=3)


def test_scripted_session_history(extend_session):
    s = extend_session
    assert s.history() == "I, W(D), C"
    assert s.phase == "proof_complete"
    assert s.proof().render()


def test_scripted_session_event_shape(extend_session):
    kinds = [e["kind"] for e in extend_session.events]
    assert kinds == [
        "session_started", "choices_offered", "template_selected",
        "construction_accepted", "choices_offered", "template_selected",
        "backtracked", "choices_offered", "template_selected",
        "construction_accepted", "proof_revealed"]
    seqs = [e["seq"] for e in extend_session.events]
    assert seqs == list(range(len(seqs)))


def test_choices_never_exceed_limit(extend_session):
    for e in extend_session.events:
        if e["kind"] == "choices_offered":
            assert 1 <= len(e["templates"]) <= CHOICE_LIMIT


def test_replay_is_deterministic():
    k = _k("pre3")
    probe = TutorSession(k.copy(), seed=7)
    sol_tid = probe.solution[0].template_id
    sol_ink = probe.solution[0].construction.figure_key[1]
    script = [
        {"action": "template", "template": sol_tid},
        {"action": "construct", "strokes": [[[9.0, 9.0], [11.0, 12.0]]]},
        {"action": "construct",
         "strokes": [list(map(list, p)) for p in sol_ink]},
    ]
    logs = [replay(k.copy(), script, seed=7).events for _ in range(5)]
    assert all(log == logs[0] for log in logs[1:])


def test_solution_template_always_offered_on_path():
    s = TutorSession(_k("pre3"), seed=11)
    assert s.on_path
    assert any(c.is_solution for c in s.current_choices)
    assert len(s.current_choices) <= CHOICE_LIMIT


# -- feedback tiers ----------------------------------------------------------

def test_feedback_escalates_to_reveal_on_path():
    s = TutorSession(_k("pre3"), seed=1)
    s.submit_template(s.solution[0].template_id)
    tiers = []
    for i in range(5):
        verdict, fb = s.submit_construction(
            [((10.0 + i, 10.0), (12.0 + i, 13.0))])
        tiers.append(fb.tier)
    assert tiers == ["minimal", "minimal", "highlight", "highlight",
                     "reveal"]
    # the reveal tier performs the construction for the student
    assert s.history() == "M"
    assert s.phase == "proof_complete"


def test_highlight_tier_names_figure_segments():
    s = TutorSession(_k("pre3"), seed=1)
    s.submit_template(s.solution[0].template_id)
    fb = None
    for i in range(3):
        _, fb = s.submit_construction([((10.0 + i, 10.0), (12.0, 13.0))])
    assert fb.tier == "highlight"
    assert fb.highlights
    assert all(pair in s.knowledge.fig.segments for pair in fb.highlights)


def _accept_any_nonsolution(s):
    for choice in s.current_choices:
        tid = choice.template_id
        for _, cons in s._candidates:
            if not any(r[0] == tid for r in cons.realizes):
                continue
            if (s.on_path and cons.figure_key[1]
                    == s.solution[s.depth].construction.figure_key[1]):
                continue
            s.submit_template(tid)
            verdict, _ = s.submit_construction(
                [tuple(map(tuple, p)) for p in cons.figure_key[1]])
            return verdict
    raise AssertionError("no non-solution candidate available")


def test_reveal_suspended_off_path():
    s = TutorSession(_k("pre1"), seed=3, max_depth=3)
    assert _accept_any_nonsolution(s) == "correct"
    assert not s.on_path
    s.submit_template(s.current_choices[0].template_id)
    tiers = []
    for i in range(6):
        _, fb = s.submit_construction([((20.0 + i, 20.0), (25.0, 26.0))])
        tiers.append(fb.tier)
    assert "reveal" not in tiers
    assert tiers[-1] == "highlight"


# -- backtracking ------------------------------------------------------------

def test_depth_exhaustion_backtracks_to_turning_point():
    s = TutorSession(_k("pre1"), seed=3, max_depth=2)
    _accept_any_nonsolution(s)
    assert s.depth == 1 and s.turning_point == 0
    _accept_any_nonsolution(s)      # hits max_depth -> auto backtrack
    assert s.depth == 0
    assert s.phase == "choosing_template"
    assert s.history().endswith("(B)")
    assert any(e["kind"] == "backtracked" and e["mode"] == "auto"
               for e in s.events)


def test_backtrack_restores_previous_knowledge():
    s = TutorSession(_k("pre3"), seed=5)
    before = set(s.knowledge.facts)
    fig_before = s.knowledge.fig.signature()
    _accept_any_nonsolution(s)
    if s.phase == "proof_complete":
        pytest.skip("every candidate proves this problem at depth 1")
    assert set(s.knowledge.facts) != before
    s.backtrack()
    assert set(s.knowledge.facts) == before
    assert s.knowledge.fig.signature() == fig_before
    assert s.depth == 0


def test_backtrack_at_root_is_a_noop():
    s = TutorSession(_k("pre3"), seed=5)
    choices = [c.template_id for c in s.current_choices]
    s.backtrack()
    assert s.depth == 0
    assert s.phase == "choosing_template"
    assert [c.template_id for c in s.current_choices] == choices
    assert any(e["kind"] == "backtracked" and "note" in e
               for e in s.events)


# -- guard rails -------------------------------------------------------------

def test_unprovable_problem_has_no_plan():
    with pytest.raises(NoTutoringPlanError):
        TutorSession(_k("pre3"), max_depth=0)


def test_phase_guards():
    s = TutorSession(_k("pre3"), seed=2)
    with pytest.raises(TutorError):
        s.submit_construction([((0.0, 0.0), (1.0, 1.0))])
    with pytest.raises(TutorError):
        s.submit_template("not_a_template")


def test_state_hides_solution_flags():
    s = TutorSession(_k("pre3"), seed=2)
    state = s.state()
    assert "is_solution" not in repr(state)
    assert "solution" not in state
    assert state["phase"] == "choosing_template"
    assert state["choices"]
    assert state["snap_radius"] > 0


def test_replay_rejects_unknown_action():
    with pytest.raises(ReplayError):
        replay(_k("pre3"), [{"action": "shout"}])
