"""Proof search: solutions found, ordered by cost, deterministically."""
from geotutor.cli import first_step_matches
from geotutor.problemspec import load_problem
from geotutor.search import prove

from _oracles import one_step_solutions, problem_knowledge, root_unproved


def test_warmup_needs_no_construction():
    k = problem_knowledge("corpus/iso_warmup.json")
    assert not root_unproved(k)
    result = prove(k)
    assert result.proved
    assert result.steps == ()
    assert result.proof is not None


def test_pre3_solution_is_minimal():
    k = problem_knowledge("corpus/pre3.json")
    assert root_unproved(k)
    result = prove(k)
    assert result.proved
    assert len(result.steps) == 1
    got = result.steps[0].construction.strokes
    best = min(s for s, _ in one_step_solutions(k))
    assert got == best == 1


def test_pre3_first_step_is_a_known_option():
    entry = next(e for e in _manifest() if e["file"] == "pre3.json")
    result = prove(problem_knowledge("corpus/pre3.json"))
    assert any(first_step_matches(result, opt)
               for opt in entry["expect"]["options"])


def test_prove_is_deterministic():
    runs = []
    for _ in range(2):
        result = prove(problem_knowledge("corpus/pre3.json"))
        runs.append([(s.template_id, s.shape, s.construction.figure_key)
                     for s in result.steps])
    assert runs[0] == runs[1]


def test_prove_respects_depth_budget():
    k = problem_knowledge("corpus/pre3.json")
    assert not prove(k, max_depth=0).proved
    assert prove(k, max_depth=1).proved


def test_proof_lines_render():
    result = prove(problem_knowledge("corpus/pre3.json"))
    text = result.proof.render()
    lines = text.strip().splitlines()
    assert len(lines) >= 3
    assert lines[0].startswith("1.")


def _manifest():
    import json
    with open("corpus/manifest.json") as fh:
        return json.load(fh)["problems"]
