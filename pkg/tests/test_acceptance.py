"""End-to-end acceptance gate.

One test (or small group) per shipping criterion:

1. the whole evaluation corpus proves, fast, through the CLI;
2. first construction steps match the catalogued options;
3. returned solutions are cost-minimal against a brute-force oracle;
4. the rule catalog is numerically sound and proofs re-check;
5. rendered figures digitize back isomorphically with perfect
   constraint precision;
6. scripted tutoring sessions reproduce the canonical transcripts;
7. choice lists stay bounded and never dead-end;
8. the HTTP service journals every session and survives restarts.

The web client's snap/display parity (the remaining shipping criterion)
is covered by the frontend's own test suite.
"""
import json
import os
import random
from collections import Counter

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from geotutor.cli import first_step_matches, main
from geotutor.knowledge import check_proof, fact_holds
from geotutor.problemspec import load_problem
from geotutor.rules import CATALOG
from geotutor.search import prove
from geotutor.service import create_app
from geotutor.tutor import CHOICE_LIMIT, TutorSession, replay

from _oracles import one_step_solutions, problem_knowledge, root_unproved
from test_detect import MIN_ISOMORPHIC, _round_trip
from test_rules import MIN_INSTANTIATIONS, SOUNDNESS_REL_TOL, _instantiate
from test_service import _ops
from test_tutor import SCRIPT_EXTEND_MIDSEGMENT, _accept_any_nonsolution

CORPUS_TIME_BUDGET_S = 120.0
PRETESTS = ("pre1", "pre2", "pre3")


def _manifest():
    with open("corpus/manifest.json") as fh:
        return json.load(fh)["problems"]


@pytest.fixture(scope="module")
def corpus_results():
    """One in-process prove per corpus problem, shared by criteria 2-4."""
    out = {}
    for entry in _manifest():
        name = entry["file"][:-5]
        problem = load_problem(os.path.join("corpus", entry["file"]))
        out[name] = (problem, entry,
                     prove(problem.knowledge(),
                           max_depth=entry["max_depth"]))
    return out


# -- 1: corpus through the CLI ------------------------------------------------

def test_corpus_cli_proves_everything_in_budget():
    r = CliRunner().invoke(main, ("corpus", "corpus/manifest.json",
                                  "--json"))
    assert r.exit_code == 0, r.output
    report = json.loads(r.output)
    assert report["passed"] == report["of"] == 6
    assert report["total_elapsed_s"] < CORPUS_TIME_BUDGET_S


# -- 2: first steps match the catalogued options ------------------------------

def test_first_steps_match_catalogued_options(corpus_results):
    for name, (problem, entry, result) in corpus_results.items():
        assert result.proved, name
        expect = entry["expect"]
        assert len(result.steps) == expect["steps"], name
        assert any(first_step_matches(result, opt)
                   for opt in expect["options"]), \
            f"{name}: first step matches no catalogued option"


def test_two_step_problem_needs_both_steps(corpus_results):
    _, entry, result = corpus_results["post2"]
    assert entry["expect"]["steps"] == len(result.steps) == 2


# -- 3: minimality against a brute-force oracle -------------------------------

@pytest.fixture(scope="module")
def oracle_minima():
    """Exhaustive one-step enumeration per pretest problem.

    Every candidate construction draws at least one stroke (asserted by
    the oracle), so a k-step solution costs at least (k, k) and the best
    one-step solution, costing at most (2, 1) here, is the global
    (strokes, steps) lexicographic minimum.
    """
    out = {}
    for name in PRETESTS:
        k = problem_knowledge(f"corpus/{name}.json")
        assert root_unproved(k), name
        sols = one_step_solutions(k)
        best = min(s for s, _ in sols)
        assert best <= 2, name
        winners = [cons for s, cons in sols if s == best]
        out[name] = (best, winners)
    return out


def test_solutions_are_cost_minimal(corpus_results, oracle_minima):
    for name in PRETESTS:
        _, _, result = corpus_results[name]
        best, _ = oracle_minima[name]
        got = (sum(s.construction.strokes for s in result.steps),
               len(result.steps))
        assert got == (best, 1), name


def test_unique_minimum_is_matched_exactly(corpus_results, oracle_minima):
    for name in PRETESTS:
        best, winners = oracle_minima[name]
        if len(winners) != 1:
            continue  # several equally simple solutions; any is acceptable
        _, _, result = corpus_results[name]
        assert result.steps[0].construction.figure_key[1] \
            == winners[0].figure_key[1], name


def test_extend_to_far_side_is_uniquely_simplest(oracle_minima):
    # the one-stroke extension beats every two-stroke alternative
    best, winners = oracle_minima["pre1"]
    assert best == 1 and len(winners) == 1


# -- 4: rule soundness and proof re-checking ----------------------------------

def test_axiom_rules_hold_on_random_instances():
    instances = []
    for seed in range(100):
        instances.extend(_instantiate(seed))
    bad = [(rule, fact) for (rule, fact, fig) in instances
           if not fact_holds(fig, fact, SOUNDNESS_REL_TOL)]
    assert not bad, bad[:5]
    counts = Counter(rule for (rule, _, _) in instances)
    assert all(counts.get(r.id, 0) >= MIN_INSTANTIATIONS for r in CATALOG)


def test_corpus_proofs_recheck(corpus_results):
    for name, (problem, _, result) in corpus_results.items():
        base = problem.knowledge()
        for step in result.steps:
            from geotutor.knowledge import add_construction
            base = add_construction(base, step.construction)
        assert check_proof(result.proof, base), name


# -- 5: detection round trip ---------------------------------------------------

def test_detection_round_trip_corpus():
    results = [_round_trip(seed) for seed in range(50)]
    good = [r for r in results if r[3] is not None]
    assert len(good) >= MIN_ISOMORPHIC
    from test_detect import _canon, _mapped_candidates
    for (_, intended, draft, mapping) in good:
        assert _mapped_candidates(draft, mapping) <= _canon(intended)


# -- 6: canonical tutoring transcripts ----------------------------------------

def test_canonical_session_transcript():
    k = problem_knowledge("corpus/pre1.json")
    logs = []
    for _ in range(5):
        s = replay(k.copy(), SCRIPT_EXTEND_MIDSEGMENT, seed=3)
        assert s.history() == "I, W(D), C"
        assert s.phase == "proof_complete"
        logs.append(json.dumps(s.events, sort_keys=True))
    assert len(set(logs)) == 1, "session replay is nondeterministic"


def test_depth_exhaustion_backtracks_with_marker():
    s = TutorSession(problem_knowledge("corpus/pre1.json"), seed=3,
                     max_depth=2)
    _accept_any_nonsolution(s)
    assert s.turning_point == 0
    _accept_any_nonsolution(s)
    assert s.depth == s.turning_point == 0
    assert s.history().endswith("(B)")


def test_solution_template_offered_at_every_on_path_choice():
    k = problem_knowledge("corpus/post2.json")
    s = TutorSession(k, seed=9)
    for step in s.solution:
        assert s.on_path
        assert any(c.is_solution for c in s.current_choices)
        s.submit_template(step.template_id)
        verdict, _ = s.submit_construction(
            [tuple(map(tuple, p)) for p in step.construction.figure_key[1]])
        assert verdict == "correct"
    assert s.phase == "proof_complete"


# -- 7: bounded, never-empty choices ------------------------------------------

def test_choices_bounded_and_never_empty():
    k = problem_knowledge("corpus/pre1.json")
    s = TutorSession(k, seed=3, max_depth=2)
    for _ in range(3):
        for e in s.events:
            if e["kind"] == "choices_offered":
                assert 1 <= len(e["templates"]) <= CHOICE_LIMIT
        _accept_any_nonsolution(s)
        if s.phase == "proof_complete":
            break


def test_empty_choice_list_triggers_backtrack(monkeypatch):
    s = TutorSession(problem_knowledge("corpus/pre1.json"), seed=3)
    _accept_any_nonsolution(s)
    assert s.depth == 1
    original = type(s)._generate_choices
    calls = {"n": 0}

    def starved(self):
        calls["n"] += 1
        return [] if calls["n"] == 1 else original(self)

    monkeypatch.setattr(type(s), "_generate_choices", starved)
    s._refresh_choices()
    assert s.depth == 0, "empty choices must back the session up"
    assert any(e["kind"] == "backtracked" and e["mode"] == "auto"
               for e in s.events)


# -- 8: journaled service survives restarts -----------------------------------

def test_service_log_matches_library_and_survives_restart(tmp_path):
    with open("corpus/pre3.json") as fh:
        spec = json.load(fh)
    probe = TutorSession(problem_knowledge("corpus/pre3.json"), seed=7)
    step = probe.solution[0]
    ops = _ops((step.template_id,
                [list(map(list, p)) for p in step.construction.figure_key[1]]))

    ref = TestClient(create_app(data_dir=str(tmp_path / "ref"), max_depth=3))
    sid = ref.post("/v1/sessions",
                   json={"problem": spec, "seed": 7}).json()["session_id"]
    for op, body in ops:
        url = f"/v1/sessions/{sid}/{op}"
        r = ref.post(url, json=body) if body is not None else ref.post(url)
        assert r.status_code == 200
    want = ref.get(f"/v1/sessions/{sid}/log").json()

    script = [{"action": {"template": "template", "construction": "construct",
                          "backtrack": "back"}[op],
               **({"template": body["template_id"]} if op == "template" else
                  {"strokes": body["strokes"]} if op == "construction"
                  else {})}
              for op, body in ops]
    session = replay(problem_knowledge("corpus/pre3.json"), script,
                     seed=7, max_depth=3)
    assert json.dumps(want["events"], sort_keys=True) \
        == json.dumps(session.events, sort_keys=True)

    rng = random.Random(1)
    for i in range(20):
        cut = rng.randint(0, len(ops))
        data = str(tmp_path / f"kill{i}")
        a = TestClient(create_app(data_dir=data, max_depth=3))
        sid = a.post("/v1/sessions",
                     json={"problem": spec, "seed": 7}).json()["session_id"]
        for op, body in ops[:cut]:
            url = f"/v1/sessions/{sid}/{op}"
            (a.post(url, json=body) if body is not None else a.post(url))
        b = TestClient(create_app(data_dir=data, max_depth=3))
        for op, body in ops[cut:]:
            url = f"/v1/sessions/{sid}/{op}"
            r = b.post(url, json=body) if body is not None else b.post(url)
            assert r.status_code == 200
        assert b.get(f"/v1/sessions/{sid}/log").json() == want, f"cut {cut}"
