"""Problem file parsing: validation messages and numeric consistency."""
import json

import pytest

from geotutor.knowledge import fact_holds
from geotutor.problemspec import (NUMERIC_TOL, ProblemError, load_problem,
                                  parse_problem)

VALID = {
    "name": "t",
    "points": {"A": [0.0, 0.0], "B": [4.0, 0.0], "C": [2.0, 3.0]},
    "segments": [["A", "B"], ["B", "C"], ["A", "C"]],
    "constraints": [{"kind": "seg_eq", "args": [["A", "C"], ["B", "C"]]}],
    "goal": [{"kind": "angle_eq",
              "args": [["A", "B", "C"], ["B", "A", "C"]]}],
}


def test_valid_problem_parses():
    p = parse_problem(VALID)
    assert set(p.figure.points) == {"A", "B", "C"}
    assert len(p.givens) == 1
    assert len(p.goal) == 1


def test_givens_are_checked_numerically():
    bad = json.loads(json.dumps(VALID))
    bad["points"]["C"] = [1.0, 3.0]  # no longer isosceles
    with pytest.raises(ProblemError) as exc:
        parse_problem(bad)
    assert any("seg_eq" in e for e in exc.value.errors)


def test_unknown_point_reported():
    bad = json.loads(json.dumps(VALID))
    bad["constraints"] = [{"kind": "seg_eq", "args": [["A", "Z"], ["B", "C"]]}]
    with pytest.raises(ProblemError) as exc:
        parse_problem(bad)
    assert any("Z" in e for e in exc.value.errors)


def test_unknown_kind_reported():
    bad = json.loads(json.dumps(VALID))
    bad["constraints"] = [{"kind": "rhombus", "args": []}]
    with pytest.raises(ProblemError) as exc:
        parse_problem(bad)
    assert any("rhombus" in e for e in exc.value.errors)


def test_all_errors_collected_at_once():
    bad = json.loads(json.dumps(VALID))
    bad["constraints"] = [
        {"kind": "rhombus", "args": []},
        {"kind": "seg_eq", "args": [["A", "Z"], ["B", "C"]]},
    ]
    with pytest.raises(ProblemError) as exc:
        parse_problem(bad)
    assert len(exc.value.errors) >= 2


def test_angle_measure_needs_degrees():
    bad = json.loads(json.dumps(VALID))
    bad["constraints"] = [{"kind": "angle_measure",
                           "args": [["B", "A", "C"]]}]
    with pytest.raises(ProblemError) as exc:
        parse_problem(bad)
    assert any("degrees" in e for e in exc.value.errors)


@pytest.mark.parametrize("name", ["pre1", "pre2", "pre3", "post1", "post2",
                                  "post3", "iso_warmup", "broken_chord"])
def test_corpus_files_are_consistent(name):
    p = load_problem(f"corpus/{name}.json")
    k = p.knowledge()
    for fact in k.facts:
        assert fact_holds(k.fig, fact, rel_tol=NUMERIC_TOL), (name, fact)
    for (pred, args, value) in p.goal:
        assert pred
