"""Template catalog and matching over problem figures."""
from geotutor.knowledge import Knowledge
from geotutor.problemspec import load_problem
from geotutor.search import candidate_constructions
from geotutor.templates import (TEMPLATES, TEMPLATES_BY_ID, match_templates,
                                synthesize_constructions)

EXPECTED_IDS = {
    "isosceles_triangle_1", "isosceles_triangle_2", "opposite_triangle",
    "midpoint_connector", "congruent_triangle", "equivalent_area_triangle",
}


def _k(name) -> Knowledge:
    return load_problem(f"corpus/{name}.json").knowledge()


def test_catalog_contents():
    assert {t.id for t in TEMPLATES} == EXPECTED_IDS
    assert len(TEMPLATES_BY_ID) == len(TEMPLATES)
    for t in TEMPLATES:
        assert t.slots, t.id
        assert t.name


def test_matching_is_deterministic():
    k = _k("pre2")
    a = [(m.template.id, tuple(m.bound().items())) for m in match_templates(k)]
    b = [(m.template.id, tuple(m.bound().items())) for m in match_templates(k)]
    assert a == b
    assert a, "no template matches on a solvable problem"


def test_partial_matches_offer_constructions():
    k = _k("pre2")
    partial = [m for m in match_templates(k) if not m.complete
               and m.template.id == "isosceles_triangle_1"]
    assert partial
    constructions = [c for m in partial
                     for c in synthesize_constructions(k, m)]
    assert constructions
    for c in constructions:
        assert c.figure_key[1], "construction without new ink"
        assert c.strokes >= 1
        assert c.realizes[0][0] == "isosceles_triangle_1"


def test_candidates_merge_shared_ink():
    k = _k("pre1")
    cands = candidate_constructions(k, cap=None)
    keys = [(tuple(sorted((round(p.x, 6), round(p.y, 6),
                           tuple(sorted(p.on_lines, key=repr)),
                           tuple(sorted(p.facts, key=repr)))
                          for p in c.points)), c.figure_key[1])
            for _, c in cands]
    assert len(keys) == len(set(keys)), "duplicate search states offered"
    assert any(len(c.realizes) > 1 for _, c in cands), \
        "no construction completes several template instances"


def test_candidate_cap_truncates_ranking():
    k = _k("pre3")
    full = [c.figure_key for _, c in candidate_constructions(k, cap=None)]
    top = [c.figure_key for _, c in candidate_constructions(k, cap=5)]
    assert top == full[:5]
