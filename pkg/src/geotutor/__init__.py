"""Interactive geometry tutor for auxiliary constructions.

Pipeline: figures (geom) carry facts (facts, knowledge) derived by axiom
rules (rules); template matching (templates) proposes auxiliary
constructions searched for a proof (search); raster figures digitize into
problem specs (detect, render, problemspec); tutoring sessions walk a
student through the constructions (tutor) over HTTP (service, cli).
"""
from .facts import Fact
from .geom import Point, ProblemFigure, Segment, seg
from .knowledge import (Construction, Knowledge, NewPoint, Proof,
                        add_construction, check_proof, get_proof, reasoning)
from .problemspec import Problem, ProblemError, load_problem, parse_problem
from .search import SearchResult, SolutionStep, candidate_constructions, \
    prove
from .templates import TEMPLATES, TEMPLATES_BY_ID, Template, match_templates
from .tutor import (NoTutoringPlanError, TutorError, TutorSession, replay,
                    snap_stroke)

__version__ = "0.1.0"

__all__ = [
    "Construction", "Fact", "Knowledge", "NewPoint", "Point", "Problem",
    "ProblemError", "ProblemFigure", "Proof", "SearchResult", "Segment",
    "SolutionStep", "TEMPLATES", "TEMPLATES_BY_ID", "Template",
    "TutorError", "TutorSession", "NoTutoringPlanError",
    "add_construction", "candidate_constructions", "check_proof",
    "get_proof", "load_problem", "match_templates", "parse_problem",
    "prove", "reasoning", "replay", "seg", "snap_stroke",
]
