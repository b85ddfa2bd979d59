"""Command-line entry points: prove, digitize, corpus, replay, serve.

Exit codes: 0 success, 1 input error, 2 unprovable, 3 detection failure.
"""
from __future__ import annotations

import json
import sys
import time

import click

from .problemspec import ProblemError, load_problem
from .search import prove
from .tutor import DEFAULT_MAX_DEPTH, ReplayError, replay

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNPROVABLE = 2
EXIT_DETECTION = 3


@click.group()
def main():
    """Geometry tutor for auxiliary constructions."""


# -- prove --------------------------------------------------------------

@main.command("prove")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-depth", default=DEFAULT_MAX_DEPTH, show_default=True)
@click.option("--emit", type=click.Choice(["text", "structured"]),
              default="text", show_default=True)
def cmd_prove(file, max_depth, emit):
    """Prove one problem; print the construction trace and proof."""
    try:
        problem = load_problem(file)
    except (ProblemError, OSError, json.JSONDecodeError) as exc:
        _fail_input(exc)
    result = prove(problem.knowledge(), max_depth=max_depth)
    if not result.proved:
        click.echo(f"unprovable within depth {max_depth} "
                   f"(expanded {result.expanded} states, "
                   f"{result.elapsed:.1f}s)", err=True)
        sys.exit(EXIT_UNPROVABLE)
    if emit == "structured":
        click.echo(json.dumps(_structured(problem, result), indent=2,
                              sort_keys=True))
    else:
        if not result.steps:
            click.echo("no auxiliary construction needed")
        for i, step in enumerate(result.steps):
            click.echo(f"step {i + 1}: {step.describe()}")
        click.echo("")
        click.echo(result.proof.render())
    sys.exit(EXIT_OK)


def _structured(problem, result) -> dict:
    return {
        "problem": problem.name,
        "proved": True,
        "strokes": result.strokes,
        "elapsed_s": round(result.elapsed, 3),
        "steps": [{
            "template": s.template_id,
            "shape": s.shape,
            "description": s.construction.description,
            "strokes": s.construction.strokes,
            "new_points": [{
                "id": p.id, "x": p.x, "y": p.y, "kind": p.kind,
                "on_lines": [list(l) for l in p.on_lines],
            } for p in s.construction.points],
            "realizes": [list(r) for r in s.construction.realizes],
        } for s in result.steps],
        "proof": result.proof.render().splitlines(),
    }


# -- digitize ------------------------------------------------------------

@main.command("digitize")
@click.argument("image", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False),
              help="write the draft spec to this file instead of stdout")
@click.option("--debug-overlay", type=click.Path(dir_okay=False),
              help="write an SVG overlay of the recovered figure")
def cmd_digitize(image, out, debug_overlay):
    """Digitize a raster figure into a draft problem spec."""
    import numpy as np
    from PIL import Image, UnidentifiedImageError

    from .detect import FigureTooSparseError, digitize
    try:
        img = np.asarray(Image.open(image).convert("L"))
    except (UnidentifiedImageError, OSError) as exc:
        _fail_input(exc)
    try:
        draft = digitize(img)
    except FigureTooSparseError as exc:
        click.echo(f"detection failed: {exc}", err=True)
        sys.exit(EXIT_DETECTION)
    payload = json.dumps(draft.to_json(), indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(payload + "\n")
    else:
        click.echo(payload)
    if debug_overlay:
        from .render import overlay_svg
        fig = draft.figure
        px = draft.pixel_points
        lines = [(px[a], px[b]) for (a, b) in sorted(fig.segments)]
        with open(debug_overlay, "w") as fh:
            fh.write(overlay_svg(img.shape[1], img.shape[0], lines,
                                 sorted(px.items())))
    sys.exit(EXIT_OK)


# -- corpus ---------------------------------------------------------------

def first_step_matches(result, option) -> bool:
    """Does the first trace step realize a listed construction option?

    Options name a template, a stroke count, and per new point the drawn
    lines it lies on (pairs of base point ids) plus optional numeric
    length equalities ('@' stands for the new point).  Lines are compared
    as chains of the final figure, so relabeled descriptions of the same
    line agree.
    """
    cons = result.steps[0].construction
    if option["template"] not in {r[0] for r in cons.realizes}:
        return False
    if cons.strokes != option["strokes"]:
        return False
    fig = result.knowledge.fig

    def chain(pair):
        try:
            return tuple(sorted(fig.line_of(pair[0], pair[1])))
        except Exception:
            return tuple(sorted(pair))

    expected = list(option.get("new_points", []))
    points = list(cons.points)
    if len(expected) > len(points):
        return False

    def point_matches(np_, exp):
        want = {chain(l) for l in exp.get("on_lines", [])}
        have = {chain(l) for l in np_.on_lines}
        if not want <= have:
            return False
        for (s1, s2) in exp.get("dist_eq", []):
            d = [fig.dist(*[np_.id if q == "@" else q for q in s])
                 for s in (s1, s2)]
            if abs(d[0] - d[1]) > 1e-6 * max(d[0], d[1], 1.0):
                return False
        return True

    def assign(exp_rest, avail):
        if not exp_rest:
            return True
        head, *tail = exp_rest
        return any(point_matches(p, head)
                   and assign(tail, [q for q in avail if q is not p])
                   for p in avail)

    return assign(expected, points)


@main.command("corpus")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True,
              help="machine-readable report")
@click.option("--max-depth", default=None, type=int,
              help="override every problem's depth bound")
def cmd_corpus(manifest, as_json, max_depth):
    """Prove every corpus problem and check it against expectations."""
    import os
    try:
        with open(manifest) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail_input(exc)
    base = os.path.dirname(os.path.abspath(manifest))
    rows = []
    total = time.perf_counter()
    for entry in data["problems"]:
        path = os.path.join(base, entry["file"])
        depth = max_depth if max_depth is not None else entry["max_depth"]
        problem = load_problem(path)
        result = prove(problem.knowledge(), max_depth=depth)
        expect = entry.get("expect", {})
        ok = result.proved
        reasons = []
        if not result.proved:
            reasons.append("unprovable")
        if ok and "steps" in expect and len(result.steps) != expect["steps"]:
            ok = False
            reasons.append(f"steps {len(result.steps)} != "
                           f"{expect['steps']}")
        if ok and expect.get("options") and result.steps:
            if not any(first_step_matches(result, o)
                       for o in expect["options"]):
                ok = False
                reasons.append("first step matches no listed option")
        rows.append({
            "problem": problem.name,
            "proved": result.proved,
            "steps": len(result.steps),
            "strokes": result.strokes,
            "elapsed_s": round(result.elapsed, 2),
            "pass": ok,
            "reasons": reasons,
        })
    total = time.perf_counter() - total
    passed = sum(r["pass"] for r in rows)
    report = {"rows": rows, "passed": passed, "of": len(rows),
              "total_elapsed_s": round(total, 2)}
    if as_json:
        click.echo(json.dumps(report, indent=2, sort_keys=True))
    else:
        for r in rows:
            mark = "PASS" if r["pass"] else "FAIL"
            extra = f"  ({'; '.join(r['reasons'])})" if r["reasons"] else ""
            click.echo(f"{mark}  {r['problem']:<14} steps={r['steps']} "
                       f"strokes={r['strokes']} {r['elapsed_s']:7.2f}s"
                       f"{extra}")
        click.echo(f"{passed}/{len(rows)} passed in {total:.1f}s")
    sys.exit(EXIT_OK if passed == len(rows) else EXIT_UNPROVABLE)


# -- replay ------------------------------------------------------------

@main.command("replay")
@click.argument("problem", type=click.Path(exists=True, dir_okay=False))
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", default=0, show_default=True)
@click.option("--max-depth", default=DEFAULT_MAX_DEPTH, show_default=True)
def cmd_replay(problem, script, seed, max_depth):
    """Replay a scripted session; print its coded history."""
    try:
        prob = load_problem(problem)
        with open(script) as fh:
            actions = json.load(fh)
    except (ProblemError, OSError, json.JSONDecodeError) as exc:
        _fail_input(exc)
    try:
        session = replay(prob.knowledge(), actions, seed=seed,
                         max_depth=max_depth)
    except ReplayError as exc:
        _fail_input(exc)
    click.echo(session.history())
    sys.exit(EXIT_OK)


# -- serve ----------------------------------------------------------------

@main.command("serve")
@click.option("--port", default=None, type=int)
@click.option("--data-dir", default=None,
              type=click.Path(file_okay=False))
@click.option("--static-dir", default=None,
              type=click.Path(file_okay=False))
def cmd_serve(port, data_dir, static_dir):
    """Run the HTTP service (and static UI, if built)."""
    import os

    import uvicorn

    from .service import ENV_PORT, create_app
    if port is None:
        port = int(os.environ.get(ENV_PORT, 8000))
    app = create_app(data_dir=data_dir, static_dir=static_dir)
    uvicorn.run(app, host="127.0.0.1", port=port)


def _fail_input(exc):
    click.echo(f"input error: {exc}", err=True)
    sys.exit(EXIT_INPUT)
