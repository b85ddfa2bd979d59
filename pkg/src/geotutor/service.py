"""HTTP service: problem upload, session lifecycle, and event logs.

Persistence is an append-only JSON-lines journal per session holding the
requests the session has received; restart recovery replays the journal
through the same deterministic state machine, so reconstructed state
equals in-memory state at any kill point.  Operations on one session are
serialized; a second in-flight request gets a protocol error.
"""
from __future__ import annotations

import io
import json
import os
import threading
import uuid

from fastapi import FastAPI, Request, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .detect import FigureTooSparseError, digitize
from .problemspec import ProblemError, parse_problem
from .tutor import DEFAULT_MAX_DEPTH, NoTutoringPlanError, TutorError, \
    TutorSession

ENV_PORT = "GEOTUTOR_PORT"
ENV_DATA_DIR = "GEOTUTOR_DATA_DIR"
ENV_MAX_DEPTH = "GEOTUTOR_MAX_DEPTH"
DEFAULT_DATA_DIR = "geotutor-data"


class _Store:
    """Sessions plus their journals; journals are the source of truth."""

    def __init__(self, data_dir: str, max_depth: int):
        self.data_dir = data_dir
        self.max_depth = max_depth
        self.sessions: dict[str, TutorSession] = {}
        self.locks: dict[str, threading.Lock] = {}
        self.problems: dict[str, dict] = {}
        os.makedirs(os.path.join(data_dir, "sessions"), exist_ok=True)
        os.makedirs(os.path.join(data_dir, "problems"), exist_ok=True)
        for fn in os.listdir(os.path.join(data_dir, "problems")):
            if fn.endswith(".json"):
                with open(os.path.join(data_dir, "problems", fn)) as fh:
                    self.problems[fn[:-5]] = json.load(fh)

    def journal_path(self, sid: str) -> str:
        return os.path.join(self.data_dir, "sessions", f"{sid}.jsonl")

    def append(self, sid: str, op: dict):
        with open(self.journal_path(sid), "a") as fh:
            fh.write(json.dumps(op, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def save_problem(self, pid: str, spec: dict):
        self.problems[pid] = spec
        path = os.path.join(self.data_dir, "problems", f"{pid}.json")
        with open(path, "w") as fh:
            json.dump(spec, fh, sort_keys=True, indent=1)

    def load_session(self, sid: str) -> TutorSession:
        """Session by id, rebuilding from its journal if not in memory."""
        if sid in self.sessions:
            return self.sessions[sid]
        path = self.journal_path(sid)
        if not os.path.exists(path):
            raise KeyError(sid)
        session = None
        with open(path) as fh:
            for line in fh:
                op = json.loads(line)
                if op["op"] == "create":
                    problem = parse_problem(op["problem"])
                    session = TutorSession(problem.knowledge(),
                                           seed=op["seed"],
                                           max_depth=op["max_depth"])
                    continue
                try:
                    _apply(session, op)
                except TutorError:
                    # the original request failed the same way; state
                    # unchanged, keep replaying
                    pass
        if session is None:
            raise KeyError(sid)
        self.sessions[sid] = session
        self.locks[sid] = threading.Lock()
        return session

    def lock(self, sid: str) -> threading.Lock:
        return self.locks.setdefault(sid, threading.Lock())


def _apply(session: TutorSession, op: dict):
    """Apply one journaled request to a session; returns extra payload."""
    if op["op"] == "template":
        session.submit_template(op["template"])
        return {}
    if op["op"] == "construct":
        strokes = [tuple(map(tuple, s)) for s in op["strokes"]]
        verdict, fb = session.submit_construction(strokes)
        out = {"verdict": verdict, "feedback": None}
        if fb is not None:
            out["feedback"] = {
                "tier": fb.tier, "message": fb.message,
                "highlights": [list(h) for h in fb.highlights],
                "reveal": [list(map(list, piece)) for piece in fb.reveal],
            }
        return out
    if op["op"] == "back":
        session.backtrack()
        return {}
    raise TutorError(f"unknown operation {op['op']!r}")


def create_app(data_dir: str = None,
               max_depth: int = None,
               static_dir: str = None) -> FastAPI:
    data_dir = data_dir or os.environ.get(ENV_DATA_DIR, DEFAULT_DATA_DIR)
    if max_depth is None:
        max_depth = int(os.environ.get(ENV_MAX_DEPTH, DEFAULT_MAX_DEPTH))
    store = _Store(data_dir, max_depth)
    app = FastAPI(title="geotutor", version="0.1.0")
    app.state.store = store

    def error(status, message, **extra):
        return JSONResponse({"error": message, **extra},
                            status_code=status)

    def get_session(sid):
        try:
            return store.load_session(sid)
        except KeyError:
            return None

    @app.post("/v1/problems/image")
    async def upload_image(file: UploadFile):
        import numpy as np
        from PIL import Image, UnidentifiedImageError
        data = await file.read()
        try:
            img = Image.open(io.BytesIO(data)).convert("L")
        except UnidentifiedImageError:
            return error(415, "unsupported or corrupt image")
        try:
            draft = digitize(np.asarray(img))
        except FigureTooSparseError as exc:
            return error(422, str(exc),
                         draft=exc.draft.to_json() if exc.draft else None)
        return {"draft": draft.to_json()}

    @app.post("/v1/problems")
    async def upload_problem(request: Request):
        spec = await request.json()
        try:
            parse_problem(spec)
        except ProblemError as exc:
            return error(422, "invalid problem", details=exc.errors)
        pid = uuid.uuid4().hex[:12]
        store.save_problem(pid, spec)
        return {"problem_id": pid}

    @app.post("/v1/sessions")
    async def create_session(request: Request):
        body = await request.json()
        if "problem" in body:
            spec = body["problem"]
        else:
            spec = store.problems.get(body.get("problem_id", ""))
            if spec is None:
                return error(404, "unknown problem id")
        seed = int(body.get("seed", 0))
        try:
            problem = parse_problem(spec)
        except ProblemError as exc:
            return error(422, "invalid problem", details=exc.errors)
        try:
            session = TutorSession(problem.knowledge(), seed=seed,
                                   max_depth=max_depth)
        except NoTutoringPlanError as exc:
            return error(422, str(exc))
        sid = uuid.uuid4().hex[:12]
        store.append(sid, {"op": "create", "problem": spec, "seed": seed,
                           "max_depth": max_depth})
        store.sessions[sid] = session
        store.locks[sid] = threading.Lock()
        return {"session_id": sid, "state": session.state()}

    def session_op(sid, op):
        session = get_session(sid)
        if session is None:
            return error(404, "unknown session id")
        lock = store.lock(sid)
        if not lock.acquire(blocking=False):
            return error(409, "another request is in flight")
        try:
            if session.phase == "proof_complete":
                return error(409, "session already complete",
                             phase=session.phase)
            store.append(sid, op)
            try:
                extra = _apply(session, op)
            except TutorError as exc:
                return error(409, str(exc), phase=session.phase)
            return {"state": session.state(), **extra}
        finally:
            lock.release()

    @app.post("/v1/sessions/{sid}/template")
    async def submit_template(sid: str, request: Request):
        body = await request.json()
        return session_op(sid, {"op": "template",
                                "template": body.get("template_id")})

    @app.post("/v1/sessions/{sid}/construction")
    async def submit_construction(sid: str, request: Request):
        body = await request.json()
        return session_op(sid, {"op": "construct",
                                "strokes": body.get("strokes", [])})

    @app.post("/v1/sessions/{sid}/backtrack")
    async def backtrack(sid: str):
        return session_op(sid, {"op": "back"})

    @app.get("/v1/sessions/{sid}")
    async def get_state(sid: str):
        session = get_session(sid)
        if session is None:
            return error(404, "unknown session id")
        return {"state": session.state()}

    @app.get("/v1/sessions/{sid}/proof")
    async def get_proof(sid: str):
        session = get_session(sid)
        if session is None:
            return error(404, "unknown session id")
        if session.phase != "proof_complete":
            return error(409, "proof not yet earned", phase=session.phase)
        proof = session.proof()
        return {"proof": proof.render().splitlines()}

    @app.get("/v1/sessions/{sid}/log")
    async def get_log(sid: str):
        session = get_session(sid)
        if session is None:
            return error(404, "unknown session id")
        return {"history": session.history(), "events": session.events}

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="ui")
    return app
