"""HTTP facade for the interactive discover/extend/edit/compare workflow.

Sessions live in memory. Every mutating endpoint is atomic: handlers
build the complete next state on the side and commit it only when nothing
raised, so a failing request leaves the session exactly as it was.
Requests touching the same session are serialized by a per-session lock.
"""

from __future__ import annotations

import json
import threading
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import alignment as alignment_mod
from .errors import (
    EngineError,
    InconsistentModel,
    InvalidTree,
    NoModel,
    NothingToRedo,
    NothingToUndo,
    UnknownSession,
    UnknownVariant,
)
from .eventlog import EventLog, TraceVariant, extract_variants, list_activities, parse_xes
from .incremental import add_trace
from .miner import discover_from_variants
from .petri import serialize_pnml, tree_to_petri_net
from .tree import (
    TreeNode,
    insert_node,
    parse_ptml,
    relabel_node,
    remove_subtree,
    serialize_ptml,
    shift_subtree,
    tree_from_dict,
    tree_to_dict,
    validate,
    validation_errors,
)

HISTORY_CAP = 100

_STATUS_BY_CODE = {
    "UnknownSession": 404,
    "UnknownVariant": 404,
    "NoModel": 409,
    "InconsistentModel": 409,
    "InconsistentInput": 409,
    "NothingToUndo": 409,
    "NothingToRedo": 409,
    "TraceFits": 409,
    "SearchBudgetExceeded": 503,
    "BudgetExceeded": 503,
}


@dataclass(frozen=True)
class Snapshot:
    tree: TreeNode | None
    added_variant_ids: frozenset[int]


@dataclass
class Session:
    session_id: str
    log: EventLog | None = None
    variants: list[TraceVariant] = field(default_factory=list)
    tree: TreeNode | None = None
    added_variant_ids: frozenset[int] = frozenset()
    accepted_flags: dict[int, bool | None] = field(default_factory=dict)
    history: list[Snapshot] = field(default_factory=lambda: [Snapshot(None, frozenset())])
    history_cursor: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self) -> Session:
        session = Session(session_id=uuid.uuid4().hex)
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id}")
        return session

    def dump(self, path: Path) -> None:
        """Flush a JSON snapshot of every session (called on shutdown)."""
        payload = []
        for session in self._sessions.values():
            payload.append({
                "session_id": session.session_id,
                "tree": tree_to_dict(session.tree) if session.tree is not None else None,
                "added_variant_ids": sorted(session.added_variant_ids),
                "variants": [
                    {"variant_id": v.variant_id, "activities": list(v.activities),
                     "case_count": v.case_count}
                    for v in session.variants
                ],
                "source_name": session.log.source_name if session.log else None,
            })
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2))


def share_string(count: int, total: int) -> str:
    """Exact-decimal share, 12 fractional digits, trailing zeros stripped."""
    value = (Decimal(count) / Decimal(total)).quantize(Decimal("1." + "0" * 12))
    text = str(value).rstrip("0").rstrip(".")
    return text or "0"


def _variant_rows(session: Session) -> list[dict]:
    total = len(session.log.traces) if session.log else 0
    rows = []
    for v in session.variants:
        rows.append({
            "variant_id": v.variant_id,
            "activities": list(v.activities),
            "case_count": v.case_count,
            "share": share_string(v.case_count, total) if total else "0",
            "added": v.variant_id in session.added_variant_ids,
            "accepted": session.accepted_flags.get(v.variant_id),
        })
    return rows


def _violation_rows(tree: TreeNode | None) -> list[dict]:
    if tree is None:
        return []
    return [{"path": list(v.path), "code": v.code, "severity": v.severity,
             "message": v.message} for v in validate(tree)]


def _tree_payload(session: Session) -> dict:
    return {
        "tree": tree_to_dict(session.tree) if session.tree is not None else None,
        "violations": _violation_rows(session.tree),
        "added_variant_ids": sorted(session.added_variant_ids),
        "variants": _variant_rows(session),
    }


def _require_model(session: Session) -> TreeNode:
    if session.tree is None:
        raise NoModel("the session has no process model yet")
    return session.tree


def _require_valid_model(session: Session) -> TreeNode:
    tree = _require_model(session)
    errors = validation_errors(tree)
    if errors:
        raise InvalidTree(f"{errors[0].code} at {list(errors[0].path)}: fix the tree first")
    return tree


def _recompute_flags(session: Session, tree: TreeNode) -> dict[int, bool | None]:
    return dict(alignment_mod.conformance_report(tree, session.variants))


def _push_snapshot(session: Session) -> None:
    session.history = session.history[: session.history_cursor + 1]
    session.history.append(Snapshot(session.tree, session.added_variant_ids))
    if len(session.history) > HISTORY_CAP:
        session.history = session.history[-HISTORY_CAP:]
    session.history_cursor = len(session.history) - 1


def _check_variant_ids(session: Session, ids: list) -> list[int]:
    if not isinstance(ids, list) or not all(isinstance(i, int) for i in ids):
        raise RequestValidationError([{"msg": "variant_ids must be a list of integers"}])
    known = {v.variant_id for v in session.variants}
    for vid in ids:
        if vid not in known:
            raise UnknownVariant(f"variant {vid} does not exist")
    return sorted(set(ids))


def create_app(state_path: str | None = None, static_dir: str | None = None) -> FastAPI:
    store = SessionStore()

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        if state_path:
            store.dump(Path(state_path))

    app = FastAPI(title="treedisc session service", lifespan=lifespan)
    app.state.store = store

    @app.exception_handler(EngineError)
    async def engine_error_handler(_: Request, exc: EngineError):
        status = _STATUS_BY_CODE.get(exc.code, 422)
        return JSONResponse(status_code=status,
                            content={"error": {"code": exc.code, "message": str(exc)}})

    @app.exception_handler(RequestValidationError)
    async def body_error_handler(_: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"error": {"code": "InvalidBody", "message": str(exc.errors())}})

    @app.exception_handler(ValueError)
    async def value_error_handler(_: Request, exc: ValueError):
        return JSONResponse(status_code=422,
                            content={"error": {"code": "InvalidBody", "message": str(exc)}})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session():
        return {"session_id": store.create().session_id}

    @app.post("/sessions/{sid}/log")
    async def upload_log(sid: str, request: Request):
        session = store.get(sid)
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = next((v for v in form.values() if hasattr(v, "read")), None)
            if upload is None:
                raise RequestValidationError([{"msg": "multipart upload lacks a file part"}])
            data = await upload.read()
            name = getattr(upload, "filename", "") or ""
        else:
            data = await request.body()
            name = ""
        log = parse_xes(data, source_name=name)
        variants = extract_variants(log)
        with session.lock:
            session.log = log
            session.variants = variants
            session.tree = None
            session.added_variant_ids = frozenset()
            session.accepted_flags = {v.variant_id: None for v in variants}
            session.history = [Snapshot(None, frozenset())]
            session.history_cursor = 0
            return {
                "session_id": sid,
                "source_name": name,
                "trace_count": len(log.traces),
                "variant_count": len(variants),
                "variants": _variant_rows(session),
            }

    @app.get("/sessions/{sid}/variants")
    def get_variants(sid: str):
        session = store.get(sid)
        with session.lock:
            return {"variants": _variant_rows(session)}

    @app.get("/sessions/{sid}/activities")
    def get_activities(sid: str):
        session = store.get(sid)
        with session.lock:
            if session.log is None:
                return {"activities": []}
            rows = list_activities(session.log, session.tree)
            return {"activities": [
                {"activity": a, "count": n, "in_model": present} for a, n, present in rows
            ]}

    @app.post("/sessions/{sid}/discover")
    async def discover_initial(sid: str, request: Request):
        session = store.get(sid)
        body = await _json_body(request)
        with session.lock:
            if session.log is None:
                raise NoModel("upload an event log before discovering")
            ids = _check_variant_ids(session, body.get("variant_ids", []))
            selection = [v for v in session.variants if v.variant_id in ids]
            tree = discover_from_variants(selection)
            flags = _recompute_flags(session, tree)
            session.tree = tree
            session.added_variant_ids = frozenset(ids)
            session.accepted_flags = flags
            _push_snapshot(session)
            return _tree_payload(session)

    @app.post("/sessions/{sid}/extend")
    async def extend_model(sid: str, request: Request):
        session = store.get(sid)
        body = await _json_body(request)
        with session.lock:
            tree = _require_valid_model(session)
            ids = _check_variant_ids(session, body.get("variant_ids", []))
            by_id = {v.variant_id: v for v in session.variants}
            added_traces = {by_id[vid].activities for vid in session.added_variant_ids}
            net = tree_to_petri_net(tree)
            for vid in sorted(session.added_variant_ids):
                if alignment_mod.align(net, by_id[vid].activities).cost != 0:
                    raise InconsistentModel(
                        f"previously added variant {vid} no longer fits; "
                        "re-discover or edit the model first")
            for vid in ids:
                trace = by_id[vid].activities
                tree = add_trace(tree, added_traces, trace)
                added_traces.add(trace)
            flags = _recompute_flags(session, tree)
            session.tree = tree
            session.added_variant_ids = session.added_variant_ids | frozenset(ids)
            session.accepted_flags = flags
            _push_snapshot(session)
            return _tree_payload(session)

    @app.post("/sessions/{sid}/tree/edit")
    async def edit_tree(sid: str, request: Request):
        session = store.get(sid)
        body = await _json_body(request)
        with session.lock:
            tree = _require_model(session)
            op = body.get("op")
            path = body.get("path", [])
            if not isinstance(path, list) or not all(isinstance(i, int) for i in path):
                raise RequestValidationError([{"msg": "path must be a list of integers"}])
            if op == "insert":
                node = tree_from_dict(body.get("node", {}))
                tree = insert_node(tree, path, body.get("position", ""), node)
            elif op == "remove":
                tree = remove_subtree(tree, path)
            elif op == "shift":
                tree = shift_subtree(tree, path, body.get("direction", ""))
            elif op == "set_label":
                tree = relabel_node(tree, path, body.get("label", ""))
            else:
                raise RequestValidationError([{"msg": f"unknown edit op {op!r}"}])
            session.tree = tree
            session.accepted_flags = {v.variant_id: None for v in session.variants}
            _push_snapshot(session)
            return _tree_payload(session)

    @app.post("/sessions/{sid}/conformance")
    def conformance_check(sid: str):
        session = store.get(sid)
        with session.lock:
            tree = _require_valid_model(session)
            session.accepted_flags = _recompute_flags(session, tree)
            return {"results": [
                {"variant_id": vid, "accepted": verdict}
                for vid, verdict in sorted(session.accepted_flags.items())
            ]}

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        session = store.get(sid)
        with session.lock:
            if session.history_cursor == 0:
                raise NothingToUndo("already at the oldest state")
            session.history_cursor -= 1
            _restore(session)
            return _tree_payload(session)

    @app.post("/sessions/{sid}/redo")
    def redo(sid: str):
        session = store.get(sid)
        with session.lock:
            if session.history_cursor >= len(session.history) - 1:
                raise NothingToRedo("already at the newest state")
            session.history_cursor += 1
            _restore(session)
            return _tree_payload(session)

    @app.post("/sessions/{sid}/tree/import")
    async def import_tree(sid: str, request: Request):
        session = store.get(sid)
        data = await request.body()
        with session.lock:
            tree = parse_ptml(data)
            session.tree = tree
            session.added_variant_ids = frozenset()
            session.accepted_flags = {v.variant_id: None for v in session.variants}
            _push_snapshot(session)
            return _tree_payload(session)

    @app.get("/sessions/{sid}/export")
    def export(sid: str, format: str = "ptml"):
        session = store.get(sid)
        with session.lock:
            if format == "ptml":
                tree = _require_model(session)
                data = serialize_ptml(tree)
                filename = "model.ptml"
            elif format == "pnml":
                tree = _require_valid_model(session)
                data = serialize_pnml(tree_to_petri_net(tree))
                filename = "model.pnml"
            else:
                raise RequestValidationError([{"msg": f"unknown export format {format!r}"}])
            return Response(content=data, media_type="application/xml",
                            headers={"Content-Disposition": f'attachment; filename="{filename}"'})

    if static_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def _restore(session: Session) -> None:
    snapshot = session.history[session.history_cursor]
    session.tree = snapshot.tree
    session.added_variant_ids = snapshot.added_variant_ids
    session.accepted_flags = {v.variant_id: None for v in session.variants}


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise RequestValidationError([{"msg": "request body must be JSON"}])
    if not isinstance(body, dict):
        raise RequestValidationError([{"msg": "request body must be a JSON object"}])
    return body
