"""FastAPI application exposing inspection and supervision.

Two audiences, two view scopes. Inspection endpoints are read-only and
document-scoped: the whole branch, its graph, its validation report,
and DOT text. Supervision endpoints are session-scoped and deliberately
narrow: a partial view showing only the current state and its outgoing
edges, plus the mutation endpoints (propose, decide, risky, flags,
confirm) and a server-sent event stream.

Every mutation flows through the owning session's serialized command
sequence and is appended to the event log before the response goes out.
On startup, an existing event log is replayed to rebuild all sessions,
so a restart never loses supervision state.

Approval drives execution: approving a proposal (or proposing in
autonomous/manual mode) immediately executes the step and reports the
outcome in the response; there is no separate step endpoint.
"""

from __future__ import annotations

import json
import os
import queue
import threading
import time
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Iterator, Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from ..dispatch import (
    ALARM,
    SESSION_CREATED,
    ConfirmationHub,
    ExecutionSession,
    Mode,
    OperationLibrary,
    Proposal,
    confirmation_gate,
    create_session,
    make_oracle_library,
    replay_session,
)
from ..document import SmslDocument, document_to_plain, parse_smsl
from ..errors import (
    AlreadyDecidedError,
    DuplicateNameError,
    EdgePrunedError,
    FlagBlockedError,
    InvalidDocumentError,
    MissingOperationError,
    NoPendingConfirmationError,
    NotApprovedError,
    PreCheckFailedError,
    ProposalPendingError,
    SmslError,
    UnknownBranchError,
    UnknownEdgeError,
    UnknownNodeError,
    UnknownProposalError,
    UnknownSessionError,
    WrongSourceError,
)
from ..eventlog import EventLogWriter, SupervisionEvent, read_event_log
from ..graph import FsmGraph, build_graph, export_dot
from ..monitor import MonitorContext
from ..validation import ValidationReport, validate
from . import schemas

__all__ = ["ServiceConfig", "create_app", "load_document"]


@dataclass
class ServiceConfig:
    document: SmslDocument
    event_log: Optional[str] = None
    default_mode: Mode = Mode.SUPERVISED
    staleness_limit: float = 5.0
    # operation name -> confirmation token; these operations block until
    # the token is confirmed through POST .../confirm
    confirm_operations: dict[str, str] = dataclass_field(default_factory=dict)
    # the predictor slot: called with (session, pending proposal) for the
    # partial view; None or a None return means "no prediction"
    predictor: Optional[Callable[[ExecutionSession, Proposal], Optional[str]]] = None
    clock: Callable[[], float] = time.time
    console_dir: Optional[str] = None


def load_document(path: str) -> tuple[SmslDocument, ValidationReport]:
    """Parse and validate an SMSL file for serving.

    Raises:
        InvalidDocumentError: When validation reports any error finding.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = parse_smsl(fh.read())
    report = validate(doc)
    if not report.ok:
        details = "; ".join(
            f"[{f.branch}] {f.location}: {f.message}" for f in report.errors
        )
        raise InvalidDocumentError(f"{path}: {details}")
    return doc, report


_ERROR_STATUS: list[tuple[type, int]] = [
    (UnknownSessionError, 404),
    (UnknownBranchError, 404),
    (UnknownNodeError, 404),
    (UnknownEdgeError, 404),
    (UnknownProposalError, 404),
    (NoPendingConfirmationError, 404),
    (MissingOperationError, 404),
    (AlreadyDecidedError, 409),
    (ProposalPendingError, 409),
    (WrongSourceError, 409),
    (EdgePrunedError, 409),
    (NotApprovedError, 409),
    (FlagBlockedError, 409),
    (PreCheckFailedError, 409),
    (DuplicateNameError, 409),
]


class SessionRuntime:
    """A live session plus everything the service wires around it:
    oracle library (with confirmation gates), simulated monitor,
    confirmation hub, and event-stream subscribers."""

    def __init__(self, state: "ServiceState") -> None:
        self.state = state
        self.hub = ConfirmationHub()
        self.session: ExecutionSession = None  # type: ignore[assignment]
        self.library: OperationLibrary = OperationLibrary()
        self.monitor: Optional[MonitorContext] = None
        self.seq = 0
        self._subscribers: list[queue.Queue] = []
        self._sub_lock = threading.Lock()

    def sink(self, event: SupervisionEvent) -> None:
        # Log first, then broadcast: a pushed event is always durable.
        if self.state.writer is not None:
            self.state.writer.write(event)
        with self._sub_lock:
            self.seq += 1
            for q in self._subscribers:
                q.put((self.seq, event))

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._sub_lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._sub_lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def wire(self, session: ExecutionSession) -> None:
        self.session = session
        branch = session.branch
        self.library = make_oracle_library(branch)
        for op, token in self.state.config.confirm_operations.items():
            if op in self.library:
                self.library.register(op, confirmation_gate(token), replace=True)
        if not session.degraded:
            self.monitor = MonitorContext.for_branch(
                branch,
                session.current,
                staleness_limit=self.state.config.staleness_limit,
            )

    def run_step(self) -> schemas.StepOutcome:
        """Execute the approved pending proposal, catching domain
        failures into the outcome instead of failing the request that
        triggered the step (its own mutation already committed)."""
        try:
            if self.monitor is not None:
                self.monitor.tick()
            result = self.session.step(self.library, self.monitor)
        except SmslError as exc:
            return schemas.StepOutcome(
                ok=False,
                current=self.session.current,
                error=f"{type(exc).__name__.removesuffix('Error')}: {exc}",
            )
        return schemas.StepOutcome(
            ok=result.ok,
            current=result.current,
            estimate_state=result.estimate.state if result.estimate else None,
            error=None if result.ok else "post-check mismatch",
        )


class ServiceState:
    def __init__(self, config: ServiceConfig) -> None:
        self.config = config
        self.doc = config.document
        self.report = validate(self.doc)
        if not self.report.ok:
            details = "; ".join(
                f"[{f.branch}] {f.location}: {f.message}" for f in self.report.errors
            )
            raise InvalidDocumentError(details)
        self.graphs: dict[str, FsmGraph] = {
            name: build_graph(branch) for name, branch in self.doc.branches.items()
        }
        self.writer: Optional[EventLogWriter] = None
        self.runtimes: dict[str, SessionRuntime] = {}
        self._create_lock = threading.Lock()
        self._session_seq = 0
        if config.event_log and os.path.exists(config.event_log):
            self._replay_log(config.event_log)
        if config.event_log:
            self.writer = EventLogWriter(config.event_log)

    def _replay_log(self, path: str) -> None:
        by_session: dict[str, list[SupervisionEvent]] = {}
        for event in read_event_log(path):
            by_session.setdefault(event.session, []).append(event)
        for sid, events in by_session.items():
            if not events or events[0].kind != SESSION_CREATED:
                raise InvalidDocumentError(
                    f"event log {path}: session {sid!r} does not start with"
                    " its creation record"
                )
            branch = self.doc.branch(events[0].payload["branch"])
            session = replay_session(branch, events)
            session._clock = self.config.clock
            runtime = SessionRuntime(self)
            runtime.wire(session)
            runtime.seq = len(session.history)
            session._sink = runtime.sink
            session.confirmations = runtime.hub
            self.runtimes[sid] = runtime
            if sid.startswith("s") and sid[1:].isdigit():
                self._session_seq = max(self._session_seq, int(sid[1:]))

    def next_session_id(self) -> str:
        self._session_seq += 1
        return f"s{self._session_seq}"

    def runtime(self, session_id: str) -> SessionRuntime:
        try:
            return self.runtimes[session_id]
        except KeyError:
            raise UnknownSessionError(f"no session {session_id!r}") from None


def _proposal_model(p: Proposal) -> schemas.ProposalModel:
    return schemas.ProposalModel(
        id=p.id,
        edge=p.edge,
        proposed_at=p.proposed_at,
        proposed_by=p.proposed_by,
        decided=p.decided,
        decided_by=p.decided_by,
        decided_at=p.decided_at,
    )


def _summary(rt: SessionRuntime) -> schemas.SessionSummary:
    s = rt.session
    return schemas.SessionSummary(
        session=s.session_id,
        branch=s.branch.name,
        mode=s.mode.value,
        current=s.current,
        degraded=s.degraded,
    )


def _partial_view(
    state: ServiceState, rt: SessionRuntime, include_incoming: bool
) -> schemas.PartialViewModel:
    session = rt.session
    with session._field_lock:
        current = session.current
        mode = session.mode
        flags = dict(session.flags)
        pending = session.pending
        history = list(session.history)
    out_edges = [
        schemas.OutEdgeModel(
            op=e.op, target=e.dst, cost=e.cost, pruned=e.pruned, risky=e.risky
        )
        for e in session.graph.out_edges(current)
    ]
    alarms = [
        schemas.AlarmModel(
            kind=e.payload.get("kind", ""),
            previous=e.payload.get("previous"),
            new=e.payload.get("new"),
            dispatched=tuple(e.payload["dispatched"])
            if e.payload.get("dispatched")
            else None,
        )
        for e in history
        if e.kind == ALARM
    ]
    scene = None
    stale: list[int] = []
    estimate_state = None
    if rt.monitor is not None:
        estimate = rt.monitor.estimate()
        scene = schemas.SceneModel(
            branch=estimate.scene.branch,
            values=list(estimate.scene.values),
            as_of=estimate.scene.as_of,
        )
        stale = sorted(estimate.stale_facts)
        estimate_state = estimate.state
    prediction = None
    predictor = state.config.predictor
    if predictor is not None and pending is not None:
        prediction = predictor(session, pending)
    in_edges = None
    if include_incoming:
        in_edges = [
            schemas.EdgeModel(
                src=e.src, op=e.op, dst=e.dst, cost=e.cost, pruned=e.pruned,
                risky=e.risky,
            )
            for e in session.graph.edges
            if e.dst == current
        ]
    return schemas.PartialViewModel(
        session=session.session_id,
        branch=session.branch.name,
        mode=mode.value,
        current=current,
        degraded=session.degraded,
        scene=scene,
        stale_facts=stale,
        estimate_state=estimate_state,
        out_edges=out_edges,
        in_edges=in_edges,
        pending=_proposal_model(pending) if pending else None,
        flags=flags,
        alarms=alarms,
        awaiting_confirmation=rt.hub.waiting(),
        prediction=prediction,
    )


def _sse_line(seq: int, event: SupervisionEvent) -> str:
    data = json.dumps(event.to_json(), sort_keys=True)
    return f"id: {seq}\nevent: {event.kind}\ndata: {data}\n\n"


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the application. Fails fast with InvalidDocumentError when
    the configured document has validation errors."""
    state = ServiceState(config)
    app = FastAPI(title="SMSL supervision service")
    app.state.smsl = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(SmslError)
    async def smsl_error_handler(request: Request, exc: SmslError) -> JSONResponse:
        status = 400
        for err_type, code in _ERROR_STATUS:
            if isinstance(exc, err_type):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={
                "error": type(exc).__name__.removesuffix("Error"),
                "detail": str(exc),
            },
        )

    @app.get("/branches", response_model=list[str])
    def branches() -> list[str]:
        return list(state.doc.branch_names)

    @app.get("/inspect/{branch}", response_model=schemas.FullViewModel)
    def inspect(branch: str) -> schemas.FullViewModel:
        b = state.doc.branch(branch)
        graph = state.graphs[branch]
        return schemas.FullViewModel(
            branch=branch,
            document=document_to_plain(state.doc),
            graph=schemas.GraphModel(
                branch=branch,
                nodes=list(graph.nodes),
                edges=[
                    schemas.EdgeModel(
                        src=e.src, op=e.op, dst=e.dst, cost=e.cost,
                        pruned=e.pruned, risky=e.risky,
                    )
                    for e in graph.edges
                ],
            ),
            validation=schemas.ValidationModel(
                ok=state.report.ok,
                findings=[
                    schemas.FindingModel(
                        severity=f.severity,
                        branch=f.branch,
                        location=f.location,
                        message=f.message,
                        code=f.code,
                    )
                    for f in state.report.findings
                ],
            ),
            dot=export_dot(graph),
        )

    @app.get("/sessions", response_model=list[schemas.SessionSummary])
    def list_sessions() -> list[schemas.SessionSummary]:
        return [_summary(rt) for rt in state.runtimes.values()]

    @app.post(
        "/sessions", response_model=schemas.SessionSummary, status_code=201
    )
    def create(req: schemas.CreateSessionRequest) -> schemas.SessionSummary:
        branch = state.doc.branch(req.branch)
        try:
            mode = Mode(req.mode) if req.mode else state.config.default_mode
        except ValueError:
            raise HTTPException(
                status_code=422, detail=f"unknown mode {req.mode!r}"
            ) from None
        with state._create_lock:
            sid = state.next_session_id()
            runtime = SessionRuntime(state)
            session = create_session(
                branch,
                session_id=sid,
                mode=mode,
                initial=req.initial,
                clock=state.config.clock,
                sink=runtime.sink,
                confirmations=runtime.hub,
            )
            runtime.wire(session)
            state.runtimes[sid] = runtime
        return _summary(runtime)

    @app.get("/sessions/{sid}/view", response_model=schemas.PartialViewModel)
    def view(sid: str, incoming: bool = Query(False)) -> schemas.PartialViewModel:
        return _partial_view(state, state.runtime(sid), incoming)

    @app.post("/sessions/{sid}/propose", response_model=schemas.ProposeResponse)
    def propose(sid: str, req: schemas.ProposeRequest) -> schemas.ProposeResponse:
        rt = state.runtime(sid)
        session = rt.session
        if session.mode is Mode.AUTONOMOUS and session.flags.get(
            "transition_failed"
        ):
            raise FlagBlockedError(
                "transition_failed is set; clear it before autonomous stepping"
            )
        proposal = session.propose(tuple(req.edge), actor=req.actor)
        step = None
        if session.mode is Mode.AUTONOMOUS:
            step = rt.run_step()
        elif session.mode is Mode.MANUAL:
            # Manual mode: the proposing human is the decider.
            session.decide(proposal.id, "approved", req.actor)
            step = rt.run_step()
        return schemas.ProposeResponse(
            proposal=_proposal_model(proposal),
            current=session.current,
            step=step,
        )

    @app.post("/sessions/{sid}/decide", response_model=schemas.DecideResponse)
    def decide(sid: str, req: schemas.DecideRequest) -> schemas.DecideResponse:
        if req.verdict not in ("approved", "vetoed"):
            raise HTTPException(
                status_code=422,
                detail=f"verdict must be approved or vetoed, got {req.verdict!r}",
            )
        rt = state.runtime(sid)
        proposal = rt.session.decide(req.proposal, req.verdict, req.actor)
        step = None
        if req.verdict == "approved":
            step = rt.run_step()
        return schemas.DecideResponse(
            proposal=_proposal_model(proposal),
            current=rt.session.current,
            step=step,
        )

    @app.post("/sessions/{sid}/risky", response_model=schemas.RiskyResponse)
    def risky(sid: str, req: schemas.RiskyRequest) -> schemas.RiskyResponse:
        rt = state.runtime(sid)
        rt.session.set_risky(tuple(req.edge), req.on, actor=req.actor)
        edge = rt.session.graph.edge(tuple(req.edge))
        return schemas.RiskyResponse(
            edge=edge.id, risky=edge.risky, pruned=edge.pruned
        )

    @app.post("/sessions/{sid}/flags", response_model=schemas.FlagResponse)
    def flags(sid: str, req: schemas.FlagRequest) -> schemas.FlagResponse:
        rt = state.runtime(sid)
        rt.session.set_flag(req.name, req.value, actor=req.actor)
        return schemas.FlagResponse(
            flags=dict(rt.session.flags), mode=rt.session.mode.value
        )

    @app.post("/sessions/{sid}/confirm", response_model=schemas.ConfirmResponse)
    def confirm(sid: str, req: schemas.ConfirmRequest) -> schemas.ConfirmResponse:
        rt = state.runtime(sid)
        rt.hub.confirm(req.token)
        rt.session.record_confirmation(req.token, req.actor)
        return schemas.ConfirmResponse(token=req.token)

    @app.get("/sessions/{sid}/events")
    def events(
        sid: str,
        request: Request,
        after: Optional[int] = Query(None),
    ) -> StreamingResponse:
        rt = state.runtime(sid)
        start_after = 0
        header = request.headers.get("last-event-id")
        if after is not None:
            start_after = after
        elif header is not None and header.strip().isdigit():
            start_after = int(header.strip())

        def generate() -> Iterator[str]:
            q = rt.subscribe()
            try:
                with rt.session._field_lock:
                    history = list(rt.session.history)
                position = start_after
                for seq, event in enumerate(history, start=1):
                    if seq > position:
                        yield _sse_line(seq, event)
                        position = seq
                while True:
                    try:
                        seq, event = q.get(timeout=0.5)
                    except queue.Empty:
                        yield ": keep-alive\n\n"
                        continue
                    if seq > position:
                        yield _sse_line(seq, event)
                        position = seq
            finally:
                rt.unsubscribe(q)

        return StreamingResponse(
            generate(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    if config.console_dir and os.path.isdir(config.console_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount(
            "/console", StaticFiles(directory=config.console_dir, html=True),
            name="console",
        )

    return app
