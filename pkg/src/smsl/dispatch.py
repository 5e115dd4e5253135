"""The dispatcher runtime: sessions, proposals, flags, and execution.

An execution session walks one branch's graph. Every move follows the
same gate: an edge is proposed, the proposal is decided (auto-approved
in autonomous mode, by a supervisor otherwise), and only an approved
proposal can be stepped. Stepping looks up the operation's handler in
the operation library, checks the monitored scene against the session
state before dispatch, invokes the handler, and checks the scene again
afterwards. A post-check mismatch re-identifies the session from the
scene, raises the "transition_failed" flag, and records the failure.

Two flag names are reserved: "takeover" switches the session to manual
mode when set, and "transition_failed" blocks autonomous stepping (and
any run_plan) until cleared. All other flags are free-form booleans.

Every state-changing command appends exactly one event to the session
history (and to the configured sink, e.g. the service event log). The
history is the authority: replaying it through replay_session rebuilds
the session snapshot exactly, which is what makes supervision auditable
after the fact.

Branches whose state names do not encode fact configurations cannot be
monitored; sessions over them run degraded: no scene checks, and the
post-state is taken on trust from the edge target. The degraded bit is
recorded on the session and in its creation event.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .document import StateBranch
from .errors import (
    AlreadyDecidedError,
    DuplicateNameError,
    EdgePrunedError,
    FlagBlockedError,
    MissingOperationError,
    NoPendingConfirmationError,
    NotApprovedError,
    PlanMismatchError,
    PreCheckFailedError,
    ProposalPendingError,
    UnknownNodeError,
    UnknownProposalError,
    WrongSourceError,
)
from .eventlog import SupervisionEvent
from .graph import Edge, EdgeId, FsmGraph, Path, build_graph, set_risky
from .monitor import Alarm, MonitorContext, StateEstimate, detect_unplanned_transition
from .statecheck import SceneSnapshot, decode_state_name, effective_fact_count

__all__ = [
    "Mode",
    "Proposal",
    "HandlerContext",
    "Handler",
    "OperationLibrary",
    "register_operation",
    "oracle_handler",
    "make_oracle_library",
    "confirmation_gate",
    "ConfirmationHub",
    "ExecutionSession",
    "create_session",
    "TransitionResult",
    "StopReason",
    "RunReport",
    "run_plan",
    "replay_session",
    "FLAG_TAKEOVER",
    "FLAG_TRANSITION_FAILED",
]


class Mode(str, Enum):
    AUTONOMOUS = "autonomous"
    SUPERVISED = "supervised"
    MANUAL = "manual"


FLAG_TAKEOVER = "takeover"
FLAG_TRANSITION_FAILED = "transition_failed"

# Event kinds
SESSION_CREATED = "SessionCreated"
PROPOSED = "Proposed"
APPROVED = "Approved"
VETOED = "Vetoed"
EXECUTED = "Executed"
FAILED_TRANSITION = "FailedTransition"
ALARM = "Alarm"
FLAG_SET = "FlagSet"
MODE_CHANGED = "ModeChanged"
RISKY_SET = "RiskySet"
CONFIRMED = "Confirmed"

APPROVED_VERDICT = "approved"
VETOED_VERDICT = "vetoed"


@dataclass
class Proposal:
    id: str
    edge: EdgeId
    proposed_at: float
    proposed_by: str
    decided: Optional[str] = None  # "approved" | "vetoed"
    decided_by: Optional[str] = None
    decided_at: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "edge": list(self.edge),
            "proposed_at": self.proposed_at,
            "proposed_by": self.proposed_by,
            "decided": self.decided,
            "decided_by": self.decided_by,
            "decided_at": self.decided_at,
        }


@dataclass
class HandlerContext:
    """What an operation handler gets to work with."""

    edge: Edge
    session_id: str
    scene: Optional[SceneSnapshot] = None
    world: Optional[object] = None
    confirmations: Optional["ConfirmationHub"] = None


Handler = Callable[[HandlerContext], None]


class OperationLibrary:
    """Named executable handlers, one per operation name."""

    def __init__(self) -> None:
        self._entries: dict[str, Handler] = {}

    def register(self, name: str, handler: Handler, replace: bool = False) -> None:
        if name in self._entries and not replace:
            raise DuplicateNameError(f"operation {name!r} already registered")
        self._entries[name] = handler

    def get(self, name: str) -> Handler:
        try:
            return self._entries[name]
        except KeyError:
            raise MissingOperationError(
                f"no handler registered for operation {name!r}"
            ) from None

    def names(self) -> list[str]:
        return sorted(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)


def register_operation(
    lib: OperationLibrary, name: str, handler: Handler, replace: bool = False
) -> OperationLibrary:
    lib.register(name, handler, replace=replace)
    return lib


def oracle_handler(ctx: HandlerContext) -> None:
    """The stand-in actuator: drive the simulated world straight to the
    edge target's fact configuration."""
    if ctx.world is None:
        return
    config = decode_state_name(ctx.edge.dst)
    if config is not None:
        ctx.world.set_facts(config)


def make_oracle_library(branch: StateBranch) -> OperationLibrary:
    """An operation library covering every distinct operation name of a
    branch, each bound to the oracle handler."""
    lib = OperationLibrary()
    for ops in branch.states.values():
        for op in ops:
            if op not in lib:
                lib.register(op, oracle_handler)
    return lib


class ConfirmationHub:
    """Rendezvous for human-in-loop operations.

    A handler blocks in wait(token); a supervisor resolves it through
    confirm(token). Confirming a token nobody waits on is an error, and
    so is a second confirmation for the same wait.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._waiters: dict[str, threading.Event] = {}

    def wait(self, token: str, timeout: Optional[float] = None) -> bool:
        with self._lock:
            if token in self._waiters:
                raise DuplicateNameError(
                    f"a handler is already waiting on token {token!r}"
                )
            event = threading.Event()
            self._waiters[token] = event
        try:
            return event.wait(timeout)
        finally:
            with self._lock:
                self._waiters.pop(token, None)

    def confirm(self, token: str) -> None:
        with self._lock:
            event = self._waiters.get(token)
            if event is None or event.is_set():
                raise NoPendingConfirmationError(
                    f"nothing is waiting on confirmation token {token!r}"
                )
            event.set()

    def waiting(self) -> list[str]:
        with self._lock:
            return sorted(t for t, e in self._waiters.items() if not e.is_set())


def confirmation_gate(token: str, inner: Handler = oracle_handler) -> Handler:
    """Wrap a handler so it first blocks until token is confirmed."""

    def handler(ctx: HandlerContext) -> None:
        if ctx.confirmations is not None:
            ctx.confirmations.wait(token)
        inner(ctx)

    return handler


@dataclass
class TransitionResult:
    ok: bool
    edge: EdgeId
    source: str
    current: str
    estimate: Optional[StateEstimate]
    event: SupervisionEvent


class StopReason(str, Enum):
    COMPLETED = "Completed"
    VETOED = "Vetoed"
    ALARM = "Alarm"
    FAILED = "Failed"
    FLAG_BLOCKED = "FlagBlocked"


@dataclass
class RunReport:
    executed: list[EdgeId]
    final: str
    stop: StopReason
    detail: Optional[str] = None


class ExecutionSession:
    """One running walk over a branch.

    Commands (propose, decide, step, set_flag, set_risky, record_alarm)
    are serialized: a second command waits for the first to finish,
    handlers included. Reads (snapshot, properties) only synchronize on
    the brief field-update section, so a view stays available while a
    human-in-loop handler blocks mid-step.
    """

    def __init__(
        self,
        session_id: str,
        branch: StateBranch,
        graph: FsmGraph,
        mode: Mode,
        current: str,
        degraded: bool,
        clock: Optional[Callable[[], float]] = None,
        sink: Optional[Callable[[SupervisionEvent], None]] = None,
        confirmations: Optional[ConfirmationHub] = None,
    ) -> None:
        self.session_id = session_id
        self.branch = branch
        self.graph = graph
        self.mode = mode
        self.current = current
        self.degraded = degraded
        self.flags: dict[str, bool] = {}
        self.pending: Optional[Proposal] = None
        self.history: list[SupervisionEvent] = []
        self.confirmations = confirmations
        self._clock = clock or _counter_clock()
        self._sink = sink
        self._seq = 0
        self._last_ts = 0.0
        self._cmd_lock = threading.RLock()
        self._field_lock = threading.RLock()
        self._decision_cv = threading.Condition(self._field_lock)

    # --- event recording ---------------------------------------------------

    def _commit(
        self,
        kind: str,
        payload: dict,
        apply: Optional[Callable[[SupervisionEvent], None]] = None,
    ) -> SupervisionEvent:
        # The whole commit happens under the field lock: the timestamp,
        # the history append, the field change, and the sink call. A
        # concurrent snapshot never sees one without the others, and the
        # sink receives events in exactly history order even when a
        # commit bypasses the command lock (record_confirmation).
        with self._field_lock:
            ts = max(self._clock(), self._last_ts)
            self._last_ts = ts
            event = SupervisionEvent(
                ts=ts, session=self.session_id, kind=kind, payload=payload
            )
            self.history.append(event)
            if apply is not None:
                apply(event)
            self._decision_cv.notify_all()
            if self._sink is not None:
                self._sink(event)
        return event

    # --- commands ----------------------------------------------------------

    def propose(self, edge_id: EdgeId, actor: str = "dispatcher") -> Proposal:
        """Put an edge forward for execution.

        In autonomous mode the proposal is approved on the spot (still
        leaving both events in the history). Exactly one proposal may be
        outstanding.
        """
        with self._cmd_lock:
            if self.pending is not None:
                raise ProposalPendingError(
                    f"proposal {self.pending.id!r} is still outstanding"
                )
            edge = self.graph.edge(edge_id)
            if edge.src != self.current:
                raise WrongSourceError(
                    f"edge {edge_id!r} leaves {edge.src!r} but session is"
                    f" at {self.current!r}"
                )
            if edge.pruned:
                raise EdgePrunedError(f"edge {edge_id!r} is pruned")
            self._seq += 1
            proposal_id = f"p{self._seq}"
            proposal = Proposal(
                id=proposal_id, edge=edge.id, proposed_at=0.0, proposed_by=actor
            )

            def apply(event: SupervisionEvent) -> None:
                proposal.proposed_at = event.ts
                self.pending = proposal

            self._commit(
                PROPOSED,
                {"proposal": proposal_id, "edge": list(edge.id), "actor": actor},
                apply,
            )
            if self.mode is Mode.AUTONOMOUS:
                self._decide_locked(proposal, APPROVED_VERDICT, "dispatcher")
            return proposal

    def _decide_locked(self, proposal: Proposal, verdict: str, actor: str) -> None:
        kind = APPROVED if verdict == APPROVED_VERDICT else VETOED

        def apply(event: SupervisionEvent) -> None:
            proposal.decided = verdict
            proposal.decided_by = actor
            proposal.decided_at = event.ts
            if verdict == VETOED_VERDICT:
                self.pending = None

        self._commit(kind, {"proposal": proposal.id, "actor": actor}, apply)

    def decide(self, proposal_id: str, verdict: str, actor: str) -> Proposal:
        """Approve or veto the pending proposal. A veto clears it; state
        never changes on a veto."""
        if verdict not in (APPROVED_VERDICT, VETOED_VERDICT):
            raise ValueError(f"verdict must be approved or vetoed, got {verdict!r}")
        with self._cmd_lock:
            proposal = self.pending
            if proposal is None or proposal.id != proposal_id:
                raise UnknownProposalError(
                    f"no pending proposal with id {proposal_id!r}"
                )
            if proposal.decided is not None:
                raise AlreadyDecidedError(
                    f"proposal {proposal_id!r} already {proposal.decided}"
                )
            self._decide_locked(proposal, verdict, actor)
            return proposal

    def step(
        self,
        library: OperationLibrary,
        monitor: Optional[MonitorContext] = None,
    ) -> TransitionResult:
        """Execute the approved pending proposal.

        With a monitor on a non-degraded session: the scene must
        identify as the session's current state before dispatch
        (PreCheckFailedError otherwise), and must identify as the edge
        target afterwards. A post-check mismatch records a
        FailedTransition, re-identifies the session from the scene, and
        raises the "transition_failed" flag. Without a monitor, or
        degraded, the post-state is the edge target on trust.
        """
        with self._cmd_lock:
            if self.mode is Mode.AUTONOMOUS and self.flags.get(FLAG_TRANSITION_FAILED):
                raise FlagBlockedError(
                    "transition_failed is set; clear it before autonomous stepping"
                )
            proposal = self.pending
            if proposal is None or proposal.decided != APPROVED_VERDICT:
                raise NotApprovedError("no approved proposal to execute")
            edge = self.graph.edge(proposal.edge)
            handler = library.get(edge.op)
            checked = monitor is not None and not self.degraded
            pre_estimate: Optional[StateEstimate] = None
            if checked:
                pre_estimate = monitor.estimate()
                if pre_estimate.state != self.current:
                    raise PreCheckFailedError(
                        f"scene identifies as {pre_estimate.state!r} but session"
                        f" is at {self.current!r}"
                    )
            context = HandlerContext(
                edge=edge,
                session_id=self.session_id,
                scene=pre_estimate.scene if pre_estimate is not None else None,
                world=monitor.world if monitor is not None else None,
                confirmations=self.confirmations,
            )
            handler(context)
            source = self.current
            if checked:
                monitor.sample()
                post_estimate = monitor.estimate()
                if post_estimate.state != edge.dst:
                    observed = post_estimate.state

                    def apply_failed(event: SupervisionEvent) -> None:
                        if observed is not None:
                            self.current = observed
                        self.flags[FLAG_TRANSITION_FAILED] = True
                        self.pending = None

                    event = self._commit(
                        FAILED_TRANSITION,
                        {
                            "proposal": proposal.id,
                            "edge": list(edge.id),
                            "expected": edge.dst,
                            "observed": observed,
                            "current": self.current if observed is None else observed,
                        },
                        apply_failed,
                    )
                    return TransitionResult(
                        ok=False,
                        edge=edge.id,
                        source=source,
                        current=self.current,
                        estimate=post_estimate,
                        event=event,
                    )
            else:
                post_estimate = None

            def apply_executed(event: SupervisionEvent) -> None:
                self.current = edge.dst
                self.pending = None

            event = self._commit(
                EXECUTED,
                {
                    "proposal": proposal.id,
                    "edge": list(edge.id),
                    "from": source,
                    "to": edge.dst,
                },
                apply_executed,
            )
            return TransitionResult(
                ok=True,
                edge=edge.id,
                source=source,
                current=self.current,
                estimate=post_estimate,
                event=event,
            )

    def set_flag(self, name: str, value: bool, actor: str = "dispatcher") -> None:
        """Set or clear a named flag. "takeover" also switches the
        session to manual mode (recorded as its own event)."""
        with self._cmd_lock:

            def apply(event: SupervisionEvent) -> None:
                self.flags[name] = bool(value)

            self._commit(
                FLAG_SET, {"name": name, "value": bool(value), "actor": actor}, apply
            )
            if name == FLAG_TAKEOVER and value and self.mode is not Mode.MANUAL:

                def apply_mode(event: SupervisionEvent) -> None:
                    self.mode = Mode.MANUAL

                self._commit(
                    MODE_CHANGED, {"mode": Mode.MANUAL.value, "actor": actor}, apply_mode
                )

    def set_risky(self, edge_id: EdgeId, on: bool, actor: str = "supervisor") -> Edge:
        """Mark or unmark an edge risky on this session's graph."""
        with self._cmd_lock:
            edge = self.graph.edge(edge_id)

            def apply(event: SupervisionEvent) -> None:
                set_risky(self.graph, edge_id, on)

            self._commit(
                RISKY_SET,
                {"edge": list(edge.id), "on": bool(on), "actor": actor},
                apply,
            )
            return edge

    def record_alarm(self, alarm: Alarm) -> SupervisionEvent:
        with self._cmd_lock:
            return self._commit(
                ALARM,
                {
                    "kind": alarm.kind,
                    "previous": alarm.previous,
                    "new": alarm.new,
                    "dispatched": list(alarm.dispatched) if alarm.dispatched else None,
                },
            )

    def record_confirmation(self, token: str, actor: str) -> SupervisionEvent:
        # Deliberately not serialized with commands: the confirmation
        # that unblocks a waiting handler must be recordable while the
        # step holding the command lock is still in flight.
        return self._commit(CONFIRMED, {"token": token, "actor": actor})

    # --- reads -------------------------------------------------------------

    def wait_for_decision(
        self, proposal: Proposal, timeout: Optional[float] = None
    ) -> str:
        """Block until the given proposal is decided; returns the verdict."""
        with self._decision_cv:
            if not self._decision_cv.wait_for(
                lambda: proposal.decided is not None, timeout
            ):
                raise TimeoutError(
                    f"proposal {proposal.id!r} undecided after {timeout}s"
                )
            return proposal.decided  # type: ignore[return-value]

    def snapshot(self) -> dict:
        """A JSON-ready snapshot of everything that defines the session:
        identity, mode, position, flags, pending proposal, per-edge
        planning state, and full history. Two sessions with equal
        snapshots are interchangeable."""
        with self._field_lock:
            return {
                "session": self.session_id,
                "branch": self.branch.name,
                "mode": self.mode.value,
                "current": self.current,
                "degraded": self.degraded,
                "flags": {k: self.flags[k] for k in sorted(self.flags)},
                "pending": self.pending.to_json() if self.pending else None,
                "edges": [
                    [e.src, e.op, e.dst, e.cost, e.pruned, e.risky]
                    for e in sorted(self.graph.edges, key=lambda e: e.id)
                ],
                "history": [e.to_json() for e in self.history],
            }


def _counter_clock() -> Callable[[], float]:
    # Deterministic fallback clock: 1, 2, 3, ... per event.
    counter = {"n": 0.0}

    def clock() -> float:
        counter["n"] += 1.0
        return counter["n"]

    return clock


def create_session(
    branch: StateBranch,
    session_id: str,
    mode: Mode = Mode.SUPERVISED,
    initial: Optional[str] = None,
    graph: Optional[FsmGraph] = None,
    degraded: Optional[bool] = None,
    clock: Optional[Callable[[], float]] = None,
    sink: Optional[Callable[[SupervisionEvent], None]] = None,
    confirmations: Optional[ConfirmationHub] = None,
) -> ExecutionSession:
    """Open a session at the branch's initial state (or a chosen one)
    and record its creation event."""
    graph = graph if graph is not None else build_graph(branch)
    start = initial if initial is not None else branch.effective_initial()
    if start is None or not graph.has_node(start):
        raise UnknownNodeError(
            f"branch {branch.name!r} has no usable start state {start!r}"
        )
    if degraded is None:
        degraded = effective_fact_count(branch) is None
    session = ExecutionSession(
        session_id=session_id,
        branch=branch,
        graph=graph,
        mode=mode,
        current=start,
        degraded=degraded,
        clock=clock,
        sink=sink,
        confirmations=confirmations,
    )
    session._commit(
        SESSION_CREATED,
        {
            "branch": branch.name,
            "mode": mode.value,
            "initial": start,
            "degraded": degraded,
        },
    )
    return session


def run_plan(
    session: ExecutionSession,
    library: OperationLibrary,
    monitor: Optional[MonitorContext],
    plan: Path,
    decider: Optional[Callable[[ExecutionSession, Proposal], None]] = None,
    decision_timeout: Optional[float] = None,
) -> RunReport:
    """Walk a planned path edge by edge through the propose/decide/step
    gate.

    Each cycle advances the monitor clock one tick, delivers due replay
    readings, and compares the fresh estimate against the previous one;
    an unexplained change stops the run with an Alarm. A veto stops it
    with Vetoed, a pre/post check failure with Failed, and a raised
    "transition_failed" flag with FlagBlocked. In supervised or manual
    mode each proposal blocks until decided; ``decider`` (called with
    the session and the proposal) may supply the decision, otherwise
    some other actor must decide within ``decision_timeout`` seconds.

    Raises:
        PlanMismatchError: When the plan does not start at the session's
            current state.
    """
    if plan.edges and plan.edges[0][0] != session.current:
        raise PlanMismatchError(
            f"plan starts at {plan.edges[0][0]!r} but session is at"
            f" {session.current!r}"
        )
    executed: list[EdgeId] = []
    previous: Optional[StateEstimate] = None
    if monitor is not None and not session.degraded:
        monitor.deliver_due()
        previous = monitor.estimate()
    for edge_id in plan.edges:
        if session.flags.get(FLAG_TRANSITION_FAILED):
            return RunReport(
                executed,
                session.current,
                StopReason.FLAG_BLOCKED,
                "transition_failed flag is set",
            )
        if monitor is not None and not session.degraded:
            monitor.tick()
            monitor.deliver_due()
            estimate = monitor.estimate()
            if previous is not None:
                alarm = detect_unplanned_transition(previous, estimate, None)
                if alarm is not None:
                    session.record_alarm(alarm)
                    return RunReport(
                        executed, session.current, StopReason.ALARM, alarm.describe()
                    )
            previous = estimate
        proposal = session.propose(edge_id)
        if proposal.decided is None:
            if decider is not None:
                decider(session, proposal)
            verdict = session.wait_for_decision(proposal, decision_timeout)
        else:
            verdict = proposal.decided
        if verdict == VETOED_VERDICT:
            return RunReport(
                executed,
                session.current,
                StopReason.VETOED,
                f"proposal {proposal.id} vetoed",
            )
        try:
            result = session.step(library, monitor)
        except PreCheckFailedError as exc:
            return RunReport(executed, session.current, StopReason.FAILED, str(exc))
        if not result.ok:
            return RunReport(
                executed,
                session.current,
                StopReason.FAILED,
                f"post-check mismatch on {edge_id!r}",
            )
        executed.append(edge_id)
        if result.estimate is not None:
            previous = result.estimate
    return RunReport(executed, session.current, StopReason.COMPLETED, None)


def replay_session(
    branch: StateBranch, events: list[SupervisionEvent]
) -> ExecutionSession:
    """Rebuild a session purely from its event history.

    The first event must be the SessionCreated record. Events are
    applied structurally (no handlers run, no checks re-evaluated), so
    the result matches the live session that produced the log
    snapshot-for-snapshot.
    """
    if not events or events[0].kind != SESSION_CREATED:
        raise ValueError("event history must begin with SessionCreated")
    created = events[0]
    payload = created.payload
    if payload["branch"] != branch.name:
        raise ValueError(
            f"history is for branch {payload['branch']!r}, not {branch.name!r}"
        )
    session = ExecutionSession(
        session_id=created.session,
        branch=branch,
        graph=build_graph(branch),
        mode=Mode(payload["mode"]),
        current=payload["initial"],
        degraded=bool(payload["degraded"]),
    )
    session.history.append(created)
    session._last_ts = created.ts
    for event in events[1:]:
        _apply_replayed(session, event)
    return session


def _apply_replayed(session: ExecutionSession, event: SupervisionEvent) -> None:
    session.history.append(event)
    session._last_ts = max(session._last_ts, event.ts)
    kind = event.kind
    payload = event.payload
    if kind == PROPOSED:
        proposal = Proposal(
            id=payload["proposal"],
            edge=tuple(payload["edge"]),
            proposed_at=event.ts,
            proposed_by=payload["actor"],
        )
        session.pending = proposal
        # Keep the id counter ahead of every replayed proposal id.
        if proposal.id.startswith("p") and proposal.id[1:].isdigit():
            session._seq = max(session._seq, int(proposal.id[1:]))
    elif kind in (APPROVED, VETOED):
        proposal = session.pending
        if proposal is None or proposal.id != payload["proposal"]:
            raise ValueError(
                f"decision for {payload['proposal']!r} does not match history"
            )
        proposal.decided = (
            APPROVED_VERDICT if kind == APPROVED else VETOED_VERDICT
        )
        proposal.decided_by = payload["actor"]
        proposal.decided_at = event.ts
        if kind == VETOED:
            session.pending = None
    elif kind == EXECUTED:
        session.current = payload["to"]
        session.pending = None
    elif kind == FAILED_TRANSITION:
        session.current = payload["current"]
        session.flags[FLAG_TRANSITION_FAILED] = True
        session.pending = None
    elif kind == FLAG_SET:
        session.flags[payload["name"]] = bool(payload["value"])
    elif kind == MODE_CHANGED:
        session.mode = Mode(payload["mode"])
    elif kind == RISKY_SET:
        set_risky(session.graph, tuple(payload["edge"]), bool(payload["on"]))
    elif kind in (ALARM, CONFIRMED):
        pass
    else:
        raise ValueError(f"unknown event kind {kind!r}")
