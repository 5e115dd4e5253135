import json
import threading

import pytest

from smsl import (
    ExecutionSession,
    MonitorContext,
    Mode,
    OperationLibrary,
    create_session,
    make_oracle_library,
    parse_smsl,
    replay_session,
    run_plan,
    shortest_path,
)
from smsl.dispatch import (
    FLAG_TAKEOVER,
    FLAG_TRANSITION_FAILED,
    ConfirmationHub,
    HandlerContext,
    StopReason,
    confirmation_gate,
    oracle_handler,
    register_operation,
)
from smsl.errors import (
    AlreadyDecidedError,
    DuplicateNameError,
    EdgePrunedError,
    FlagBlockedError,
    MissingOperationError,
    NotApprovedError,
    PlanMismatchError,
    PreCheckFailedError,
    ProposalPendingError,
    UnknownNodeError,
    UnknownProposalError,
    WrongSourceError,
)
from smsl.graph import build_graph, prune_edge
from smsl.monitor import Alarm, SimulatedWorld, parse_replay

import oracles
from conftest import HANOI, REGISTRATION


@pytest.fixture
def hanoi_branch(hanoi_doc):
    return hanoi_doc.branch("SB1")


@pytest.fixture
def reg_branch(registration_doc):
    return registration_doc.branch("REGISTRATION")


@pytest.fixture
def degraded_doc():
    return parse_smsl('{"B": {"Begin": {"Op_go": "Finish"}, "Finish": {}}}')


def supervised_session(branch, **kwargs):
    return create_session(branch, session_id="s1", mode=Mode.SUPERVISED, **kwargs)


def monitored(branch, state):
    return MonitorContext.for_branch(branch, state)


def approve_all(session, proposal):
    session.decide(proposal.id, "approved", actor="supervisor")


class TestOperationLibrary:
    def test_register_and_get(self):
        lib = OperationLibrary()
        handler = lambda ctx: None
        lib.register("Op_go", handler)
        assert lib.get("Op_go") is handler
        assert "Op_go" in lib
        assert len(lib) == 1

    def test_duplicate_rejected_unless_replace(self):
        lib = OperationLibrary()
        lib.register("Op_go", lambda ctx: None)
        with pytest.raises(DuplicateNameError):
            lib.register("Op_go", lambda ctx: None)
        replacement = lambda ctx: None
        lib.register("Op_go", replacement, replace=True)
        assert lib.get("Op_go") is replacement

    def test_missing_operation(self):
        with pytest.raises(MissingOperationError):
            OperationLibrary().get("Op_ghost")

    def test_names_sorted(self):
        lib = OperationLibrary()
        for name in ("Op_c", "Op_a", "Op_b"):
            lib.register(name, lambda ctx: None)
        assert lib.names() == ["Op_a", "Op_b", "Op_c"]

    def test_register_operation_chains(self):
        lib = register_operation(OperationLibrary(), "Op_go", lambda ctx: None)
        assert "Op_go" in lib

    @pytest.mark.parametrize(
        "path,branch_name,fixture",
        [(HANOI, "SB1", "hanoi_branch"), (REGISTRATION, "REGISTRATION", "reg_branch")],
    )
    def test_oracle_library_covers_distinct_operations(
        self, path, branch_name, fixture, request
    ):
        branch = request.getfixturevalue(fixture)
        raw = oracles.load_listing(str(path))
        distinct = oracles.distinct_operations(raw, branch_name)
        lib = make_oracle_library(branch)
        assert len(lib) == len(distinct)
        assert set(lib.names()) == distinct


class TestOracleHandler:
    def test_drives_world_to_target(self, hanoi_branch):
        world = SimulatedWorld.at_state(hanoi_branch, "State_aaa")
        graph = build_graph(hanoi_branch)
        edge = graph.edge(("State_aaa", "Op_1c"))
        oracle_handler(HandlerContext(edge=edge, session_id="s1", world=world))
        assert world.facts == ["c", "a", "a"]

    def test_tolerates_missing_world(self, hanoi_branch):
        graph = build_graph(hanoi_branch)
        edge = graph.edge(("State_aaa", "Op_1c"))
        oracle_handler(HandlerContext(edge=edge, session_id="s1", world=None))


class TestConfirmationHub:
    def test_confirm_without_waiter_rejected(self):
        with pytest.raises(Exception) as err:
            ConfirmationHub().confirm("go")
        assert "go" in str(err.value)

    def test_wait_released_by_confirm(self):
        hub = ConfirmationHub()
        results = []
        waiter = threading.Thread(target=lambda: results.append(hub.wait("go", 5.0)))
        waiter.start()
        deadline = threading.Event()
        while not hub.waiting():
            assert not deadline.wait(0.01)
        assert hub.waiting() == ["go"]
        hub.confirm("go")
        waiter.join(timeout=5.0)
        assert results == [True]
        assert hub.waiting() == []

    def test_second_wait_on_same_token_rejected(self):
        hub = ConfirmationHub()
        waiter = threading.Thread(target=lambda: hub.wait("go", 5.0))
        waiter.start()
        while not hub.waiting():
            pass
        with pytest.raises(DuplicateNameError):
            hub.wait("go")
        hub.confirm("go")
        waiter.join(timeout=5.0)

    def test_wait_timeout_returns_false(self):
        assert ConfirmationHub().wait("go", timeout=0.01) is False

    def test_gate_calls_inner_after_confirmation(self, hanoi_branch):
        hub = ConfirmationHub()
        world = SimulatedWorld.at_state(hanoi_branch, "State_aaa")
        graph = build_graph(hanoi_branch)
        edge = graph.edge(("State_aaa", "Op_1c"))
        ctx = HandlerContext(
            edge=edge, session_id="s1", world=world, confirmations=hub
        )
        handler = confirmation_gate("go")
        runner = threading.Thread(target=handler, args=(ctx,))
        runner.start()
        while not hub.waiting():
            pass
        assert world.facts == ["a", "a", "a"]
        hub.confirm("go")
        runner.join(timeout=5.0)
        assert world.facts == ["c", "a", "a"]

    def test_gate_skips_wait_without_hub(self, hanoi_branch):
        world = SimulatedWorld.at_state(hanoi_branch, "State_aaa")
        graph = build_graph(hanoi_branch)
        edge = graph.edge(("State_aaa", "Op_1c"))
        confirmation_gate("go")(
            HandlerContext(edge=edge, session_id="s1", world=world)
        )
        assert world.facts == ["c", "a", "a"]


class TestCreateSession:
    def test_starts_at_effective_initial(self, reg_branch):
        session = supervised_session(reg_branch)
        assert session.current == "State_0000"
        assert not session.degraded
        assert [e.kind for e in session.history] == ["SessionCreated"]
        created = session.history[0]
        assert created.payload == {
            "branch": "REGISTRATION",
            "mode": "supervised",
            "initial": "State_0000",
            "degraded": False,
        }

    def test_explicit_initial(self, hanoi_branch):
        session = supervised_session(hanoi_branch, initial="State_cab")
        assert session.current == "State_cab"

    def test_unknown_initial_rejected(self, hanoi_branch):
        with pytest.raises(UnknownNodeError):
            supervised_session(hanoi_branch, initial="State_zzz")

    def test_degraded_autodetected(self, degraded_doc):
        session = supervised_session(degraded_doc.branch("B"))
        assert session.degraded
        assert session.history[0].payload["degraded"] is True


class TestPropose:
    def test_records_two_ids_in_order(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        first = session.propose(("State_aaa", "Op_1c"), actor="supervisor")
        assert first.id == "p1"
        session.decide("p1", "vetoed", actor="supervisor")
        second = session.propose(("State_aaa", "Op_1b"), actor="supervisor")
        assert second.id == "p2"

    def test_pending_carries_event_timestamp(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        assert proposal.proposed_at == session.history[-1].ts
        assert session.pending is proposal

    def test_second_proposal_blocked(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        session.propose(("State_aaa", "Op_1c"))
        with pytest.raises(ProposalPendingError):
            session.propose(("State_aaa", "Op_1b"))

    def test_wrong_source_rejected(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        with pytest.raises(WrongSourceError):
            session.propose(("State_caa", "Op_2b"))

    def test_pruned_edge_rejected(self, hanoi_branch):
        graph = build_graph(hanoi_branch)
        prune_edge(graph, ("State_aaa", "Op_1c"))
        session = supervised_session(hanoi_branch, graph=graph)
        with pytest.raises(EdgePrunedError):
            session.propose(("State_aaa", "Op_1c"))

    def test_autonomous_approves_on_the_spot(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        proposal = session.propose(("State_aaa", "Op_1c"))
        assert proposal.decided == "approved"
        assert proposal.decided_by == "dispatcher"
        assert [e.kind for e in session.history] == [
            "SessionCreated",
            "Proposed",
            "Approved",
        ]


class TestDecide:
    def test_approve_marks_proposal(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        assert proposal.decided == "approved"
        assert proposal.decided_by == "alex"
        assert proposal.decided_at == session.history[-1].ts
        assert session.pending is proposal

    def test_veto_clears_pending_keeps_state(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "vetoed", actor="alex")
        assert session.pending is None
        assert session.current == "State_aaa"
        assert session.history[-1].kind == "Vetoed"

    def test_unknown_proposal(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        with pytest.raises(UnknownProposalError):
            session.decide("p9", "approved", actor="alex")

    def test_double_decision_rejected(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        with pytest.raises(AlreadyDecidedError):
            session.decide(proposal.id, "vetoed", actor="alex")

    def test_bad_verdict_rejected(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        session.propose(("State_aaa", "Op_1c"))
        with pytest.raises(ValueError):
            session.decide("p1", "maybe", actor="alex")

    def test_wait_for_decision_blocks_until_decided(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        decider = threading.Timer(
            0.05, session.decide, args=(proposal.id, "approved", "alex")
        )
        decider.start()
        assert session.wait_for_decision(proposal, timeout=5.0) == "approved"
        decider.join()

    def test_wait_for_decision_times_out(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        with pytest.raises(TimeoutError):
            session.wait_for_decision(proposal, timeout=0.01)


class TestStep:
    def test_checked_step_moves_session(self, hanoi_branch):
        monitor = monitored(hanoi_branch, "State_aaa")
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        result = session.step(make_oracle_library(hanoi_branch), monitor)
        assert result.ok
        assert result.source == "State_aaa"
        assert session.current == "State_caa"
        assert result.estimate.state == "State_caa"
        assert session.pending is None
        executed = session.history[-1]
        assert executed.kind == "Executed"
        assert executed.payload == {
            "proposal": "p1",
            "edge": ["State_aaa", "Op_1c"],
            "from": "State_aaa",
            "to": "State_caa",
        }

    def test_unapproved_step_rejected(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        lib = make_oracle_library(hanoi_branch)
        with pytest.raises(NotApprovedError):
            session.step(lib)
        session.propose(("State_aaa", "Op_1c"))
        with pytest.raises(NotApprovedError):
            session.step(lib)

    def test_monitorless_step_trusts_edge_target(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        result = session.step(make_oracle_library(hanoi_branch))
        assert result.ok
        assert result.estimate is None
        assert session.current == "State_caa"

    def test_degraded_step_trusts_edge_target(self, degraded_doc):
        branch = degraded_doc.branch("B")
        session = create_session(branch, session_id="s1", mode=Mode.AUTONOMOUS)
        session.propose(("Begin", "Op_go"))
        result = session.step(make_oracle_library(branch))
        assert result.ok
        assert session.current == "Finish"

    def test_pre_check_failure(self, hanoi_branch):
        # the scene disagrees with the session before dispatch
        monitor = monitored(hanoi_branch, "State_baa")
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        with pytest.raises(PreCheckFailedError):
            session.step(make_oracle_library(hanoi_branch), monitor)
        # nothing moved, nothing recorded past the approval
        assert session.current == "State_aaa"
        assert session.history[-1].kind == "Approved"

    def test_post_check_failure_reidentifies(self, hanoi_branch):
        monitor = monitored(hanoi_branch, "State_aaa")
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        broken = OperationLibrary()
        broken.register("Op_1c", lambda ctx: None)  # actuator does nothing
        result = session.step(broken, monitor)
        assert not result.ok
        assert session.current == "State_aaa"  # re-identified from the scene
        assert session.flags[FLAG_TRANSITION_FAILED] is True
        assert session.pending is None
        failed = session.history[-1]
        assert failed.kind == "FailedTransition"
        assert failed.payload == {
            "proposal": "p1",
            "edge": ["State_aaa", "Op_1c"],
            "expected": "State_caa",
            "observed": "State_aaa",
            "current": "State_aaa",
        }

    def test_post_check_unknown_keeps_position(self, hanoi_branch):
        monitor = monitored(hanoi_branch, "State_aaa")
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        scrambler = OperationLibrary()
        scrambler.register(
            "Op_1c", lambda ctx: ctx.world.set_facts(("q", "q", "q"))
        )
        result = session.step(scrambler, monitor)
        assert not result.ok
        assert result.estimate.state is None
        assert session.current == "State_aaa"
        assert session.history[-1].payload["observed"] is None

    def test_autonomous_step_blocked_by_failed_flag(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        session.propose(("State_aaa", "Op_1c"))
        session.set_flag(FLAG_TRANSITION_FAILED, True, actor="supervisor")
        with pytest.raises(FlagBlockedError):
            session.step(make_oracle_library(hanoi_branch))

    def test_supervised_step_ignores_failed_flag(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        session.set_flag(FLAG_TRANSITION_FAILED, True, actor="supervisor")
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        result = session.step(make_oracle_library(hanoi_branch))
        assert result.ok


class TestFlagsAndRisky:
    def test_plain_flag_set_and_clear(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        session.set_flag("paused", True, actor="alex")
        assert session.flags == {"paused": True}
        session.set_flag("paused", False, actor="alex")
        assert session.flags == {"paused": False}
        kinds = [e.kind for e in session.history]
        assert kinds == ["SessionCreated", "FlagSet", "FlagSet"]

    def test_takeover_switches_to_manual(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        session.set_flag(FLAG_TAKEOVER, True, actor="alex")
        assert session.mode is Mode.MANUAL
        assert [e.kind for e in session.history[-2:]] == ["FlagSet", "ModeChanged"]
        assert session.history[-1].payload == {"mode": "manual", "actor": "alex"}

    def test_takeover_when_already_manual_records_no_mode_change(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.MANUAL)
        session.set_flag(FLAG_TAKEOVER, True, actor="alex")
        assert [e.kind for e in session.history] == ["SessionCreated", "FlagSet"]

    def test_clearing_takeover_keeps_mode(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        session.set_flag(FLAG_TAKEOVER, True, actor="alex")
        session.set_flag(FLAG_TAKEOVER, False, actor="alex")
        assert session.mode is Mode.MANUAL

    def test_set_risky_prunes_for_proposals(self, reg_branch):
        session = supervised_session(reg_branch)
        session.set_risky(("State_0000", "Op_UsePrevReg"), True, actor="alex")
        edge = session.graph.edge(("State_0000", "Op_UsePrevReg"))
        assert edge.risky and edge.pruned
        assert session.history[-1].kind == "RiskySet"
        with pytest.raises(EdgePrunedError):
            session.propose(("State_0000", "Op_UsePrevReg"))

    def test_record_alarm_and_confirmation(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        session.record_alarm(
            Alarm(
                kind="UnplannedTransition",
                previous="State_aaa",
                new="State_caa",
                dispatched=None,
            )
        )
        session.record_confirmation("go", actor="alex")
        kinds = [e.kind for e in session.history]
        assert kinds == ["SessionCreated", "Alarm", "Confirmed"]
        assert session.history[1].payload["dispatched"] is None


class TestRunPlan:
    def plan_for(self, branch, session, src, dst):
        return shortest_path(session.graph, src, dst)

    def test_autonomous_hanoi_run(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        monitor = monitored(hanoi_branch, "State_aaa")
        plan = self.plan_for(hanoi_branch, session, "State_aaa", "State_ccc")
        report = run_plan(session, make_oracle_library(hanoi_branch), monitor, plan)
        assert report.stop is StopReason.COMPLETED
        assert report.final == "State_ccc"
        assert report.executed == list(plan.edges)
        kinds = [e.kind for e in session.history]
        assert kinds.count("Executed") == 7
        assert len(kinds) == 1 + 7 * 3

    def test_supervised_run_with_decider(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        monitor = monitored(hanoi_branch, "State_aaa")
        plan = self.plan_for(hanoi_branch, session, "State_aaa", "State_ccc")
        report = run_plan(
            session,
            make_oracle_library(hanoi_branch),
            monitor,
            plan,
            decider=approve_all,
        )
        assert report.stop is StopReason.COMPLETED
        assert session.current == "State_ccc"

    def test_veto_stops_run(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        monitor = monitored(hanoi_branch, "State_aaa")
        plan = self.plan_for(hanoi_branch, session, "State_aaa", "State_ccc")

        def veto_second(sess, proposal):
            verdict = "vetoed" if proposal.id == "p2" else "approved"
            sess.decide(proposal.id, verdict, actor="alex")

        report = run_plan(
            session,
            make_oracle_library(hanoi_branch),
            monitor,
            plan,
            decider=veto_second,
        )
        assert report.stop is StopReason.VETOED
        assert report.executed == [("State_aaa", "Op_1c")]
        assert report.final == "State_caa"

    def test_empty_plan_completes(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        plan = self.plan_for(hanoi_branch, session, "State_aaa", "State_aaa")
        report = run_plan(session, make_oracle_library(hanoi_branch), None, plan)
        assert report.stop is StopReason.COMPLETED
        assert report.executed == []

    def test_plan_must_start_at_current(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        plan = self.plan_for(hanoi_branch, session, "State_caa", "State_ccc")
        with pytest.raises(PlanMismatchError):
            run_plan(session, make_oracle_library(hanoi_branch), None, plan)

    def test_failed_flag_blocks_before_first_edge(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        session.set_flag(FLAG_TRANSITION_FAILED, True)
        plan = self.plan_for(hanoi_branch, session, "State_aaa", "State_ccc")
        report = run_plan(session, make_oracle_library(hanoi_branch), None, plan)
        assert report.stop is StopReason.FLAG_BLOCKED
        assert report.executed == []

    def test_degraded_run_on_trust(self, degraded_doc):
        branch = degraded_doc.branch("B")
        session = create_session(branch, session_id="s1", mode=Mode.AUTONOMOUS)
        plan = shortest_path(session.graph, "Begin", "Finish")
        report = run_plan(session, make_oracle_library(branch), None, plan)
        assert report.stop is StopReason.COMPLETED
        assert report.final == "Finish"

    def test_post_check_failure_stops_run(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        monitor = monitored(hanoi_branch, "State_aaa")
        plan = self.plan_for(hanoi_branch, session, "State_aaa", "State_ccc")
        broken = make_oracle_library(hanoi_branch)
        broken.register("Op_2b", lambda ctx: None, replace=True)
        report = run_plan(session, broken, monitor, plan)
        assert report.stop is StopReason.FAILED
        assert report.executed == [("State_aaa", "Op_1c")]
        assert session.flags[FLAG_TRANSITION_FAILED] is True

    def test_scripted_drift_raises_alarm(self, hanoi_branch):
        # a scripted reading flips fact 2 between cycles; the estimate
        # moves with nothing dispatched and the run stops on the alarm
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        monitor = MonitorContext.for_branch(
            hanoi_branch, "State_aaa", replay=parse_replay("fact2 b 1.5\n")
        )
        plan = self.plan_for(hanoi_branch, session, "State_aaa", "State_ccc")
        report = run_plan(session, make_oracle_library(hanoi_branch), monitor, plan)
        assert report.stop is StopReason.ALARM
        assert report.executed == [("State_aaa", "Op_1c")]
        assert "no dispatched operation" in report.detail
        alarm = session.history[-1]
        assert alarm.kind == "Alarm"
        assert alarm.payload == {
            "kind": "UnplannedTransition",
            "previous": "State_caa",
            "new": "State_cab",
            "dispatched": None,
        }

    def test_undecided_proposal_times_out(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        plan = self.plan_for(hanoi_branch, session, "State_aaa", "State_ccc")
        with pytest.raises(TimeoutError):
            run_plan(
                session,
                make_oracle_library(hanoi_branch),
                None,
                plan,
                decision_timeout=0.01,
            )


def snapshots_equal(a, b):
    return json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestReplaySession:
    def test_autonomous_run_replays_bit_for_bit(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        monitor = monitored(hanoi_branch, "State_aaa")
        plan = shortest_path(session.graph, "State_aaa", "State_ccc")
        run_plan(session, make_oracle_library(hanoi_branch), monitor, plan)
        twin = replay_session(hanoi_branch, session.history)
        assert snapshots_equal(session.snapshot(), twin.snapshot())

    def test_eventful_session_replays_bit_for_bit(self, reg_branch):
        session = supervised_session(reg_branch)
        session.set_risky(("State_0000", "Op_UsePrevReg"), True, actor="alex")
        first = session.propose(("State_0000", "Op_PlanLandmarks"), actor="alex")
        session.decide(first.id, "vetoed", actor="alex")
        second = session.propose(("State_0000", "Op_PlanLandmarks"), actor="alex")
        session.decide(second.id, "approved", actor="alex")
        session.step(make_oracle_library(reg_branch))
        session.set_flag("paused", True, actor="alex")
        session.set_flag(FLAG_TAKEOVER, True, actor="alex")
        third = session.propose(("State_1000", "Op_DigitizeLandmarks"), actor="alex")
        twin = replay_session(reg_branch, session.history)
        assert snapshots_equal(session.snapshot(), twin.snapshot())
        assert twin.mode is Mode.MANUAL
        assert twin.pending.id == third.id
        assert twin.graph.edge(("State_0000", "Op_UsePrevReg")).risky

    def test_failed_transition_replays_bit_for_bit(self, hanoi_branch):
        monitor = monitored(hanoi_branch, "State_aaa")
        session = supervised_session(hanoi_branch)
        proposal = session.propose(("State_aaa", "Op_1c"))
        session.decide(proposal.id, "approved", actor="alex")
        broken = OperationLibrary()
        broken.register("Op_1c", lambda ctx: None)
        session.step(broken, monitor)
        twin = replay_session(hanoi_branch, session.history)
        assert snapshots_equal(session.snapshot(), twin.snapshot())
        assert twin.flags[FLAG_TRANSITION_FAILED] is True

    def test_replayed_session_can_continue(self, hanoi_branch):
        session = create_session(hanoi_branch, session_id="s1", mode=Mode.AUTONOMOUS)
        session.propose(("State_aaa", "Op_1c"))
        session.step(make_oracle_library(hanoi_branch))
        twin = replay_session(hanoi_branch, session.history)
        follow_up = twin.propose(("State_caa", "Op_2b"))
        assert follow_up.id == "p2"  # id counter continues past the replay

    def test_replay_rejects_bad_histories(self, hanoi_branch, reg_branch):
        with pytest.raises(ValueError):
            replay_session(hanoi_branch, [])
        session = supervised_session(hanoi_branch)
        session.propose(("State_aaa", "Op_1c"))
        with pytest.raises(ValueError):
            replay_session(hanoi_branch, session.history[1:])
        with pytest.raises(ValueError):
            replay_session(reg_branch, session.history)


class TestSnapshot:
    def test_shape(self, hanoi_branch):
        session = supervised_session(hanoi_branch)
        session.set_flag("paused", True)
        proposal = session.propose(("State_aaa", "Op_1c"))
        snap = session.snapshot()
        assert snap["session"] == "s1"
        assert snap["branch"] == "SB1"
        assert snap["mode"] == "supervised"
        assert snap["current"] == "State_aaa"
        assert snap["degraded"] is False
        assert snap["flags"] == {"paused": True}
        assert snap["pending"]["id"] == proposal.id
        assert len(snap["edges"]) == 78
        assert snap["edges"] == sorted(snap["edges"], key=lambda e: (e[0], e[1]))
        assert len(snap["history"]) == len(session.history)

    def test_snapshot_readable_while_handler_blocks(self, hanoi_branch):
        # a human-in-loop handler must not freeze inspection
        hub = ConfirmationHub()
        monitor = monitored(hanoi_branch, "State_aaa")
        session = create_session(
            hanoi_branch,
            session_id="s1",
            mode=Mode.AUTONOMOUS,
            confirmations=hub,
        )
        lib = make_oracle_library(hanoi_branch)
        lib.register("Op_1c", confirmation_gate("go"), replace=True)
        session.propose(("State_aaa", "Op_1c"))
        stepper = threading.Thread(target=session.step, args=(lib, monitor))
        stepper.start()
        while not hub.waiting():
            pass
        snap = session.snapshot()  # must not deadlock
        assert snap["current"] == "State_aaa"
        session.record_confirmation("go", actor="alex")
        hub.confirm("go")
        stepper.join(timeout=5.0)
        assert session.current == "State_caa"
