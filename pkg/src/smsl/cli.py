"""Command-line interface.

Commands: validate, dot, plan, run, serve. Exit status is 0 on success,
1 on domain errors (malformed or invalid documents, unreachable goals,
runs that stop early), and 2 on usage errors (bad flags, names that are
not declared in the file).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .dispatch import (
    Mode,
    StopReason,
    create_session,
    make_oracle_library,
    run_plan,
)
from .document import SmslDocument, parse_smsl
from .errors import SmslError
from .graph import EdgeId, FsmGraph, build_graph, export_dot, prune_edge, shortest_path
from .monitor import MonitorContext, load_replay
from .validation import validate

__all__ = ["main", "run_cli"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smsl",
        description="Inspect, plan, execute, and serve SMSL workflow files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a file and print the report")
    p_validate.add_argument("file")

    p_dot = sub.add_parser("dot", help="print a branch's graph as DOT")
    p_dot.add_argument("file")
    p_dot.add_argument("--branch", help="branch name (optional for single-branch files)")

    p_plan = sub.add_parser("plan", help="print the cheapest path between two states")
    p_plan.add_argument("file")
    p_plan.add_argument("--branch")
    p_plan.add_argument("--from", dest="src", required=True, metavar="STATE")
    p_plan.add_argument("--to", dest="dst", required=True, metavar="STATE")
    p_plan.add_argument(
        "--prune",
        action="append",
        default=[],
        metavar="STATE:OP",
        help="exclude an edge (repeatable)",
    )

    p_run = sub.add_parser("run", help="plan and execute with oracle handlers")
    p_run.add_argument("file")
    p_run.add_argument("--branch")
    p_run.add_argument("--from", dest="src", required=True, metavar="STATE")
    p_run.add_argument("--to", dest="dst", required=True, metavar="STATE")
    p_run.add_argument(
        "--mode",
        choices=[m.value for m in Mode],
        default=Mode.AUTONOMOUS.value,
    )
    p_run.add_argument(
        "--sensors", metavar="REPLAY", help="sensor replay file to inject"
    )
    p_run.add_argument(
        "--prune", action="append", default=[], metavar="STATE:OP"
    )

    p_serve = sub.add_parser("serve", help="start the supervision service")
    p_serve.add_argument("--file", required=True)
    p_serve.add_argument("--bind", default="127.0.0.1:8000", metavar="HOST:PORT")
    p_serve.add_argument("--log", help="event log path (replayed on restart)")
    p_serve.add_argument(
        "--mode",
        choices=[m.value for m in Mode],
        default=Mode.SUPERVISED.value,
        help="default mode for new sessions",
    )
    p_serve.add_argument("--console", help="directory of built console assets")

    return parser


def _load(path: str) -> SmslDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_smsl(fh.read())


def _pick_branch(
    parser: argparse.ArgumentParser, doc: SmslDocument, name: Optional[str]
) -> str:
    names = list(doc.branch_names)
    if name is None:
        if len(names) == 1:
            return names[0]
        parser.error(
            f"--branch is required for files with {len(names)} branches"
        )
    if name not in doc.branches:
        parser.error(f"no branch named {name!r} (have: {', '.join(names)})")
    return name


def _require_state(
    parser: argparse.ArgumentParser, graph: FsmGraph, state: str
) -> None:
    if not graph.has_node(state):
        parser.error(f"state {state!r} is not declared in branch {graph.branch!r}")


def _parse_edge(parser: argparse.ArgumentParser, raw: str) -> EdgeId:
    if ":" not in raw:
        parser.error(f"edge must be STATE:OP, got {raw!r}")
    state, op = raw.split(":", 1)
    return (state, op)


def _apply_prunes(
    parser: argparse.ArgumentParser, graph: FsmGraph, prunes: list[str]
) -> None:
    for raw in prunes:
        edge_id = _parse_edge(parser, raw)
        try:
            prune_edge(graph, edge_id)
        except SmslError:
            parser.error(f"no edge {edge_id[0]}:{edge_id[1]} in branch {graph.branch!r}")


def _fmt_cost(cost: float) -> str:
    return f"{cost:g}"


def _cmd_validate(args: argparse.Namespace) -> int:
    doc = _load(args.file)
    report = validate(doc)
    n_branches = len(doc.branches)
    n_states = sum(len(b.states) for b in doc.branches.values())
    n_ops = sum(b.operation_count() for b in doc.branches.values())

    def plural(n: int, word: str, suffix: str = "s") -> str:
        return f"{n} {word}{suffix if n != 1 else ''}"

    counts = (
        f"{plural(n_branches, 'branch', 'es')}, {plural(n_states, 'state')},"
        f" {plural(n_ops, 'operation')}"
    )
    if report.ok:
        print(f"ok: {counts}")
    else:
        print(
            f"invalid: {plural(len(report.errors), 'error')},"
            f" {plural(len(report.warnings), 'warning')}"
        )
    for finding in report.findings:
        location = f" {finding.location}" if finding.location else ""
        print(f"{finding.severity} [{finding.branch}]{location}: {finding.message}")
    return 0 if report.ok else 1


def _cmd_dot(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = _load(args.file)
    branch = _pick_branch(parser, doc, args.branch)
    sys.stdout.write(export_dot(build_graph(doc.branch(branch))))
    return 0


def _cmd_plan(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = _load(args.file)
    branch = doc.branch(_pick_branch(parser, doc, args.branch))
    graph = build_graph(branch)
    _require_state(parser, graph, args.src)
    _require_state(parser, graph, args.dst)
    _apply_prunes(parser, graph, args.prune)
    path = shortest_path(graph, args.src, args.dst)
    if path is None:
        print(f"unreachable: no path from {args.src} to {args.dst}", file=sys.stderr)
        return 1
    for edge_id in path.edges:
        edge = graph.edge(edge_id)
        print(f"{edge.src} --{edge.op}--> {edge.dst}")
    print(f"total cost: {_fmt_cost(path.total_cost)}")
    return 0


def _cmd_run(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = _load(args.file)
    branch = doc.branch(_pick_branch(parser, doc, args.branch))
    graph = build_graph(branch)
    _require_state(parser, graph, args.src)
    _require_state(parser, graph, args.dst)
    _apply_prunes(parser, graph, args.prune)
    path = shortest_path(graph, args.src, args.dst)
    if path is None:
        print(f"unreachable: no path from {args.src} to {args.dst}", file=sys.stderr)
        return 1
    mode = Mode(args.mode)
    session = create_session(
        branch, session_id="cli", mode=mode, initial=args.src, graph=graph
    )
    monitor = None
    if not session.degraded:
        replay = load_replay(args.sensors) if args.sensors else None
        monitor = MonitorContext.for_branch(branch, args.src, replay=replay)
    library = make_oracle_library(branch)

    # The terminal operator fills both roles, so decisions in supervised
    # and manual runs are approved on the spot.
    def approve(sess, proposal):
        sess.decide(proposal.id, "approved", "cli")

    decider = None if mode is Mode.AUTONOMOUS else approve
    report = run_plan(session, library, monitor, path, decider=decider)
    print(f"plan: {len(path.edges)} edge{'s' if len(path.edges) != 1 else ''}")
    for edge_id in report.executed:
        edge = graph.edge(edge_id)
        print(f"executed: {edge.src} --{edge.op}--> {edge.dst}")
    print(f"final: {report.final}")
    print(f"stop: {report.stop.value}")
    if report.detail:
        print(f"detail: {report.detail}")
    print(f"events: {len(session.history)}")
    return 0 if report.stop is StopReason.COMPLETED else 1


def _cmd_serve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app, load_document

    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        parser.error(f"--bind must be HOST:PORT, got {args.bind!r}")
    doc, _report = load_document(args.file)
    app = create_app(
        ServiceConfig(
            document=doc,
            event_log=args.log,
            default_mode=Mode(args.mode),
            console_dir=args.console,
        )
    )
    try:
        uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    except OSError as exc:
        print(f"bind failed: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "dot":
            return _cmd_dot(parser, args)
        if args.command == "plan":
            return _cmd_plan(parser, args)
        if args.command == "run":
            return _cmd_run(parser, args)
        if args.command == "serve":
            return _cmd_serve(parser, args)
    except SmslError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command!r}")


def run_cli(argv: Optional[list[str]] = None) -> int:
    """Programmatic entry point mirroring the installed script."""
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
