"""The FSM graph: a multidigraph of states and operations.

Each operation of a branch becomes one directed edge identified by
(source state, operation name). Parallel edges and self-loops are
preserved exactly as declared. Edges carry a cost (default 1), a pruned
flag (excluded from planning), and a risky flag (risky implies pruned,
so routing bypasses risky operations).

Planning is Dijkstra with deterministic lexicographic tie-breaking, so
equal-cost alternatives always resolve the same way. Unreachable goals
are a value (None), not an error.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from .document import StateBranch
from .errors import NegativeCostError, UnknownEdgeError, UnknownNodeError

__all__ = [
    "EdgeId",
    "Edge",
    "Path",
    "FsmGraph",
    "build_graph",
    "shortest_path",
    "prune_edge",
    "restore_edge",
    "set_risky",
    "set_edge_cost",
    "reachable_from",
    "export_dot",
]

# An edge is identified by (source state, operation name).
EdgeId = tuple[str, str]


@dataclass
class Edge:
    src: str
    op: str
    dst: str
    cost: float = 1.0
    pruned: bool = False
    risky: bool = False

    @property
    def id(self) -> EdgeId:
        return (self.src, self.op)


@dataclass(frozen=True)
class Path:
    """An ordered chain of edge ids plus its total cost. Empty paths
    (from == to) have total_cost 0."""

    edges: tuple[EdgeId, ...]
    total_cost: float

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class FsmGraph:
    """States and operations of one branch in graph form."""

    branch: str
    _nodes: list[str] = field(default_factory=list)
    _edges: dict[EdgeId, Edge] = field(default_factory=dict)
    _out: dict[str, list[EdgeId]] = field(default_factory=dict)

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(self._nodes)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges.values())

    def has_node(self, state: str) -> bool:
        return state in self._out

    def add_node(self, state: str) -> None:
        if state not in self._out:
            self._nodes.append(state)
            self._out[state] = []

    def add_edge(self, src: str, op: str, dst: str, cost: float = 1.0) -> Edge:
        edge = Edge(src=src, op=op, dst=dst, cost=cost)
        self._edges[edge.id] = edge
        self._out[src].append(edge.id)
        return edge

    def edge(self, edge_id: EdgeId) -> Edge:
        try:
            return self._edges[tuple(edge_id)]
        except KeyError:
            raise UnknownEdgeError(f"no edge {tuple(edge_id)!r}") from None

    def _require_node(self, state: str) -> None:
        if state not in self._out:
            raise UnknownNodeError(
                f"branch {self.branch!r} has no state {state!r}"
            )

    def out_edges(self, state: str) -> list[Edge]:
        """All edges leaving a state, pruned or not, declaration order."""
        self._require_node(state)
        return [self._edges[eid] for eid in self._out[state]]

    def successors(self, state: str) -> list[Edge]:
        """Non-pruned edges leaving a state, declaration order."""
        return [e for e in self.out_edges(state) if not e.pruned]

    def copy(self) -> "FsmGraph":
        clone = FsmGraph(branch=self.branch)
        clone._nodes = list(self._nodes)
        clone._edges = {eid: replace(e) for eid, e in self._edges.items()}
        clone._out = {s: list(eids) for s, eids in self._out.items()}
        return clone


def build_graph(branch: StateBranch) -> FsmGraph:
    """Build the graph of a branch: one node per state, one edge per
    operation, all costs 1, nothing pruned."""
    graph = FsmGraph(branch=branch.name)
    for state in branch.states:
        graph.add_node(state)
    for state, ops in branch.states.items():
        for op, target in ops.items():
            # Targets are declared states after validation; tolerate
            # dangling ones here so inspection of invalid documents works.
            if not graph.has_node(target):
                graph.add_node(target)
            graph.add_edge(state, op, target)
    return graph


def prune_edge(graph: FsmGraph, edge_id: EdgeId) -> None:
    """Exclude an edge from successors and planned paths."""
    graph.edge(edge_id).pruned = True


def restore_edge(graph: FsmGraph, edge_id: EdgeId) -> None:
    """Re-admit an edge to planning, clearing any risky mark."""
    edge = graph.edge(edge_id)
    edge.pruned = False
    edge.risky = False


def set_risky(graph: FsmGraph, edge_id: EdgeId, on: bool) -> None:
    """Mark or unmark an edge risky. Risky implies pruned, so marking
    prunes and unmarking restores."""
    edge = graph.edge(edge_id)
    edge.risky = on
    edge.pruned = on


def set_edge_cost(graph: FsmGraph, edge_id: EdgeId, cost: float) -> None:
    """Set an edge's cost for subsequent planning."""
    if not math.isfinite(cost) or cost < 0:
        raise NegativeCostError(f"cost must be finite and >= 0, got {cost!r}")
    graph.edge(edge_id).cost = float(cost)


def _edge_cost(edge: Edge, recost: Optional[Callable[[Edge], float]]) -> float:
    if recost is None:
        return edge.cost
    cost = recost(edge)
    if not math.isfinite(cost) or cost < 0:
        raise NegativeCostError(
            f"recost hook returned {cost!r} for edge {edge.id!r}"
        )
    return cost


def shortest_path(
    graph: FsmGraph,
    src: str,
    dst: str,
    recost: Optional[Callable[[Edge], float]] = None,
) -> Optional[Path]:
    """Find a minimum-cost path over non-pruned edges.

    Dijkstra with deterministic tie-breaking: nodes settle in
    (distance, name) order and out-edges relax in (target, operation)
    order, so among equal-cost paths the lexicographically earliest is
    returned every time.

    Args:
        graph: The graph to plan over.
        src: Start state.
        dst: Goal state.
        recost: Optional hook giving each edge a planning-time cost,
            overriding the stored one for this call only.

    Returns:
        The path, or None when the goal is unreachable. src == dst
        yields the empty path with cost 0.

    Raises:
        UnknownNodeError: When src or dst is not a node.
        NegativeCostError: When a cost in play is negative or not finite.
    """
    graph._require_node(src)
    graph._require_node(dst)
    dist: dict[str, float] = {src: 0.0}
    pred: dict[str, EdgeId] = {}
    settled: set[str] = set()
    heap: list[tuple[float, str]] = [(0.0, src)]
    while heap:
        d, node = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        if node == dst:
            break
        for edge in sorted(graph.successors(node), key=lambda e: (e.dst, e.op)):
            if edge.dst in settled:
                continue
            candidate = d + _edge_cost(edge, recost)
            if candidate < dist.get(edge.dst, math.inf):
                dist[edge.dst] = candidate
                pred[edge.dst] = edge.id
                heapq.heappush(heap, (candidate, edge.dst))
    if dst not in settled:
        return None
    edges: list[EdgeId] = []
    node = dst
    while node != src:
        eid = pred[node]
        edges.append(eid)
        node = eid[0]
    edges.reverse()
    return Path(edges=tuple(edges), total_cost=dist[dst])


def reachable_from(graph: FsmGraph, src: str) -> set[str]:
    """All states reachable from src via non-pruned edges, src included."""
    graph._require_node(src)
    seen = {src}
    frontier = [src]
    while frontier:
        node = frontier.pop()
        for edge in graph.successors(node):
            if edge.dst not in seen:
                seen.add(edge.dst)
                frontier.append(edge.dst)
    return seen


def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_graph_name(name: str) -> str:
    if name and (name[0].isalpha() or name[0] == "_"):
        if all(c.isalnum() or c == "_" for c in name):
            return name
    return _dot_id(name)


def export_dot(graph: FsmGraph) -> str:
    """Emit the graph as Graphviz DOT text.

    One node statement per state and one labeled edge statement per
    operation, in declaration order. Pruned edges carry style=dashed,
    risky edges additionally color=red.
    """
    lines = [f"digraph {_dot_graph_name(graph.branch)} {{"]
    for node in graph._nodes:
        lines.append(f"  {_dot_id(node)};")
    for edge in graph._edges.values():
        attrs = [f"label={_dot_id(edge.op)}"]
        if edge.pruned:
            attrs.append("style=dashed")
        if edge.risky:
            attrs.append("color=red")
        lines.append(
            f"  {_dot_id(edge.src)} -> {_dot_id(edge.dst)} [{', '.join(attrs)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def edges_for_operation(graph: FsmGraph, op: str) -> list[Edge]:
    """Every edge labeled with the given operation name."""
    return [e for e in graph.edges if e.op == op]


def iter_edge_ids(graph: FsmGraph) -> Iterable[EdgeId]:
    return graph._edges.keys()
