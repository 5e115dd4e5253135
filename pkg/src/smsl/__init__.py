"""SMSL workflow toolkit.

Parse and validate State Machine Serialization Language documents, build
and plan over their graphs, execute them under supervision with a
simulated sensor network, and serve inspection and supervision over
HTTP.
"""

from .dispatch import (
    ConfirmationHub,
    ExecutionSession,
    Mode,
    OperationLibrary,
    Proposal,
    RunReport,
    StopReason,
    confirmation_gate,
    create_session,
    make_oracle_library,
    oracle_handler,
    register_operation,
    replay_session,
    run_plan,
)
from .document import (
    BranchHeader,
    SmslDocument,
    StateBranch,
    document_to_plain,
    parse_smsl,
    serialize_smsl,
)
from .errors import SmslError
from .graph import (
    Edge,
    EdgeId,
    FsmGraph,
    Path,
    build_graph,
    export_dot,
    prune_edge,
    reachable_from,
    restore_edge,
    set_edge_cost,
    set_risky,
    shortest_path,
)
from .monitor import (
    Alarm,
    MonitorContext,
    SensorMap,
    SensorReading,
    SensorStore,
    SimClock,
    SimulatedWorld,
    StateEstimate,
    aggregate,
    detect_unplanned_transition,
    load_replay,
    parse_replay,
)
from .statecheck import (
    FactConfig,
    FactPredicate,
    SceneSnapshot,
    StateCheckFunction,
    check_function_for,
    decode_state_name,
    effective_fact_count,
    hierarchical_fact,
    identify_state,
    state_check,
)
from .validation import Finding, ValidationReport, validate

__version__ = "0.1.0"
