"""Request and response bodies for the supervision API."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class FindingModel(BaseModel):
    severity: str
    branch: str
    location: str
    message: str
    code: str


class ValidationModel(BaseModel):
    ok: bool
    findings: list[FindingModel]


class EdgeModel(BaseModel):
    src: str
    op: str
    dst: str
    cost: float
    pruned: bool
    risky: bool


class GraphModel(BaseModel):
    branch: str
    nodes: list[str]
    edges: list[EdgeModel]


class FullViewModel(BaseModel):
    """Inspection payload: the whole blueprint for one branch."""

    branch: str
    document: dict[str, Any]
    graph: GraphModel
    validation: ValidationModel
    dot: str


class SceneModel(BaseModel):
    branch: str
    values: list[Optional[str]]
    as_of: float


class ProposalModel(BaseModel):
    id: str
    edge: tuple[str, str]
    proposed_at: float
    proposed_by: str
    decided: Optional[str] = None
    decided_by: Optional[str] = None
    decided_at: Optional[float] = None


class OutEdgeModel(BaseModel):
    op: str
    target: str
    cost: float
    pruned: bool
    risky: bool


class AlarmModel(BaseModel):
    kind: str
    previous: Optional[str] = None
    new: Optional[str] = None
    dispatched: Optional[tuple[str, str]] = None


class PartialViewModel(BaseModel):
    """Supervision payload: the current state and one hop forward,
    nothing else."""

    session: str
    branch: str
    mode: str
    current: str
    degraded: bool
    scene: Optional[SceneModel] = None
    stale_facts: list[int] = Field(default_factory=list)
    estimate_state: Optional[str] = None
    out_edges: list[OutEdgeModel] = Field(default_factory=list)
    in_edges: Optional[list[EdgeModel]] = None
    pending: Optional[ProposalModel] = None
    flags: dict[str, bool] = Field(default_factory=dict)
    alarms: list[AlarmModel] = Field(default_factory=list)
    awaiting_confirmation: list[str] = Field(default_factory=list)
    prediction: Optional[str] = None


class SessionSummary(BaseModel):
    session: str
    branch: str
    mode: str
    current: str
    degraded: bool


class CreateSessionRequest(BaseModel):
    branch: str
    mode: Optional[str] = None
    initial: Optional[str] = None


class ProposeRequest(BaseModel):
    edge: tuple[str, str]
    actor: str = "supervisor"


class StepOutcome(BaseModel):
    ok: bool
    current: str
    estimate_state: Optional[str] = None
    error: Optional[str] = None


class ProposeResponse(BaseModel):
    proposal: ProposalModel
    current: str
    step: Optional[StepOutcome] = None


class DecideRequest(BaseModel):
    proposal: str
    verdict: str
    actor: str = "supervisor"


class DecideResponse(BaseModel):
    proposal: ProposalModel
    current: str
    step: Optional[StepOutcome] = None


class RiskyRequest(BaseModel):
    edge: tuple[str, str]
    on: bool = True
    actor: str = "supervisor"


class RiskyResponse(BaseModel):
    edge: tuple[str, str]
    risky: bool
    pruned: bool


class FlagRequest(BaseModel):
    name: str
    value: bool
    actor: str = "supervisor"


class FlagResponse(BaseModel):
    flags: dict[str, bool]
    mode: str


class ConfirmRequest(BaseModel):
    token: str
    actor: str = "supervisor"


class ConfirmResponse(BaseModel):
    token: str
    confirmed: bool = True


class ErrorBody(BaseModel):
    error: str
    detail: str
