"""Structural validation of parsed documents.

Validation never raises; every problem becomes a finding. Errors mark
rule violations that break planning or identification (dangling targets,
broken hierarchy bindings, ambiguous configurations). Warnings mark
smells worth a look during inspection (unreachable states, empty
branches, header fields this toolkit does not know).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .document import SmslDocument, StateBranch
from .statecheck import decode_state_name

__all__ = ["Finding", "ValidationReport", "validate"]

# Finding codes, error severity
MISSING_TARGET = "MissingTarget"
MISSING_SUB_BRANCH = "MissingSubBranch"
FACT_INDEX_OUT_OF_RANGE = "FactIndexOutOfRange"
MISSING_INITIAL = "MissingInitial"
MISSING_ACTIVATING = "MissingActivating"
DUPLICATE_CONFIG = "DuplicateConfig"
FACT_COUNT_MISMATCH = "FactCountMismatch"
# Finding codes, warning severity
UNREACHABLE_STATE = "UnreachableState"
EMPTY_BRANCH = "EmptyBranch"
UNKNOWN_HEADER_FIELD = "UnknownHeaderField"


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    branch: str
    location: str
    message: str
    code: str


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True iff no finding is an error."""
        return all(f.severity != "error" for f in self.findings)

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]


def _reachable_states(branch: StateBranch, start: str) -> set[str]:
    seen = {start}
    frontier = [start]
    while frontier:
        state = frontier.pop()
        for target in branch.states.get(state, {}).values():
            if target in branch.states and target not in seen:
                seen.add(target)
                frontier.append(target)
    return seen


def _validate_branch(doc: SmslDocument, branch: StateBranch, out: list[Finding]) -> None:
    header = branch.header

    def error(location: str, message: str, code: str) -> None:
        out.append(Finding("error", branch.name, location, message, code))

    def warning(location: str, message: str, code: str) -> None:
        out.append(Finding("warning", branch.name, location, message, code))

    if not branch.states:
        warning("", "branch declares no states", EMPTY_BRANCH)

    for state, ops in branch.states.items():
        for op, target in ops.items():
            if target not in branch.states:
                error(
                    state,
                    f"operation {op!r} targets undeclared state {target!r}",
                    MISSING_TARGET,
                )

    if header.initial is not None and header.initial not in branch.states:
        error(
            "HEADER.INITIAL",
            f"initial state {header.initial!r} is not declared",
            MISSING_INITIAL,
        )
    if header.activating is not None and header.activating not in branch.states:
        error(
            "HEADER.ACTIVATING",
            f"activating state {header.activating!r} is not declared",
            MISSING_ACTIVATING,
        )

    for sub_name, index in header.sub_branches.items():
        if sub_name not in doc.branches:
            error(
                "HEADER.SUB_SBS",
                f"sub-branch {sub_name!r} is not a branch of this document",
                MISSING_SUB_BRANCH,
            )
        if header.num_facts is not None and index >= header.num_facts:
            error(
                "HEADER.SUB_SBS",
                f"fact index {index} for sub-branch {sub_name!r} is out of"
                f" range for {header.num_facts} facts",
                FACT_INDEX_OUT_OF_RANGE,
            )

    # Configuration checks apply only where decoding succeeds.
    seen_configs: dict[tuple[str, ...], str] = {}
    for state in branch.states:
        config = decode_state_name(state)
        if config is None:
            continue
        if header.num_facts is not None and len(config) != header.num_facts:
            error(
                state,
                f"name encodes {len(config)} facts but HEADER declares"
                f" {header.num_facts}",
                FACT_COUNT_MISMATCH,
            )
        earlier = seen_configs.get(config)
        if earlier is not None:
            error(
                state,
                f"decodes to the same fact configuration as {earlier!r}",
                DUPLICATE_CONFIG,
            )
        else:
            seen_configs[config] = state

    initial = branch.effective_initial()
    if initial is not None and initial in branch.states:
        reachable = _reachable_states(branch, initial)
        for state in branch.states:
            if state not in reachable:
                warning(
                    state,
                    f"not reachable from initial state {initial!r}",
                    UNREACHABLE_STATE,
                )

    for key in header.extra:
        warning(
            f"HEADER.{key}",
            f"unknown header field {key!r}",
            UNKNOWN_HEADER_FIELD,
        )


def validate(doc: SmslDocument) -> ValidationReport:
    """Check every branch of a document against the structural rules.

    Returns a report; never raises. ``report.ok`` is true iff there are
    no error findings (warnings alone do not fail a document).
    """
    findings: list[Finding] = []
    for branch in doc.branches.values():
        _validate_branch(doc, branch, findings)
    return ValidationReport(findings=findings)
