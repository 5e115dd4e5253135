"""Exception hierarchy shared across the toolkit.

Everything raised on purpose derives from SmslError so callers can catch
one base class at a boundary (CLI, HTTP handlers) and map it to an exit
code or status without enumerating subclasses.
"""

from __future__ import annotations


class SmslError(Exception):
    """Base class for all toolkit errors."""


class SmslSyntaxError(SmslError):
    """Malformed SMSL text. Carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SmslTypeError(SmslError):
    """Well-formed text with a value of the wrong shape (e.g. a state
    whose body is not a mapping, or a non-string transition target)."""


class SmslStructureError(SmslError):
    """A structurally invalid field value, e.g. a non-positive fact
    count or a negative sub-branch fact index."""


class UnknownBranchError(SmslError):
    """Lookup of a branch name the document does not declare."""


class UnknownNodeError(SmslError):
    """Lookup of a state name the graph does not contain."""


class UnknownEdgeError(SmslError):
    """Lookup of a (source state, operation) pair with no edge."""


class NegativeCostError(SmslError):
    """Edge cost that is negative or not a finite number."""


class NotDecodableError(SmslError):
    """A state name that does not encode a fact configuration, in a
    context that requires one."""


class LengthMismatchError(SmslError):
    """A scene whose fact count differs from what a check expects."""


class NoSubBranchError(SmslError):
    """A hierarchical fact with no sub-branch bound to its index."""


class UnknownSensorError(SmslError):
    """A reading for a sensor id the store was never told about."""


class BranchMismatchError(SmslError):
    """Two estimates compared across different branches."""


class IncompleteMapError(SmslError):
    """A sensor map that leaves some fact index without a sensor."""


class DuplicateNameError(SmslError):
    """Registering an operation name that is already taken."""


class MissingOperationError(SmslError):
    """Dispatching an operation the library has no handler for."""


class UnknownSessionError(SmslError):
    """Lookup of an execution session id that does not exist."""


class UnknownProposalError(SmslError):
    """A decision naming a proposal that is not the pending one."""


class AlreadyDecidedError(SmslError):
    """A second decision on an already decided proposal."""


class ProposalPendingError(SmslError):
    """A new proposal while one is still awaiting decision or execution."""


class WrongSourceError(SmslError):
    """A proposal for an edge that does not leave the current state."""


class EdgePrunedError(SmslError):
    """A proposal for an edge that planning and dispatch must avoid."""


class NotApprovedError(SmslError):
    """An execution attempt without an approved proposal."""


class PreCheckFailedError(SmslError):
    """Scene estimate disagreed with the session state before dispatch."""


class FlagBlockedError(SmslError):
    """An action blocked by a raised session flag."""


class PlanMismatchError(SmslError):
    """A plan whose first edge does not leave the session's state."""


class NoPendingConfirmationError(SmslError):
    """A confirmation for a token nothing is waiting on."""


class InvalidDocumentError(SmslError):
    """A document rejected by validation at service start."""
