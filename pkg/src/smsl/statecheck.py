"""Fact configurations, scene snapshots, and state identification.

A branch's states encode fact configurations in their names: the suffix
after the ``State`` prefix is read one character per fact, so
``State_aaa`` means fact 0 = 'a', fact 1 = 'a', fact 2 = 'a'. A scene
snapshot carries the observed value of each fact (or None when a value
is unknown). Identification is fail-closed: a scene with any unknown
value never names a state.

Hierarchy enters through the header's sub-branch bindings: one fact of
the base branch is '1' exactly when the bound sub-branch currently sits
in its activating state, and '0' otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .document import SmslDocument, StateBranch
from .errors import (
    LengthMismatchError,
    NoSubBranchError,
    NotDecodableError,
    UnknownBranchError,
)

__all__ = [
    "FactConfig",
    "SceneSnapshot",
    "FactPredicate",
    "StateCheckFunction",
    "decode_state_name",
    "check_function_for",
    "state_check",
    "identify_state",
    "effective_fact_count",
    "hierarchical_fact",
]

# A fact configuration: one single-character symbol per fact.
FactConfig = tuple[str, ...]


@dataclass(frozen=True)
class SceneSnapshot:
    """Observed fact values for one branch at one instant.

    ``values`` holds one entry per fact; None marks an unknown value
    (no reading, or a stale one).
    """

    branch: str
    values: tuple[Optional[str], ...]
    as_of: float = 0.0


@dataclass(frozen=True, slots=True)
class FactPredicate:
    """One conjunct of a state check: fact ``fact_index`` must read
    ``expected``."""

    fact_index: int
    expected: str


@dataclass(frozen=True)
class StateCheckFunction:
    """The conjunction of per-fact predicates that decides whether a
    named state is the active one."""

    state: str
    predicates: tuple[FactPredicate, ...]


def decode_state_name(name: str) -> Optional[FactConfig]:
    """Read the fact configuration encoded in a state name.

    Accepts the prefix ``State`` with an optional underscore separator,
    followed by at least one character; each remaining character is one
    fact symbol. Returns None when the name does not encode a
    configuration.

    >>> decode_state_name("State_aaa")
    ('a', 'a', 'a')
    >>> decode_state_name("State1")
    ('1',)
    >>> decode_state_name("Begin") is None
    True
    """
    if name.startswith("State_"):
        suffix = name[len("State_") :]
    elif name.startswith("State"):
        suffix = name[len("State") :]
    else:
        return None
    if not suffix:
        return None
    return tuple(suffix)


def check_function_for(name: str) -> Optional[StateCheckFunction]:
    """The state check function for a decodable state name, or None."""
    config = decode_state_name(name)
    if config is None:
        return None
    predicates = tuple(
        FactPredicate(fact_index=i, expected=symbol)
        for i, symbol in enumerate(config)
    )
    return StateCheckFunction(state=name, predicates=predicates)


def state_check(scf: StateCheckFunction, scene: SceneSnapshot) -> bool:
    """Evaluate a state check function against a scene.

    True iff every predicate's expected symbol equals the scene value at
    its index. An unknown (None) value fails its predicate, so a scene
    with unknowns can only pass checks that do not reference them. The
    empty conjunction is true.

    Raises:
        LengthMismatchError: When the scene has a different number of
            values than the check has predicates.
    """
    if len(scene.values) != len(scf.predicates):
        raise LengthMismatchError(
            f"scene has {len(scene.values)} values but check for"
            f" {scf.state!r} has {len(scf.predicates)} predicates"
        )
    for predicate in scf.predicates:
        value = scene.values[predicate.fact_index]
        if value is None or value != predicate.expected:
            return False
    return True


def _decoded_states(branch: StateBranch) -> dict[str, FactConfig]:
    decoded: dict[str, FactConfig] = {}
    for name in branch.states:
        config = decode_state_name(name)
        if config is None:
            raise NotDecodableError(
                f"branch {branch.name!r}: state name {name!r} does not"
                " encode a fact configuration"
            )
        decoded[name] = config
    return decoded


def identify_state(branch: StateBranch, scene: SceneSnapshot) -> Optional[str]:
    """Name the unique state whose configuration matches the scene.

    Returns None (state unknown) when any scene value is unknown or no
    state's configuration equals the scene values. Uniqueness of a match
    is a validation guarantee (duplicate configurations are rejected
    there).

    Raises:
        NotDecodableError: When some state name of the branch does not
            encode a configuration.
    """
    decoded = _decoded_states(branch)
    if any(value is None for value in scene.values):
        return None
    target = tuple(scene.values)
    for name, config in decoded.items():
        if config == target:
            return name
    return None


def effective_fact_count(branch: StateBranch) -> Optional[int]:
    """The branch's fact count: the header's NUM_FACTS when present,
    else the common decoded length of all state names. None when the
    branch has no consistent count (then identification is unavailable
    and the branch is handled by name only)."""
    if branch.header.num_facts is not None:
        return branch.header.num_facts
    length: Optional[int] = None
    for name in branch.states:
        config = decode_state_name(name)
        if config is None:
            return None
        if length is None:
            length = len(config)
        elif len(config) != length:
            return None
    return length


def hierarchical_fact(
    doc: SmslDocument, base: str, fact_index: int, sub_scene: SceneSnapshot
) -> str:
    """Compute one fact digit of a base branch from its sub-branch.

    The digit is '1' exactly when the sub-branch bound to ``fact_index``
    identifies as its effective activating state under ``sub_scene``,
    and '0' otherwise (including an unidentifiable sub-scene).

    Raises:
        UnknownBranchError: When ``base`` is not in the document.
        NoSubBranchError: When no sub-branch is bound to ``fact_index``
            or the bound name is missing from the document.
    """
    base_branch = doc.branch(base)
    sub_name = None
    for candidate, index in base_branch.header.sub_branches.items():
        if index == fact_index:
            sub_name = candidate
            break
    if sub_name is None:
        raise NoSubBranchError(
            f"branch {base!r} binds no sub-branch to fact index {fact_index}"
        )
    try:
        sub_branch = doc.branch(sub_name)
    except UnknownBranchError:
        raise NoSubBranchError(
            f"branch {base!r} binds fact index {fact_index} to missing"
            f" branch {sub_name!r}"
        ) from None
    activating = sub_branch.effective_activating()
    if activating is None:
        return "0"
    return "1" if identify_state(sub_branch, sub_scene) == activating else "0"
