"""Parsing and serialization for SMSL documents.

SMSL (State Machine Serialization Language) uses JSON syntax to describe
a set of named state branches. Each branch maps state names to the
operations available in that state, and each operation names the state
it transitions to:

    {
      "SB1": {
        "HEADER": {"NUM_FACTS": 3},
        "State_aaa": {"Op_1b": "State_baa", "Op_1c": "State_caa"},
        "State_baa": {"Op_1a": "State_aaa"}
      }
    }

The reserved ``HEADER`` key holds branch metadata: ``INITIAL`` and
``ACTIVATING`` states, the branch's fact count ``NUM_FACTS``, and
``SUB_SBS``, a mapping from sub-branch name to the zero-based index of
the fact that sub-branch controls. Any other header field is preserved
but has no defined meaning.

Keys beginning with an underscore are commentary. They are skipped at
every nesting level: a top-level ``"_notes"`` branch, a ``"_disabled"``
state, an ``"_alt"`` operation, and an underscore header field all parse
to nothing.

The parser is hand-rolled rather than a thin wrapper over ``json.loads``
because SMSL rejects input that plain JSON tolerates: a duplicate key
anywhere in the document is a syntax error here, and error positions
must point into the source text. Serialization emits a canonical form
(two-space indent, ``HEADER`` first, declaration order elsewhere) so
that parse -> serialize -> parse is identity on the model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import SmslStructureError, SmslSyntaxError, SmslTypeError

__all__ = [
    "BranchHeader",
    "StateBranch",
    "SmslDocument",
    "parse_smsl",
    "serialize_smsl",
    "document_to_plain",
]

HEADER_KEY = "HEADER"
_KNOWN_HEADER_FIELDS = ("INITIAL", "ACTIVATING", "NUM_FACTS", "SUB_SBS")


@dataclass
class BranchHeader:
    """Branch metadata. Unset fields fall back to positional defaults
    at lookup time (see StateBranch); they are not filled in here, so a
    parsed header always reflects what the text actually said."""

    initial: str | None = None
    activating: str | None = None
    num_facts: int | None = None
    sub_branches: dict[str, int] = field(default_factory=dict)
    extra: dict[str, object] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return (
            self.initial is None
            and self.activating is None
            and self.num_facts is None
            and not self.sub_branches
            and not self.extra
        )


@dataclass
class StateBranch:
    """One named branch: an ordered mapping of states to their outgoing
    operations, plus the header.

    Treat instances as read-only once parsed; planners and sessions copy
    what they need instead of mutating the document.
    """

    name: str
    header: BranchHeader
    states: dict[str, dict[str, str]]

    @property
    def state_names(self) -> tuple[str, ...]:
        return tuple(self.states)

    def effective_initial(self) -> str | None:
        """The header's INITIAL, or the first declared state."""
        if self.header.initial is not None:
            return self.header.initial
        return next(iter(self.states), None)

    def effective_activating(self) -> str | None:
        """The header's ACTIVATING, or the last declared state."""
        if self.header.activating is not None:
            return self.header.activating
        last = None
        for last in self.states:
            pass
        return last

    def operation_count(self) -> int:
        return sum(len(ops) for ops in self.states.values())


@dataclass
class SmslDocument:
    """An ordered collection of state branches."""

    branches: dict[str, StateBranch]

    @property
    def branch_names(self) -> tuple[str, ...]:
        return tuple(self.branches)

    def branch(self, name: str) -> StateBranch:
        try:
            return self.branches[name]
        except KeyError:
            from .errors import UnknownBranchError

            raise UnknownBranchError(f"no branch named {name!r}") from None


# --- parsing -----------------------------------------------------------------


class _Parser:
    """Recursive-descent parser over raw text, tracking line/column."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def fail(self, message: str) -> SmslSyntaxError:
        return SmslSyntaxError(message, self.line, self.col)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            ch = self.text[self.pos]
            self.pos += 1
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1

    def _peek(self) -> str:
        if self.pos >= len(self.text):
            raise self.fail("unexpected end of input")
        return self.text[self.pos]

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self._advance()

    def expect(self, ch: str) -> None:
        if self._peek() != ch:
            raise self.fail(f"expected {ch!r}, found {self._peek()!r}")
        self._advance()

    def parse_value(self) -> object:
        self.skip_ws()
        ch = self._peek()
        if ch == "{":
            return self.parse_object()
        if ch == "[":
            return self.parse_array()
        if ch == '"':
            return self.parse_string()
        if ch == "-" or ch.isdigit():
            return self.parse_number()
        for word, value in (("true", True), ("false", False), ("null", None)):
            if self.text.startswith(word, self.pos):
                self._advance(len(word))
                return value
        raise self.fail(f"unexpected character {ch!r}")

    def parse_object(self) -> dict[str, object]:
        self.expect("{")
        self.skip_ws()
        result: dict[str, object] = {}
        if self._peek() == "}":
            self._advance()
            return result
        while True:
            self.skip_ws()
            key_line, key_col = self.line, self.col
            if self._peek() != '"':
                raise self.fail("expected a string key")
            key = self.parse_string()
            if key in result:
                raise SmslSyntaxError(
                    f"duplicate key {key!r}", key_line, key_col
                )
            self.skip_ws()
            self.expect(":")
            result[key] = self.parse_value()
            self.skip_ws()
            ch = self._peek()
            if ch == ",":
                self._advance()
                continue
            if ch == "}":
                self._advance()
                return result
            raise self.fail(f"expected ',' or '}}', found {ch!r}")

    def parse_array(self) -> list[object]:
        self.expect("[")
        self.skip_ws()
        result: list[object] = []
        if self._peek() == "]":
            self._advance()
            return result
        while True:
            result.append(self.parse_value())
            self.skip_ws()
            ch = self._peek()
            if ch == ",":
                self._advance()
                continue
            if ch == "]":
                self._advance()
                return result
            raise self.fail(f"expected ',' or ']', found {ch!r}")

    _ESCAPES = {
        '"': '"',
        "\\": "\\",
        "/": "/",
        "b": "\b",
        "f": "\f",
        "n": "\n",
        "r": "\r",
        "t": "\t",
    }

    def parse_string(self) -> str:
        self.expect('"')
        out: list[str] = []
        while True:
            ch = self._peek()
            if ch == '"':
                self._advance()
                return "".join(out)
            if ch == "\\":
                self._advance()
                esc = self._peek()
                if esc == "u":
                    self._advance()
                    if self.pos + 4 > len(self.text):
                        raise self.fail("truncated \\u escape")
                    hexdigits = self.text[self.pos : self.pos + 4]
                    try:
                        out.append(chr(int(hexdigits, 16)))
                    except ValueError:
                        raise self.fail(f"bad \\u escape {hexdigits!r}") from None
                    self._advance(4)
                elif esc in self._ESCAPES:
                    out.append(self._ESCAPES[esc])
                    self._advance()
                else:
                    raise self.fail(f"bad escape \\{esc}")
            elif ch in "\n\r":
                raise self.fail("unterminated string")
            else:
                out.append(ch)
                self._advance()

    def parse_number(self) -> int | float:
        start = self.pos
        if self._peek() == "-":
            self._advance()
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self._advance()
        is_float = False
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            is_float = True
            self._advance()
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self._advance()
        if self.pos < len(self.text) and self.text[self.pos] in "eE":
            is_float = True
            self._advance()
            if self.pos < len(self.text) and self.text[self.pos] in "+-":
                self._advance()
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self._advance()
        raw = self.text[start : self.pos]
        try:
            return float(raw) if is_float else int(raw)
        except ValueError:
            raise self.fail(f"bad number {raw!r}") from None


def _is_comment(key: str) -> bool:
    return key.startswith("_")


def _build_header(branch: str, raw: object) -> BranchHeader:
    if not isinstance(raw, dict):
        raise SmslTypeError(f"branch {branch!r}: HEADER must be a mapping")
    header = BranchHeader()
    for key, value in raw.items():
        if _is_comment(key):
            continue
        if key == "INITIAL":
            if not isinstance(value, str):
                raise SmslTypeError(f"branch {branch!r}: INITIAL must be a string")
            header.initial = value
        elif key == "ACTIVATING":
            if not isinstance(value, str):
                raise SmslTypeError(
                    f"branch {branch!r}: ACTIVATING must be a string"
                )
            header.activating = value
        elif key == "NUM_FACTS":
            if isinstance(value, bool) or not isinstance(value, int):
                raise SmslTypeError(
                    f"branch {branch!r}: NUM_FACTS must be an integer"
                )
            if value <= 0:
                raise SmslStructureError(
                    f"branch {branch!r}: NUM_FACTS must be positive, got {value}"
                )
            header.num_facts = value
        elif key == "SUB_SBS":
            if not isinstance(value, dict):
                raise SmslTypeError(f"branch {branch!r}: SUB_SBS must be a mapping")
            for sub_name, index in value.items():
                if _is_comment(sub_name):
                    continue
                if isinstance(index, bool) or not isinstance(index, int):
                    raise SmslTypeError(
                        f"branch {branch!r}: SUB_SBS[{sub_name!r}] must be an integer"
                    )
                if index < 0:
                    raise SmslStructureError(
                        f"branch {branch!r}: SUB_SBS[{sub_name!r}] must be"
                        f" non-negative, got {index}"
                    )
                header.sub_branches[sub_name] = index
        else:
            header.extra[key] = value
    return header


def _build_branch(name: str, raw: object) -> StateBranch:
    if not isinstance(raw, dict):
        raise SmslTypeError(f"branch {name!r} must be a mapping")
    header = BranchHeader()
    states: dict[str, dict[str, str]] = {}
    for key, value in raw.items():
        if _is_comment(key):
            continue
        if key == HEADER_KEY:
            header = _build_header(name, value)
            continue
        if not isinstance(value, dict):
            raise SmslTypeError(
                f"branch {name!r}: state {key!r} must be a mapping"
            )
        ops: dict[str, str] = {}
        for op, target in value.items():
            if _is_comment(op):
                continue
            if not isinstance(target, str):
                raise SmslTypeError(
                    f"branch {name!r}, state {key!r}: target of {op!r}"
                    " must be a state name string"
                )
            ops[op] = target
        states[key] = ops
    return StateBranch(name=name, header=header, states=states)


def parse_smsl(text: str) -> SmslDocument:
    """Parse SMSL text into a document.

    Args:
        text: Complete SMSL source.

    Returns:
        The parsed document. Underscore-prefixed keys are absent from it
        at every level.

    Raises:
        SmslSyntaxError: On malformed text, including duplicate keys.
        SmslTypeError: On a well-formed value of the wrong shape.
        SmslStructureError: On an out-of-range header value.
    """
    parser = _Parser(text)
    raw = parser.parse_value()
    parser.skip_ws()
    if parser.pos != len(parser.text):
        raise parser.fail("trailing content after document")
    if not isinstance(raw, dict):
        raise SmslTypeError("top-level value must be a mapping of branches")
    branches: dict[str, StateBranch] = {}
    for name, value in raw.items():
        if _is_comment(name):
            continue
        branches[name] = _build_branch(name, value)
    return SmslDocument(branches=branches)


# --- serialization -----------------------------------------------------------


def _header_to_plain(header: BranchHeader) -> dict[str, object]:
    plain: dict[str, object] = {}
    if header.initial is not None:
        plain["INITIAL"] = header.initial
    if header.activating is not None:
        plain["ACTIVATING"] = header.activating
    if header.num_facts is not None:
        plain["NUM_FACTS"] = header.num_facts
    if header.sub_branches:
        plain["SUB_SBS"] = dict(header.sub_branches)
    plain.update(header.extra)
    return plain


def document_to_plain(document: SmslDocument) -> dict[str, object]:
    """The document as plain nested mappings, in canonical key order
    (HEADER first within each branch, declaration order elsewhere)."""
    plain: dict[str, object] = {}
    for name, branch in document.branches.items():
        body: dict[str, object] = {HEADER_KEY: _header_to_plain(branch.header)}
        for state, ops in branch.states.items():
            body[state] = dict(ops)
        plain[name] = body
    return plain


def serialize_smsl(document: SmslDocument) -> str:
    """Emit the canonical text form of a document.

    Canonical means: two-space indent, LF line endings, a trailing
    newline, HEADER first within each branch (even when empty), and
    declaration order everywhere else. Parsing the output reproduces
    an equal document.
    """
    return json.dumps(document_to_plain(document), indent=2) + "\n"
