"""Append-only event log: one JSON object per line.

Every record carries {ts, session, kind, payload}. The log is the
source of truth for supervision: replaying it rebuilds session state,
so writes are flushed line-by-line and nothing is ever rewritten.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Iterable, Optional

__all__ = [
    "SupervisionEvent",
    "EventLogWriter",
    "read_event_log",
    "parse_event_line",
]


@dataclass(frozen=True)
class SupervisionEvent:
    ts: float
    session: str
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {
            "ts": self.ts,
            "session": self.session,
            "kind": self.kind,
            "payload": self.payload,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def parse_event_line(line: str) -> SupervisionEvent:
    raw = json.loads(line)
    return SupervisionEvent(
        ts=float(raw["ts"]),
        session=str(raw["session"]),
        kind=str(raw["kind"]),
        payload=dict(raw["payload"]),
    )


class EventLogWriter:
    """Serialized appender. Each write lands on disk (flushed) before
    the call returns, so a response is never sent for an unlogged
    mutation."""

    def __init__(self, path: str) -> None:
        self.path = path
        self._lock = threading.Lock()
        self._fh = open(path, "a", encoding="utf-8")

    def write(self, event: SupervisionEvent) -> None:
        with self._lock:
            self._fh.write(event.to_line() + "\n")
            self._fh.flush()

    def close(self) -> None:
        with self._lock:
            if not self._fh.closed:
                self._fh.close()


def read_event_log(path: str) -> list[SupervisionEvent]:
    events: list[SupervisionEvent] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(parse_event_line(line))
    return events


def events_for_session(
    events: Iterable[SupervisionEvent], session: str
) -> list[SupervisionEvent]:
    return [e for e in events if e.session == session]
