"""Append-only activity log: the platform's learning-event record.

Every state mutation in the platform emits exactly one event; the JSON Lines
file written by the log is the durable source of truth and replaying it from
empty reproduces the materialized state.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Callable, Iterable, Iterator

from .errors import EventOrderError, UnknownVerb

VERBS: frozenset[str] = frozenset(
    {
        "space.create",
        "space.join",
        "space.leave",
        "space.load",
        "space.store",
        "widget.add",
        "widget.remove",
        "widget.load",
        "widget.layout",
        "chat.post",
        "iwc.publish",
        "competence.set",
        "goal.set",
        "parameter.set",
        "technique.apply",
        "recommendation.shown",
        "recommendation.accepted",
        "recommendation.skipped",
    }
)

_FIELDS = ("ts", "actor", "verb", "object_type", "object_id", "space", "details")


@dataclass(frozen=True)
class ActivityEvent:
    """One log entry: who did what to which object, in which space, when."""

    ts: int  # UTC milliseconds
    actor: str
    verb: str
    object_type: str
    object_id: str
    space: str | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ts": self.ts,
            "actor": self.actor,
            "verb": self.verb,
            "object_type": self.object_type,
            "object_id": self.object_id,
            "space": self.space,
            "details": self.details,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "ActivityEvent":
        return cls(
            ts=int(doc["ts"]),
            actor=doc["actor"],
            verb=doc["verb"],
            object_type=doc.get("object_type", ""),
            object_id=doc.get("object_id", ""),
            space=doc.get("space"),
            details=doc.get("details") or {},
        )

    @classmethod
    def from_json_line(cls, line: str) -> "ActivityEvent":
        return cls.from_dict(json.loads(line))


class EventLog:
    """Append-only, thread-safe event store with an optional JSONL sink."""

    def __init__(self, sink: IO[str] | None = None):
        self._events: list[ActivityEvent] = []
        self._last_ts_per_space: dict[str, int] = {}
        self._lock = threading.Lock()
        self._sink = sink
        self._listeners: list[Callable[[ActivityEvent], None]] = []

    def append(self, event: ActivityEvent) -> ActivityEvent:
        if event.verb not in VERBS:
            raise UnknownVerb(f"unknown event verb {event.verb!r}")
        with self._lock:
            if event.space is not None:
                last = self._last_ts_per_space.get(event.space)
                if last is not None and event.ts < last:
                    raise EventOrderError(
                        f"event ts {event.ts} precedes last ts {last} for space {event.space!r}"
                    )
                self._last_ts_per_space[event.space] = event.ts
            self._events.append(event)
            if self._sink is not None:
                self._sink.write(event.to_json_line() + "\n")
                self._sink.flush()
            listeners = list(self._listeners)
        for cb in listeners:
            cb(event)
        return event

    def add_listener(self, cb: Callable[[ActivityEvent], None]) -> None:
        self._listeners.append(cb)

    def set_sink(self, sink: IO[str] | None) -> None:
        with self._lock:
            self._sink = sink

    def last_ts(self, space: str) -> int | None:
        with self._lock:
            return self._last_ts_per_space.get(space)

    def events(self) -> tuple[ActivityEvent, ...]:
        with self._lock:
            return tuple(self._events)

    def for_space(self, space: str) -> tuple[ActivityEvent, ...]:
        with self._lock:
            return tuple(e for e in self._events if e.space == space)

    def for_actor(self, actor: str) -> tuple[ActivityEvent, ...]:
        with self._lock:
            return tuple(e for e in self._events if e.actor == actor)

    def __len__(self) -> int:
        with self._lock:
            return len(self._events)


def read_event_log(path: str | Path) -> Iterator[ActivityEvent]:
    """Stream events back from a JSON Lines file."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield ActivityEvent.from_json_line(line)


def write_event_log(path: str | Path, events: Iterable[ActivityEvent]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(event.to_json_line() + "\n")
            n += 1
    return n
