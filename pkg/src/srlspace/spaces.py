"""Spaces: shared widget bundles with members, activities, layout, storage.

Every mutation emits exactly one ActivityEvent; the event log is the source
of truth and ``replay_events`` rebuilds the full service state from it. The
in-memory Space objects are a materialized cache of that log.
"""

from __future__ import annotations

import re
import threading
import time
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from typing import Callable

from .catalog import OntologyCatalog
from .errors import (
    InvalidName,
    LastMember,
    NameTaken,
    NotAMember,
    UnknownActivity,
    UnknownInstance,
    UnknownSpace,
    UnknownWidget,
)
from .events import ActivityEvent, EventLog

GRID_COLUMNS = 12
DEFAULT_WIDGET_SIZE = (2, 2)
DEFAULT_ACTIVITY = "Start"

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._~-]*$")


def _now_ms() -> int:
    return int(time.time() * 1000)


def _date_of_ms(ts: int) -> date:
    return datetime.fromtimestamp(ts / 1000, tz=timezone.utc).date()


@dataclass(frozen=True)
class Layout:
    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("layout width and height must be >= 1")

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "width": self.width, "height": self.height}

    @classmethod
    def from_dict(cls, doc: dict) -> "Layout":
        return cls(int(doc["x"]), int(doc["y"]), int(doc["width"]), int(doc["height"]))

    def overlaps(self, other: "Layout") -> bool:
        return not (
            self.x + self.width <= other.x
            or other.x + other.width <= self.x
            or self.y + self.height <= other.y
            or other.y + other.height <= self.y
        )


@dataclass
class WidgetInstance:
    instance_id: str
    widget_id: str
    layout: Layout
    added_by: str
    added_at: int

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "widget_id": self.widget_id,
            "layout": self.layout.to_dict(),
            "added_by": self.added_by,
            "added_at": self.added_at,
        }


@dataclass
class Activity:
    name: str
    widgets: list[WidgetInstance] = field(default_factory=list)


@dataclass
class Space:
    name: str
    owner: str
    members: set[str]
    member_order: list[str]  # join order, drives ownership transfer
    activities: list[Activity]
    shared_store: dict[str, object]
    created_at: int
    load_count: int = 0
    load_days: set[date] = field(default_factory=set)
    instance_seq: int = 0

    def activity(self, name: str) -> Activity:
        for a in self.activities:
            if a.name == name:
                return a
        raise UnknownActivity(f"space {self.name!r} has no activity {name!r}")

    def find_instance(self, instance_id: str) -> tuple[Activity, WidgetInstance]:
        for a in self.activities:
            for inst in a.widgets:
                if inst.instance_id == instance_id:
                    return a, inst
        raise UnknownInstance(f"space {self.name!r} has no widget instance {instance_id!r}")

    def instance_count(self) -> int:
        return sum(len(a.widgets) for a in self.activities)


def default_slot(activity: Activity) -> Layout:
    """First free 2x2 grid slot, scanning rows left-to-right."""
    w, h = DEFAULT_WIDGET_SIZE
    taken = [inst.layout for inst in activity.widgets]
    y = 0
    while True:
        for x in range(0, GRID_COLUMNS - w + 1, w):
            candidate = Layout(x, y, w, h)
            if not any(candidate.overlaps(t) for t in taken):
                return candidate
        y += h


class SpaceService:
    """Owns all spaces; mutations are serialized per space."""

    def __init__(
        self,
        catalog: OntologyCatalog,
        event_log: EventLog | None = None,
        clock: Callable[[], int] | None = None,
        on_widget_added: Callable[[str, str], None] | None = None,
    ):
        self.catalog = catalog
        self.events = event_log if event_log is not None else EventLog()
        self._clock = clock or _now_ms
        self._on_widget_added = on_widget_added
        self._spaces: dict[str, Space] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # -- plumbing -------------------------------------------------------------

    def _lock_for(self, name: str) -> threading.Lock:
        with self._registry_lock:
            if name not in self._locks:
                self._locks[name] = threading.Lock()
            return self._locks[name]

    def _ts(self, space: str) -> int:
        # per-space event timestamps must never decrease
        last = self.events.last_ts(space)
        now = self._clock()
        return now if last is None else max(now, last)

    def _emit(self, **kwargs) -> None:
        self.events.append(ActivityEvent(**kwargs))

    def get_space(self, name: str) -> Space:
        space = self._spaces.get(name)
        if space is None:
            raise UnknownSpace(f"unknown space {name!r}")
        return space

    def space_names(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._spaces)

    def members_of(self, name: str) -> set[str]:
        return set(self.get_space(name).members)

    # -- operations -------------------------------------------------------------

    def create_space(self, name: str, creator: str) -> Space:
        if not _NAME_RE.match(name or ""):
            raise InvalidName(f"space name {name!r} is not URL-safe")
        # hold the new space's lock across registration + create event so no
        # other mutation can be logged before space.create
        with self._registry_lock:
            if name in self._spaces:
                raise NameTaken(f"space name {name!r} is already taken")
            ts = self._clock()
            space = Space(
                name=name,
                owner=creator,
                members={creator},
                member_order=[creator],
                activities=[Activity(name=DEFAULT_ACTIVITY)],
                shared_store={},
                created_at=ts,
            )
            self._spaces[name] = space
            lock = self._locks.setdefault(name, threading.Lock())
            lock.acquire()
        try:
            self._emit(
                ts=ts, actor=creator, verb="space.create",
                object_type="space", object_id=name, space=name,
            )
        finally:
            lock.release()
        return space

    def join_space(self, name: str, learner: str) -> Space:
        with self._lock_for(name):
            space = self.get_space(name)
            if learner in space.members:
                return space  # idempotent; no state change, no event
            space.members.add(learner)
            space.member_order.append(learner)
            self._emit(
                ts=self._ts(name), actor=learner, verb="space.join",
                object_type="space", object_id=name, space=name,
            )
        return space

    def leave_space(self, name: str, learner: str) -> Space:
        with self._lock_for(name):
            space = self.get_space(name)
            if learner not in space.members:
                raise NotAMember(f"{learner!r} is not a member of {name!r}")
            new_owner = None
            if learner == space.owner:
                remaining = [m for m in space.member_order if m != learner and m in space.members]
                if not remaining:
                    raise LastMember(f"{learner!r} is the last member of {name!r}")
                new_owner = remaining[0]  # earliest-joined remaining member
                space.owner = new_owner
            space.members.discard(learner)
            space.member_order = [m for m in space.member_order if m != learner]
            details = {"new_owner": new_owner} if new_owner else {}
            self._emit(
                ts=self._ts(name), actor=learner, verb="space.leave",
                object_type="space", object_id=name, space=name, details=details,
            )
        return space

    def add_widget(self, name: str, activity: str, widget_id: str, actor: str) -> WidgetInstance:
        if widget_id not in self.catalog.widgets:
            raise UnknownWidget(f"unknown widget {widget_id!r}")
        with self._lock_for(name):
            space = self.get_space(name)
            if actor not in space.members:
                raise NotAMember(f"{actor!r} is not a member of {name!r}")
            act = space.activity(activity)
            space.instance_seq += 1
            ts = self._ts(name)
            inst = WidgetInstance(
                instance_id=f"i{space.instance_seq}",
                widget_id=widget_id,
                layout=default_slot(act),
                added_by=actor,
                added_at=ts,
            )
            act.widgets.append(inst)
            self.catalog.record_widget_added(widget_id)
            self._emit(
                ts=ts, actor=actor, verb="widget.add",
                object_type="widget", object_id=widget_id, space=name,
                details={
                    "instance": inst.instance_id,
                    "activity": activity,
                    "layout": inst.layout.to_dict(),
                },
            )
        if self._on_widget_added is not None:
            self._on_widget_added(actor, widget_id)
        return inst

    def remove_widget(self, name: str, instance_id: str, actor: str) -> None:
        with self._lock_for(name):
            space = self.get_space(name)
            if actor not in space.members:
                raise NotAMember(f"{actor!r} is not a member of {name!r}")
            act, inst = space.find_instance(instance_id)
            act.widgets.remove(inst)
            self._emit(
                ts=self._ts(name), actor=actor, verb="widget.remove",
                object_type="widget", object_id=inst.widget_id, space=name,
                details={"instance": instance_id, "activity": act.name},
            )

    def load_space(self, name: str, actor: str) -> dict:
        with self._lock_for(name):
            space = self.get_space(name)
            ts = self._ts(name)
            space.load_count += 1
            space.load_days.add(_date_of_ms(ts))
            view = self.snapshot(space)
            self._emit(
                ts=ts, actor=actor, verb="space.load",
                object_type="space", object_id=name, space=name,
            )
        return view

    def record_widget_load(self, name: str, instance_id: str, actor: str) -> None:
        """Log that a widget frame was loaded; no space state changes."""
        with self._lock_for(name):
            space = self.get_space(name)
            _, inst = space.find_instance(instance_id)
            self._emit(
                ts=self._ts(name), actor=actor, verb="widget.load",
                object_type="widget", object_id=inst.widget_id, space=name,
                details={"instance": instance_id},
            )

    def set_layout(self, name: str, instance_id: str, layout: Layout, actor: str) -> None:
        with self._lock_for(name):
            space = self.get_space(name)
            if actor not in space.members:
                raise NotAMember(f"{actor!r} is not a member of {name!r}")
            _, inst = space.find_instance(instance_id)
            inst.layout = layout
            self._emit(
                ts=self._ts(name), actor=actor, verb="widget.layout",
                object_type="widget", object_id=inst.widget_id, space=name,
                details={"instance": instance_id, "layout": layout.to_dict()},
            )

    def set_shared(self, name: str, key: str, value: object, actor: str) -> None:
        with self._lock_for(name):
            space = self.get_space(name)
            if actor not in space.members:
                raise NotAMember(f"{actor!r} is not a member of {name!r}")
            space.shared_store[key] = value
            self._emit(
                ts=self._ts(name), actor=actor, verb="space.store",
                object_type="store", object_id=key, space=name,
                details={"key": key, "value": value},
            )

    def share_url(self, name: str) -> str:
        self.get_space(name)
        return f"/spaces/{name}"

    # -- snapshots and replay -----------------------------------------------

    def snapshot(self, space: Space) -> dict:
        """Deterministic full-state document for one space."""
        return {
            "name": space.name,
            "owner": space.owner,
            "members": sorted(space.members),
            "member_order": list(space.member_order),
            "created_at": space.created_at,
            "load_count": space.load_count,
            "load_days": sorted(d.isoformat() for d in space.load_days),
            "shared_store": {k: space.shared_store[k] for k in sorted(space.shared_store)},
            "activities": [
                {
                    "name": a.name,
                    "widgets": [inst.to_dict() for inst in a.widgets],
                }
                for a in space.activities
            ],
            "share_url": f"/spaces/{space.name}",
        }

    def snapshot_all(self) -> dict:
        return {name: self.snapshot(self._spaces[name]) for name in self.space_names()}

    def apply_event(self, event: ActivityEvent) -> None:
        """Apply one logged event to materialized state (replay path)."""
        verb = event.verb
        if verb == "space.create":
            space = Space(
                name=event.object_id,
                owner=event.actor,
                members={event.actor},
                member_order=[event.actor],
                activities=[Activity(name=DEFAULT_ACTIVITY)],
                shared_store={},
                created_at=event.ts,
            )
            self._spaces[space.name] = space
            return
        if event.space is None:
            return
        space = self._spaces.get(event.space)
        if space is None:
            return
        if verb == "space.join":
            if event.actor not in space.members:
                space.members.add(event.actor)
                space.member_order.append(event.actor)
        elif verb == "space.leave":
            if event.actor == space.owner:
                remaining = [m for m in space.member_order if m != event.actor]
                if remaining:
                    space.owner = remaining[0]
            space.members.discard(event.actor)
            space.member_order = [m for m in space.member_order if m != event.actor]
        elif verb == "widget.add":
            act = space.activity(event.details["activity"])
            inst = WidgetInstance(
                instance_id=event.details["instance"],
                widget_id=event.object_id,
                layout=Layout.from_dict(event.details["layout"]),
                added_by=event.actor,
                added_at=event.ts,
            )
            act.widgets.append(inst)
            space.instance_seq = max(space.instance_seq, int(inst.instance_id[1:]))
            self.catalog.record_widget_added(event.object_id)
        elif verb == "widget.remove":
            act, inst = space.find_instance(event.details["instance"])
            act.widgets.remove(inst)
        elif verb == "widget.layout":
            _, inst = space.find_instance(event.details["instance"])
            inst.layout = Layout.from_dict(event.details["layout"])
        elif verb == "space.load":
            space.load_count += 1
            space.load_days.add(_date_of_ms(event.ts))
        elif verb == "space.store":
            space.shared_store[event.details["key"]] = event.details["value"]

    @classmethod
    def replay_events(
        cls, events, catalog: OntologyCatalog, clock: Callable[[], int] | None = None
    ) -> "SpaceService":
        """Rebuild a service (and catalog paradata) from an event sequence."""
        service = cls(catalog, EventLog(), clock=clock)
        for event in events:
            service.apply_event(event)
        return service
