"""Per-space realtime services: pub/sub channels, chat rooms, presence.

The hub is transport-agnostic: a Connection buffers delivered frames and may
additionally forward them to a listener callback (the websocket layer hooks
in there). Messages never cross space boundaries and the per-publisher
sequence numbers give receivers a FIFO, de-duplicatable stream.
"""

from __future__ import annotations

import itertools
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .errors import ConnectionClosed, EmptyMessage, NotAMember
from .events import ActivityEvent


def _now_ms() -> int:
    return int(time.time() * 1000)


@dataclass(frozen=True)
class ChatMessage:
    space: str
    author: str
    text: str
    ts: int

    def to_dict(self) -> dict:
        return {"space": self.space, "author": self.author, "text": self.text, "ts": self.ts}


@dataclass
class Connection:
    id: str
    learner: str
    space: str
    open: bool = True
    inbox: deque = field(default_factory=deque)
    listener: Callable[[dict], None] | None = None
    # topic -> receive_own flag
    subscriptions: dict[str, bool] = field(default_factory=dict)

    def deliver(self, frame: dict) -> None:
        self.inbox.append(frame)
        if self.listener is not None:
            self.listener(frame)

    def drain(self) -> list[dict]:
        frames = list(self.inbox)
        self.inbox.clear()
        return frames


class RealtimeHub:
    def __init__(
        self,
        members_of: Callable[[str], set[str]],
        emit: Callable[[ActivityEvent], None] | None = None,
        clock: Callable[[], int] | None = None,
    ):
        self._members_of = members_of
        self._emit = emit
        self._clock = clock or _now_ms
        self._lock = threading.RLock()
        self._conn_seq = itertools.count(1)
        self._connections: dict[str, Connection] = {}
        # (connection id, topic) -> last sequence number
        self._publisher_seq: dict[tuple[str, str], int] = {}
        self._chat: dict[str, list[ChatMessage]] = {}

    # -- connection lifecycle -------------------------------------------------

    def connect(self, learner: str, space: str) -> Connection:
        if learner not in self._members_of(space):
            raise NotAMember(f"{learner!r} is not a member of {space!r}")
        with self._lock:
            conn = Connection(id=f"c{next(self._conn_seq)}", learner=learner, space=space)
            self._connections[conn.id] = conn
            self._broadcast_presence(space)
        return conn

    def disconnect(self, connection_id: str) -> None:
        with self._lock:
            conn = self._connections.pop(connection_id, None)
            if conn is None:
                return
            conn.open = False
            self._broadcast_presence(conn.space)

    def connection(self, connection_id: str) -> Connection:
        with self._lock:
            conn = self._connections.get(connection_id)
        if conn is None or not conn.open:
            raise ConnectionClosed(f"connection {connection_id!r} is not open")
        return conn

    def presence(self, space: str) -> set[str]:
        """Learners with at least one open connection to the space."""
        with self._lock:
            return {c.learner for c in self._connections.values() if c.space == space}

    def _space_connections(self, space: str) -> list[Connection]:
        return [c for c in self._connections.values() if c.space == space]

    def _broadcast_presence(self, space: str) -> None:
        frame = {
            "kind": "presence",
            "space": space,
            "online": sorted(self.presence(space)),
            "ts": self._clock(),
        }
        for c in self._space_connections(space):
            c.deliver(frame)

    # -- pub/sub ----------------------------------------------------------------

    def subscribe(self, connection_id: str, topic: str, receive_own: bool = False) -> None:
        if not topic:
            raise ValueError("topic must be non-empty")
        conn = self.connection(connection_id)
        with self._lock:
            conn.subscriptions[topic] = receive_own

    def unsubscribe(self, connection_id: str, topic: str) -> None:
        conn = self.connection(connection_id)
        with self._lock:
            conn.subscriptions.pop(topic, None)

    def publish(self, connection_id: str, topic: str, payload: dict, source_widget: str | None = None) -> int:
        """Deliver payload to every subscriber of (space, topic).

        Publisher connections do not receive their own messages unless they
        subscribed with receive_own. Per (publisher, topic) sequence numbers
        are strictly increasing, so receivers can restore FIFO order and
        de-duplicate after reconnects.
        """
        if not topic:
            raise ValueError("topic must be non-empty")
        conn = self.connection(connection_id)
        with self._lock:
            key = (conn.id, topic)
            seq = self._publisher_seq.get(key, 0) + 1
            self._publisher_seq[key] = seq
            ts = self._clock()
            frame = {
                "kind": "pub",
                "space": conn.space,
                "topic": topic,
                "payload": payload,
                "publisher": conn.id,
                "seq": seq,
                "ts": ts,
            }
            for c in self._space_connections(conn.space):
                flag = c.subscriptions.get(topic)
                if flag is None:
                    continue
                if c.id == conn.id and not flag:
                    continue
                c.deliver(frame)
        if self._emit is not None:
            details = {"topic": topic, "publisher": conn.id, "seq": seq}
            if source_widget is not None:
                details["widget"] = source_widget
            self._emit(
                ActivityEvent(
                    ts=ts, actor=conn.learner, verb="iwc.publish",
                    object_type=topic, object_id=f"{conn.id}:{seq}",
                    space=conn.space, details=details,
                )
            )
        return seq

    # -- chat ---------------------------------------------------------------------

    def chat_post(self, connection_id: str, text: str) -> ChatMessage:
        if not text or not text.strip():
            raise EmptyMessage("chat message must be non-empty")
        conn = self.connection(connection_id)
        with self._lock:
            msg = ChatMessage(space=conn.space, author=conn.learner, text=text, ts=self._clock())
            self._chat.setdefault(conn.space, []).append(msg)
            frame = {"kind": "chat", **msg.to_dict()}
            for c in self._space_connections(conn.space):
                c.deliver(frame)
        if self._emit is not None:
            self._emit(
                ActivityEvent(
                    ts=msg.ts, actor=conn.learner, verb="chat.post",
                    object_type="message", object_id=str(len(self._chat[conn.space])),
                    space=conn.space, details={"text": text},
                )
            )
        return msg

    def chat_history(self, space: str, limit: int | None = None) -> list[ChatMessage]:
        with self._lock:
            history = list(self._chat.get(space, ()))
        if limit is not None:
            history = history[-limit:]
        return history

    def restore_chat(self, space: str, messages: list[ChatMessage]) -> None:
        """Seed chat history from replayed chat.post events."""
        with self._lock:
            self._chat[space] = list(messages)
