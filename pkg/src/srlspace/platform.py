"""Wires the services together behind one facade and owns persistence.

The platform holds one event log; every service emits into it. Given only
that log, ``Platform.from_events`` rebuilds catalog paradata, spaces,
learner records, and chat history, which is both the restart path and the
replay-equivalence contract.
"""

from __future__ import annotations

import secrets
import time
from pathlib import Path
from typing import Callable, Iterable

from .catalog import OntologyCatalog, competence_from_dict, load_default_catalog
from .errors import UnknownEntity
from .events import ActivityEvent, EventLog
from .learner import LearnerStore
from .monitor import AssignmentStore, EventSignature, cluster_events, signature_of, strategy_profile
from .realtime import ChatMessage, RealtimeHub
from .recommend import (
    LearningObject,
    Recommendation,
    SchedulerState,
    fresh_state,
    lint_space,
    load_corpus,
    next_activity,
    recommend_content,
    recommend_widgets,
    record_outcome,
)
from .spaces import SpaceService

_SPACE_VERBS = {
    "space.create", "space.join", "space.leave", "space.load", "space.store",
    "widget.add", "widget.remove", "widget.layout",
}


def _now_ms() -> int:
    return int(time.time() * 1000)


def default_corpus_path() -> Path:
    from importlib import resources

    return Path(str(resources.files("srlspace").joinpath("data/corpus.yaml")))


class Platform:
    def __init__(
        self,
        catalog: OntologyCatalog | None = None,
        clock: Callable[[], int] | None = None,
        corpus: list[LearningObject] | None = None,
        event_sink=None,
    ):
        self.catalog = catalog if catalog is not None else load_default_catalog()
        self._clock = clock or _now_ms
        self.events = EventLog(sink=event_sink)
        self.learners = LearnerStore(self.catalog, emit=self.events.append, clock=self._clock)
        self.spaces = SpaceService(
            self.catalog,
            event_log=self.events,
            clock=self._clock,
            on_widget_added=self.learners.record_use,
        )
        self.hub = RealtimeHub(self.spaces.members_of, emit=self.events.append, clock=self._clock)
        self.monitor = AssignmentStore(self.catalog)
        self.corpus = corpus if corpus is not None else load_corpus(default_corpus_path())
        self._scheduler_states: dict[str, SchedulerState] = {}
        self._tokens: dict[str, str] = {}
        self._assignment_sink = None

    # -- auth -----------------------------------------------------------------

    def login(self, learner: str) -> str:
        token = secrets.token_hex(16)
        self._tokens[token] = learner
        self.learners.record(learner)  # materialize the record on first login
        return token

    def actor_for(self, token: str | None) -> str | None:
        if token is None:
            return None
        return self._tokens.get(token)

    # -- recommenders ---------------------------------------------------------

    def recommend_widgets(self, entity: str, learner: str | None) -> list[Recommendation]:
        record = self.learners.record(learner) if learner else None
        return recommend_widgets(self.catalog, entity, record)

    def recommend_content(self, learner: str) -> list[Recommendation]:
        record = self.learners.record(learner)
        return recommend_content(self.catalog, record, self.corpus)

    def scheduler_state(self, learner: str) -> SchedulerState:
        if learner not in self._scheduler_states:
            self._scheduler_states[learner] = fresh_state(learner)
        return self._scheduler_states[learner]

    def next_activity(self, learner: str) -> Recommendation:
        rec, state = next_activity(self.catalog, self.scheduler_state(learner))
        self._scheduler_states[learner] = state
        self.events.append(
            ActivityEvent(
                ts=self._clock(), actor=learner, verb="recommendation.shown",
                object_type="activity", object_id=rec.item_id,
                details=rec.to_dict(),
            )
        )
        return rec

    def activity_outcome(self, learner: str, item_id: str, outcome: str) -> dict:
        state = self.scheduler_state(learner)
        rec = Recommendation(kind="activity", item_id=item_id, score=1)
        record = self.learners.record(learner)
        new_state, drill = record_outcome(self.catalog, state, rec, outcome, learner=record)
        self._scheduler_states[learner] = new_state
        if outcome == "accepted":
            self.events.append(
                ActivityEvent(
                    ts=self._clock(), actor=learner, verb="recommendation.accepted",
                    object_type="activity", object_id=item_id,
                )
            )
            if item_id in self.catalog.techniques:
                self.learners.record_application(learner, item_id)
        elif outcome == "skipped":
            self.events.append(
                ActivityEvent(
                    ts=self._clock(), actor=learner, verb="recommendation.skipped",
                    object_type="activity", object_id=item_id,
                )
            )
        return {
            "state": new_state.to_dict(),
            "techniques": [r.to_dict() for r in drill] if drill is not None else None,
        }

    def accept_widget_recommendation(
        self, space: str, widget_id: str, actor: str, activity: str = "Start"
    ):
        instance = self.spaces.add_widget(space, activity, widget_id, actor)
        self.events.append(
            ActivityEvent(
                ts=self._clock(), actor=actor, verb="recommendation.accepted",
                object_type="widget", object_id=widget_id, space=space,
                details={"instance": instance.instance_id},
            )
        )
        return instance

    def add_bundle(self, space: str, bundle_id: str, actor: str, activity: str = "Start"):
        """Install every widget of a bundle, in bundle order."""
        bundle = self.catalog.bundles.get(bundle_id)
        if bundle is None:
            raise UnknownEntity(f"unknown bundle {bundle_id!r}")
        return [self.spaces.add_widget(space, activity, w, actor) for w in bundle.widgets]

    def lint(self, space_name: str, learner: str | None):
        space = self.spaces.get_space(space_name)
        record = self.learners.record(learner) if learner else None
        return lint_space(self.catalog, space, record)

    # -- monitor --------------------------------------------------------------

    def learner_clusters(self, learner: str):
        return cluster_events(list(self.events.for_actor(learner)))

    def learner_profile(self, learner: str):
        return strategy_profile(self.monitor, learner, list(self.events.for_actor(learner)))

    def suggest_technique(self, learner: str, signature: EventSignature) -> str | None:
        return self.monitor.suggest(learner, signature)

    def assign_technique(self, learner: str, signature: EventSignature, technique: str) -> None:
        ts = self._clock()
        self.monitor.assign(learner, signature, technique, ts)
        if self._assignment_sink is not None:
            import json

            self._assignment_sink.write(
                json.dumps(
                    {
                        "learner": learner,
                        "signature": signature.to_dict(),
                        "technique": technique,
                        "ts": ts,
                    },
                    separators=(",", ":"),
                )
                + "\n"
            )
            self._assignment_sink.flush()

    # -- snapshots and replay ---------------------------------------------------

    def _learner_snapshot(self, learner: str) -> dict:
        rec = self.learners.record(learner)
        from .catalog import competence_to_dict

        return {
            "acquired": [competence_to_dict(c) for _, c in sorted(rec.acquired.items())],
            "goals": [competence_to_dict(c) for _, c in sorted(rec.goals.items())],
            "uses": {w: rec.uses[w] for w in sorted(rec.uses)},
            "applies": [[ts, t] for ts, t in rec.applies],
            "parameters": {k: rec.parameters[k] for k in sorted(rec.parameters)},
        }

    def snapshot(self) -> dict:
        """Deterministic materialized state: what replay must reproduce."""
        return {
            "spaces": self.spaces.snapshot_all(),
            "paradata": self.catalog.paradata(),
            "learners": {l: self._learner_snapshot(l) for l in self.learners.known_learners()},
            "chat": {
                name: [m.to_dict() for m in self.hub.chat_history(name)]
                for name in self.spaces.space_names()
            },
        }

    def apply_event(self, event: ActivityEvent) -> None:
        """Replay one event into materialized state (no re-emission)."""
        if event.verb in _SPACE_VERBS:
            self.spaces.apply_event(event)
            if event.verb == "widget.add":
                self.learners.record_use(event.actor, event.object_id)
            return
        if event.verb in ("competence.set", "goal.set"):
            record = self.learners.record(event.actor)
            competence = competence_from_dict(event.details)
            target = record.acquired if event.verb == "competence.set" else record.goals
            target[competence.key] = competence
            return
        if event.verb == "technique.apply":
            record = self.learners.record(event.actor)
            record.applies.append((event.ts, event.object_id))
            return
        if event.verb == "parameter.set":
            record = self.learners.record(event.actor)
            record.parameters[event.details["key"]] = event.details["value"]
            return
        if event.verb == "chat.post":
            msg = ChatMessage(
                space=event.space, author=event.actor, text=event.details["text"], ts=event.ts
            )
            history = self.hub.chat_history(event.space)
            self.hub.restore_chat(event.space, history + [msg])
            return
        # iwc.publish, widget.load, recommendation.*: logged activity, no state

    @classmethod
    def from_events(
        cls,
        events: Iterable[ActivityEvent],
        catalog: OntologyCatalog | None = None,
        clock: Callable[[], int] | None = None,
        corpus: list[LearningObject] | None = None,
    ) -> "Platform":
        """Rebuild a platform from scratch by replaying an event sequence.

        The catalog must be a fresh copy (paradata is replayed from
        widget.add events on top of whatever counts it carries).
        """
        platform = cls(
            catalog=catalog if catalog is not None else load_default_catalog(),
            clock=clock,
            corpus=corpus if corpus is not None else [],
        )
        for event in events:
            platform.events.append(event)
            platform.apply_event(event)
        return platform

    @classmethod
    def open_data_dir(cls, data_dir: str | Path, **kwargs) -> "Platform":
        """Restore state from <data_dir>/events.jsonl and keep appending to it."""
        from .events import read_event_log

        import json

        data_dir = Path(data_dir)
        data_dir.mkdir(parents=True, exist_ok=True)
        log_path = data_dir / "events.jsonl"
        if log_path.exists():
            platform = cls.from_events(read_event_log(log_path), **kwargs)
        else:
            platform = cls(**kwargs)
        platform.events.set_sink(open(log_path, "a", encoding="utf-8"))
        # manual monitor assignments live outside the learning-event log
        assignments_path = data_dir / "assignments.jsonl"
        if assignments_path.exists():
            for line in assignments_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                row = json.loads(line)
                platform.monitor.assign(
                    row["learner"],
                    EventSignature.from_dict(row["signature"]),
                    row["technique"],
                    row["ts"],
                )
        platform._assignment_sink = open(assignments_path, "a", encoding="utf-8")
        return platform
