"""Per-learner state: competences, goals, usage, applied techniques, parameters.

The store is the write side of the open learner model: every record keeps
acquired and goal competences keyed structurally (level replaced on re-set),
the widgets a learner has used (a counter), and a time-ordered history of
applied techniques. ``feed`` renders the whole record as one deterministic
document for the learner-facing views.
"""

from __future__ import annotations

import threading
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .catalog import Competence, OntologyCatalog, SrlCompetence, ToolCompetence, competence_to_dict
from .errors import NonMonotonicTimestamp, UnknownLearner, UnknownTechnique
from .events import ActivityEvent


def _now_ms() -> int:
    return int(time.time() * 1000)


@dataclass
class LearnerRecord:
    learner_id: str
    acquired: dict[tuple, Competence] = field(default_factory=dict)
    goals: dict[tuple, Competence] = field(default_factory=dict)
    uses: Counter = field(default_factory=Counter)
    applies: list[tuple[int, str]] = field(default_factory=list)
    parameters: dict[str, str] = field(default_factory=dict)

    def application_counts(self) -> Counter:
        return Counter(technique for _, technique in self.applies)


@dataclass(frozen=True)
class GapEntry:
    key: tuple
    have: int  # 0 when the competence is absent from the acquired set
    want: int


@dataclass(frozen=True)
class CompetenceGap:
    entries: tuple[GapEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


def compute_gap(record: LearnerRecord) -> CompetenceGap:
    """Goals not yet covered by acquired competences at the goal's level."""
    entries = []
    for key, goal in sorted(record.goals.items()):
        want = goal.level
        acquired = record.acquired.get(key)
        have = acquired.level if acquired is not None else 0
        if have < want:
            entries.append(GapEntry(key=key, have=have, want=want))
    return CompetenceGap(entries=tuple(entries))


class LearnerStore:
    """Holds learner records; writes are serialized per learner."""

    def __init__(
        self,
        catalog: OntologyCatalog,
        emit: Callable[[ActivityEvent], None] | None = None,
        clock: Callable[[], int] | None = None,
    ):
        self.catalog = catalog
        self._emit = emit
        self._clock = clock or _now_ms
        self._records: dict[str, LearnerRecord] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, learner: str) -> threading.Lock:
        with self._registry_lock:
            if learner not in self._locks:
                self._locks[learner] = threading.Lock()
            return self._locks[learner]

    def record(self, learner: str, create: bool = True) -> LearnerRecord:
        with self._registry_lock:
            rec = self._records.get(learner)
            if rec is None:
                if not create:
                    raise UnknownLearner(f"unknown learner {learner!r}")
                rec = LearnerRecord(learner_id=learner)
                self._records[learner] = rec
            return rec

    def known_learners(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._records)

    # -- writes ---------------------------------------------------------------

    def set_competence(self, learner: str, competence: Competence, kind: str) -> LearnerRecord:
        if kind not in ("acquired", "goal"):
            raise ValueError(f"kind must be 'acquired' or 'goal', got {kind!r}")
        self.catalog.resolve_competence(competence)
        with self._lock_for(learner):
            rec = self.record(learner)
            target = rec.acquired if kind == "acquired" else rec.goals
            target[competence.key] = competence
        if self._emit is not None:
            verb = "competence.set" if kind == "acquired" else "goal.set"
            self._emit(
                ActivityEvent(
                    ts=self._clock(),
                    actor=learner,
                    verb=verb,
                    object_type="competence",
                    object_id=":".join(str(p) for p in competence.key),
                    details=competence_to_dict(competence),
                )
            )
        return rec

    def record_application(self, learner: str, technique: str, ts: int | None = None) -> None:
        if technique not in self.catalog.techniques:
            raise UnknownTechnique(f"unknown technique {technique!r}")
        ts = self._clock() if ts is None else ts
        with self._lock_for(learner):
            rec = self.record(learner)
            if rec.applies and ts < rec.applies[-1][0]:
                raise NonMonotonicTimestamp(
                    f"application ts {ts} precedes history tail {rec.applies[-1][0]}"
                )
            rec.applies.append((ts, technique))
        if self._emit is not None:
            self._emit(
                ActivityEvent(
                    ts=ts,
                    actor=learner,
                    verb="technique.apply",
                    object_type="technique",
                    object_id=technique,
                )
            )
        return None

    def record_use(self, learner: str, widget: str) -> None:
        """Count one use of a widget; no event (the widget.add/load op owns it)."""
        with self._lock_for(learner):
            rec = self.record(learner)
            rec.uses[widget] += 1

    def set_parameter(self, learner: str, key: str, value: str) -> None:
        with self._lock_for(learner):
            rec = self.record(learner)
            rec.parameters[key] = value
        if self._emit is not None:
            self._emit(
                ActivityEvent(
                    ts=self._clock(),
                    actor=learner,
                    verb="parameter.set",
                    object_type="parameter",
                    object_id=key,
                    details={"key": key, "value": value},
                )
            )

    # -- reads ----------------------------------------------------------------

    def competence_gap(self, learner: str) -> CompetenceGap:
        return compute_gap(self.record(learner))

    def strategy_histogram(self, learner: str) -> dict[str, int]:
        """Applications rolled up to strategies via the catalog technique links."""
        rec = self.record(learner)
        counts = {s.id: 0 for s in self.catalog.ordered_strategies()}
        for _, technique in rec.applies:
            t = self.catalog.techniques.get(technique)
            if t is not None:
                counts[t.strategy] += 1
        return counts

    def feed(self, learner: str, last_n: int = 20) -> dict:
        """Open-learner-model document; field order is fixed."""
        with self._registry_lock:
            if learner not in self._records:
                raise UnknownLearner(f"unknown learner {learner!r}")
        rec = self.record(learner)
        gap = compute_gap(rec)
        return {
            "learner_id": learner,
            "acquired": [competence_to_dict(c) for _, c in sorted(rec.acquired.items())],
            "goals": [competence_to_dict(c) for _, c in sorted(rec.goals.items())],
            "gap": [
                {"key": list(e.key), "have": e.have, "want": e.want} for e in gap.entries
            ],
            "strategy_counts": self.strategy_histogram(learner),
            "uses": {
                "distinct": sorted(rec.uses),
                "counts": {w: rec.uses[w] for w in sorted(rec.uses)},
            },
            "parameters": {k: rec.parameters[k] for k in sorted(rec.parameters)},
            "recent_applications": [
                {"ts": ts, "technique": t} for ts, t in rec.applies[-last_n:]
            ],
        }

    def acquired_tool_techniques(self, learner: str) -> set[str]:
        rec = self.record(learner)
        return {c.technique for c in rec.acquired.values() if isinstance(c, ToolCompetence)}

    def acquired_tools(self, learner: str) -> set[str]:
        rec = self.record(learner)
        return {c.tool for c in rec.acquired.values() if isinstance(c, ToolCompetence)}

    def goal_srl_strategies(self, learner: str) -> set[str]:
        rec = self.record(learner)
        return {c.strategy for c in rec.goals.values() if isinstance(c, SrlCompetence)}
