"""Activity monitor: map logged events to techniques and strategy profiles.

Observable actions (event signatures) are mapped to learning techniques
either by the learner herself or by majority vote over previous manual
assignments; what neither covers falls back to a shipped default table, and
the rest stays unclassified. Profiles aggregate to the nine strategies.
"""

from __future__ import annotations

import threading
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .catalog import OntologyCatalog
from .errors import UnknownTechnique
from .events import ActivityEvent

# Default signature -> strategy rows. The classic activity names
# "self-evaluation" and "self-reflection" are not among the nine strategies;
# the alias table below folds them into the meta-cognitive ones.
DEFAULT_EVENT_STRATEGIES: tuple[tuple[str, str, str], ...] = (
    ("iwc.publish", "tag.add", "elaboration"),
    ("iwc.publish", "tag.remove", "elaboration"),
    ("competence.set", "*", "self-evaluation"),
    ("iwc.publish", "feed.access", "self-reflection"),
    ("widget.add", "*", "environment_preparation"),
)

STRATEGY_ALIASES: dict[str, str] = {
    "self-evaluation": "self_monitoring",
    "self-reflection": "regulation",
}


@dataclass(frozen=True)
class EventSignature:
    verb: str
    object_type: str
    widget: str | None = None

    def to_dict(self) -> dict:
        return {"verb": self.verb, "object_type": self.object_type, "widget": self.widget}

    @classmethod
    def from_dict(cls, doc: dict) -> "EventSignature":
        return cls(verb=doc["verb"], object_type=doc.get("object_type", ""), widget=doc.get("widget"))


def signature_of(event: ActivityEvent) -> EventSignature:
    """Deterministic signature: verb, object type, and the source widget."""
    if event.verb.startswith("widget."):
        widget = event.object_id
    else:
        widget = event.details.get("widget")
    return EventSignature(verb=event.verb, object_type=event.object_type, widget=widget)


@dataclass(frozen=True)
class Assignment:
    learner: str
    signature: EventSignature
    technique: str
    ts: int


@dataclass(frozen=True)
class StrategyProfile:
    counts: dict[str, int]
    unclassified: int

    @property
    def total(self) -> int:
        return sum(self.counts.values()) + self.unclassified

    def to_dict(self) -> dict:
        return {"counts": dict(self.counts), "unclassified": self.unclassified}


class AssignmentStore:
    """Manual technique assignments plus the default mapping table."""

    def __init__(
        self,
        catalog: OntologyCatalog,
        defaults: tuple[tuple[str, str, str], ...] = DEFAULT_EVENT_STRATEGIES,
        aliases: dict[str, str] | None = None,
    ):
        self.catalog = catalog
        aliases = STRATEGY_ALIASES if aliases is None else aliases
        self._defaults: list[tuple[str, str, str]] = []
        for verb, object_type, strategy in defaults:
            strategy = aliases.get(strategy, strategy)
            if strategy not in catalog.strategies:
                raise UnknownTechnique(f"default mapping names unknown strategy {strategy!r}")
            self._defaults.append((verb, object_type, strategy))
        self.manual: list[Assignment] = []
        self._lock = threading.Lock()

    # -- manual assignments ------------------------------------------------

    def assign(self, learner: str, signature: EventSignature, technique: str, ts: int) -> None:
        if technique not in self.catalog.techniques:
            raise UnknownTechnique(f"unknown technique {technique!r}")
        with self._lock:
            self.manual.append(Assignment(learner, signature, technique, ts))

    def _vote(self, assignments: list[Assignment]) -> str | None:
        """Majority technique; ties resolved by the most recent assignment."""
        if not assignments:
            return None
        votes = Counter(a.technique for a in assignments)
        top = max(votes.values())
        tied = {t for t, n in votes.items() if n == top}
        if len(tied) == 1:
            return next(iter(tied))
        # most recent assignment among the tied techniques wins; list position
        # breaks exact timestamp ties
        for a in reversed(assignments):
            if a.technique in tied:
                return a.technique
        return None

    def suggest(self, learner: str, signature: EventSignature) -> str | None:
        with self._lock:
            mine = [a for a in self.manual if a.learner == learner and a.signature == signature]
            if mine:
                return self._vote(mine)
            everyone = [a for a in self.manual if a.signature == signature]
        return self._vote(everyone)

    # -- defaults ---------------------------------------------------------------

    def default_strategy(self, signature: EventSignature) -> str | None:
        for verb, object_type, strategy in self._defaults:
            if verb == signature.verb and object_type == signature.object_type:
                return strategy
        for verb, object_type, strategy in self._defaults:
            if verb == signature.verb and object_type == "*":
                return strategy
        return None


def cluster_events(events: list[ActivityEvent]) -> list[tuple[EventSignature, int]]:
    """Group events by signature, most frequent first (signature breaks ties)."""
    groups: Counter = Counter(signature_of(e) for e in events)
    return sorted(
        groups.items(),
        key=lambda kv: (-kv[1], kv[0].verb, kv[0].object_type, kv[0].widget or ""),
    )


def strategy_profile(
    store: AssignmentStore, learner: str, events: list[ActivityEvent]
) -> StrategyProfile:
    """Per-strategy activity counts for one learner's event set.

    An event counts toward the strategy of its manually assigned or suggested
    technique; then the default table; otherwise it stays unclassified, so
    counts plus unclassified always equal the number of input events.
    """
    catalog = store.catalog
    counts = {s.id: 0 for s in catalog.ordered_strategies()}
    unclassified = 0
    suggestions: dict[EventSignature, str | None] = {}
    for event in events:
        # an explicit application names its technique; no mapping needed
        if event.verb == "technique.apply" and event.object_id in catalog.techniques:
            counts[catalog.strategy_of_technique(event.object_id).id] += 1
            continue
        sig = signature_of(event)
        if sig not in suggestions:
            suggestions[sig] = store.suggest(learner, sig)
        technique = suggestions[sig]
        if technique is not None:
            counts[catalog.strategy_of_technique(technique).id] += 1
            continue
        strategy = store.default_strategy(sig)
        if strategy is not None:
            counts[strategy] += 1
        else:
            unclassified += 1
    return StrategyProfile(counts=counts, unclassified=unclassified)
