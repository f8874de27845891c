"""srlspace: a widget-space platform for self-regulated learning.

Modules
-------
catalog    ontology: phases, strategies, techniques, categories, widgets
learner    per-learner competences, goals, history; open learner model feed
spaces     shared widget spaces, event-sourced
realtime   per-space pub/sub, chat, presence
recommend  widget / activity / content recommenders, mashup lint
monitor    event-to-technique mapping and strategy profiles
analytics  batch usage-report pipeline and the `analyze` CLI
platform   facade wiring everything plus persistence
server     FastAPI app exposing the REST + /rt interfaces
"""

from .catalog import (
    DomainCompetence,
    OntologyCatalog,
    SrlCompetence,
    ToolCompetence,
    load_catalog,
    load_default_catalog,
)
from .events import ActivityEvent, EventLog, read_event_log, write_event_log
from .learner import CompetenceGap, LearnerRecord, LearnerStore
from .monitor import AssignmentStore, EventSignature, cluster_events, signature_of, strategy_profile
from .platform import Platform
from .realtime import RealtimeHub
from .recommend import (
    Recommendation,
    SchedulerState,
    fresh_state,
    lint_space,
    next_activity,
    recommend_content,
    recommend_widgets,
    record_outcome,
)
from .spaces import Layout, Space, SpaceService

__version__ = "0.1.0"

__all__ = [
    "ActivityEvent",
    "AssignmentStore",
    "CompetenceGap",
    "DomainCompetence",
    "EventLog",
    "EventSignature",
    "Layout",
    "LearnerRecord",
    "LearnerStore",
    "OntologyCatalog",
    "Platform",
    "RealtimeHub",
    "Recommendation",
    "SchedulerState",
    "Space",
    "SpaceService",
    "SrlCompetence",
    "ToolCompetence",
    "cluster_events",
    "fresh_state",
    "lint_space",
    "load_catalog",
    "load_default_catalog",
    "next_activity",
    "read_event_log",
    "recommend_content",
    "recommend_widgets",
    "record_outcome",
    "signature_of",
    "strategy_profile",
    "write_event_log",
]
