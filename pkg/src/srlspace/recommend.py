"""The three recommenders (widgets, activities, content) and the mashup lint.

All functions here are pure over snapshots of catalog/learner/space state;
the scheduler threads its state explicitly. Scores are small non-negative
integers, so ranking is exact: score desc, widget add_count desc, id asc.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from .catalog import (
    DomainCompetence,
    OntologyCatalog,
    PHASES,
    SrlCompetence,
    ToolCompetence,
)
from .errors import CorpusUnavailable, StaleRecommendation, UnknownSpace
from .learner import LearnerRecord, compute_gap
from .spaces import Space

SKIP_COOLDOWN = 3
LINT_MAX_WIDGETS = 12


@dataclass(frozen=True)
class Recommendation:
    kind: str  # widget | activity | content
    item_id: str
    score: int
    reasons: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "item_id": self.item_id, "score": self.score, "reasons": list(self.reasons)}


def _sort(recs: list[Recommendation], catalog: OntologyCatalog) -> list[Recommendation]:
    def add_count(rec: Recommendation) -> int:
        w = catalog.widgets.get(rec.item_id)
        return w.add_count if w is not None else 0

    return sorted(recs, key=lambda r: (-r.score, -add_count(r), r.item_id))


# -- widget recommendation ----------------------------------------------------

def goal_strategy_bonus(catalog: OntologyCatalog, widget_techniques: frozenset[str], goal_strategies: set[str]) -> int:
    """How many of the learner's goal SRL strategies this widget serves.

    A strategy counts when its technique set intersects the widget's
    techniques, so widgets tied to a goal strategy rank above unrelated ones.
    """
    bonus = 0
    for strategy in goal_strategies:
        if strategy not in catalog.strategies:
            continue
        techniques = {t.id for t in catalog.techniques_for(strategy)}
        if techniques & widget_techniques:
            bonus += 1
    return bonus


def recommend_widgets(
    catalog: OntologyCatalog, entity: str, learner: LearnerRecord | None = None
) -> list[Recommendation]:
    """Ranked widgets for one template entity (phase, strategy, or technique)."""
    goal_strategies: set[str] = set()
    if learner is not None:
        goal_strategies = {
            c.strategy for c in learner.goals.values() if isinstance(c, SrlCompetence)
        }
    recs = []
    for widget in catalog.widgets_for(entity):
        bonus = goal_strategy_bonus(catalog, widget.techniques, goal_strategies)
        reasons = [f"supports {entity}"]
        if bonus:
            reasons.append(f"matches {bonus} goal strateg{'y' if bonus == 1 else 'ies'}")
        recs.append(Recommendation(kind="widget", item_id=widget.id, score=1 + bonus, reasons=tuple(reasons)))
    return _sort(recs, catalog)


# -- activity scheduling ------------------------------------------------------

@dataclass(frozen=True)
class SchedulerState:
    learner_id: str
    counts: tuple[tuple[str, int], ...] = ()
    cooldowns: tuple[tuple[str, int], ...] = ()
    cursor: str = "plan"
    pending: tuple[str, ...] = ()

    def count_map(self) -> dict[str, int]:
        return dict(self.counts)

    def cooldown_map(self) -> dict[str, int]:
        return dict(self.cooldowns)

    def to_dict(self) -> dict:
        return {
            "learner_id": self.learner_id,
            "counts": dict(self.counts),
            "cooldowns": dict(self.cooldowns),
            "cursor": self.cursor,
            "pending": list(self.pending),
        }


def fresh_state(learner_id: str) -> SchedulerState:
    return SchedulerState(learner_id=learner_id)


def _freeze(mapping: dict[str, int]) -> tuple[tuple[str, int], ...]:
    return tuple(sorted((k, v) for k, v in mapping.items() if v != 0))


def _next_phase(phase: str) -> str:
    idx = PHASES.index(phase)
    return PHASES[(idx + 1) % len(PHASES)]


def next_activity(catalog: OntologyCatalog, state: SchedulerState) -> tuple[Recommendation, SchedulerState]:
    """Pick the least-covered strategy, preferring the cursor phase on ties.

    Selection is min-count over all strategies not on cooldown; among ties the
    phases are scanned starting at the cursor (falling through to the next
    phase when the cursor phase has no candidate), then catalog order. This
    keeps coverage fair across all nine strategies while still walking the
    phase cycle.
    """
    counts = state.count_map()
    cooldowns = state.cooldown_map()
    ordered = catalog.ordered_strategies()
    eligible = [s for s in ordered if cooldowns.get(s.id, 0) == 0]
    if not eligible:
        eligible = list(ordered)
    low = min(counts.get(s.id, 0) for s in eligible)
    ties = [s for s in eligible if counts.get(s.id, 0) == low]
    pick = None
    phase = state.cursor
    for _ in range(len(PHASES)):
        in_phase = [s for s in ties if s.phase == phase]
        if in_phase:
            pick = in_phase[0]
            break
        phase = _next_phase(phase)
    if pick is None:  # ties never empty, but keep the fall-back total
        pick = ties[0]
    rec = Recommendation(
        kind="activity",
        item_id=pick.id,
        score=1,
        reasons=(f"{pick.phase}-phase strategy", f"covered {counts.get(pick.id, 0)} times so far"),
    )
    return rec, replace(state, pending=(pick.id,))


def _tick_cooldowns(cooldowns: dict[str, int]) -> dict[str, int]:
    return {k: v - 1 for k, v in cooldowns.items() if v > 1}


def record_outcome(
    catalog: OntologyCatalog,
    state: SchedulerState,
    rec: Recommendation,
    outcome: str,
    learner: LearnerRecord | None = None,
    skip_cooldown: int = SKIP_COOLDOWN,
) -> tuple[SchedulerState, list[Recommendation] | None]:
    """Advance the scheduler after the learner reacted to a recommendation.

    accepted   -> strategy count +1, cursor moves one phase on
    skipped    -> the entity goes on cooldown for ``skip_cooldown`` steps
    drill_down -> returns the strategy's techniques, tool-competent ones first
    """
    if rec.item_id not in state.pending:
        raise StaleRecommendation(f"{rec.item_id!r} was not the pending recommendation")
    counts = state.count_map()
    cooldowns = state.cooldown_map()

    if outcome == "drill_down":
        if rec.item_id not in catalog.strategies:
            raise StaleRecommendation(f"drill_down applies to strategies, got {rec.item_id!r}")
        competent: set[str] = set()
        if learner is not None:
            competent = {
                c.technique for c in learner.acquired.values() if isinstance(c, ToolCompetence)
            }
        techniques = [
            t for t in catalog.techniques_for(rec.item_id) if cooldowns.get(t.id, 0) == 0
        ]
        techniques.sort(key=lambda t: (0 if t.id in competent else 1, t.id))
        drill = [
            Recommendation(
                kind="activity",
                item_id=t.id,
                score=2 if t.id in competent else 1,
                reasons=(f"technique of {rec.item_id}",)
                + (("you already learn well with a tool for it",) if t.id in competent else ()),
            )
            for t in techniques
        ]
        new_state = replace(state, pending=tuple(t.item_id for t in drill) or state.pending)
        return new_state, drill

    if outcome == "accepted":
        if rec.item_id in catalog.strategies:
            strategy = rec.item_id
        else:
            strategy = catalog.strategy_of_technique(rec.item_id).id
        counts[strategy] = counts.get(strategy, 0) + 1
        new_state = replace(
            state,
            counts=_freeze(counts),
            cooldowns=_freeze(_tick_cooldowns(cooldowns)),
            cursor=_next_phase(state.cursor),
            pending=(),
        )
        return new_state, None

    if outcome == "skipped":
        cooldowns = _tick_cooldowns(cooldowns)
        cooldowns[rec.item_id] = skip_cooldown
        new_state = replace(state, cooldowns=_freeze(cooldowns), pending=())
        return new_state, None

    raise ValueError(f"unknown outcome {outcome!r}")


# -- content recommendation -----------------------------------------------------

@dataclass(frozen=True)
class LearningObject:
    id: str
    title: str
    text: str
    concepts: tuple[str, ...]


def load_corpus(path: str | Path) -> list[LearningObject]:
    try:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise CorpusUnavailable(f"cannot load corpus {path}: {exc}") from exc
    objects = []
    for row in (doc or {}).get("objects", []):
        objects.append(
            LearningObject(
                id=row["id"],
                title=row.get("title", row["id"]),
                text=row.get("text", ""),
                concepts=tuple(row.get("concepts", [])),
            )
        )
    return objects


def recommend_content(
    catalog: OntologyCatalog, learner: LearnerRecord, corpus: list[LearningObject] | None
) -> list[Recommendation]:
    """Learning objects matching the learner's goal domain concepts."""
    if corpus is None:
        raise CorpusUnavailable("no learning-object corpus loaded")
    query = {c.concept for c in learner.goals.values() if isinstance(c, DomainCompetence)}
    for entry in compute_gap(learner).entries:
        if entry.key[0] == "domain":
            query.add(entry.key[1])
    if not query:
        return []
    recs = []
    for obj in corpus:
        score = len(set(obj.concepts) & query)
        matched = sorted(set(obj.concepts) & query)
        if score == 0:
            title = obj.title.lower()
            hits = sorted(c for c in query if c.replace("_", " ") in title)
            score = len(hits)
            matched = hits
        if score > 0:
            recs.append(
                Recommendation(
                    kind="content",
                    item_id=obj.id,
                    score=score,
                    reasons=tuple(f"matches goal concept {c}" for c in matched),
                )
            )
    return _sort(recs, catalog)


# -- mashup design lint -----------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    code: str  # missing_phase_coverage | too_many_widgets | unfamiliar_tool
    subject: str
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code, "subject": self.subject, "message": self.message}


def lint_space(
    catalog: OntologyCatalog,
    space: Space | None,
    learner: LearnerRecord | None = None,
    max_widgets: int = LINT_MAX_WIDGETS,
) -> list[Finding]:
    """Advisory findings about a space's pedagogical design; never blocking."""
    if space is None:
        raise UnknownSpace("space does not exist")
    instances = [inst for act in space.activities for inst in act.widgets]
    widget_ids = sorted({inst.widget_id for inst in instances})

    covered: set[str] = set()
    for wid in widget_ids:
        widget = catalog.widgets.get(wid)
        if widget is None:
            continue
        for t in widget.techniques:
            covered.add(catalog.strategy_of_technique(t).phase)

    findings: list[Finding] = []
    for phase in PHASES:
        if phase not in covered:
            findings.append(
                Finding(
                    "missing_phase_coverage",
                    phase,
                    f"no widget in the space supports a {phase}-phase strategy",
                )
            )
    if len(instances) > max_widgets:
        findings.append(
            Finding(
                "too_many_widgets",
                str(len(instances)),
                f"{len(instances)} widgets may overwhelm learners (soft limit {max_widgets})",
            )
        )
    if learner is not None:
        familiar_tools = {c.tool for c in learner.acquired.values() if isinstance(c, ToolCompetence)}
        familiar_techniques = {
            c.technique for c in learner.acquired.values() if isinstance(c, ToolCompetence)
        }
        for wid in widget_ids:
            widget = catalog.widgets.get(wid)
            if widget is None:
                continue
            if wid in familiar_tools or (widget.techniques & familiar_techniques):
                continue
            findings.append(
                Finding(
                    "unfamiliar_tool",
                    wid,
                    f"{wid} has no overlap with the learner's tool competences",
                )
            )
    return findings
