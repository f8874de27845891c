"""Ontology catalog: phases, strategies, techniques, categories, widgets.

The catalog is loaded from a single YAML document and is immutable after
load, except for the per-widget ``add_count`` paradata which is updated
atomically. Queries walk the technique links: a widget is reachable from a
technique directly, from a strategy via its techniques, and from a phase via
its strategies.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Union

import yaml

from .errors import (
    CatalogParseError,
    CatalogValidationError,
    UnknownCatalogReference,
    UnknownEntity,
    UnknownStrategy,
    UnknownWidget,
)

PHASES: tuple[str, ...] = ("plan", "prepare", "learn", "reflect")
STRATEGY_GROUPS: tuple[str, ...] = ("cognitive", "meta_cognitive", "resource_management")

CATEGORY_LABELS: tuple[str, ...] = (
    "Search & Get Recommendation",
    "Plan & Organize",
    "Communicate & Collaborate",
    "Create & Modify",
    "Train & Test",
    "Explore & View Content",
    "Reflect & Evaluate",
)

EQF_MIN = 1
EQF_MAX = 8


def validate_eqf_level(level: int) -> int:
    if not isinstance(level, int) or isinstance(level, bool) or not EQF_MIN <= level <= EQF_MAX:
        raise ValueError(f"proficiency level must be an integer in {EQF_MIN}..{EQF_MAX}, got {level!r}")
    return level


@dataclass(frozen=True)
class Strategy:
    id: str
    name: str
    group: str
    phase: str


@dataclass(frozen=True)
class Technique:
    id: str
    name: str
    strategy: str


@dataclass(frozen=True)
class Category:
    id: str
    phases: frozenset[str]


@dataclass(frozen=True)
class Vocabulary:
    id: str
    concepts: frozenset[str]
    open: bool = False

    def has_concept(self, concept: str) -> bool:
        return self.open or concept in self.concepts


@dataclass
class WidgetDescriptor:
    id: str
    title: str
    description: str
    launch_url: str
    techniques: frozenset[str]
    categories: frozenset[str]
    srl_flag: bool = False
    add_count: int = 0

    @property
    def search_text(self) -> str:
        return f"{self.title} {self.description}".lower()


@dataclass(frozen=True)
class WidgetBundle:
    id: str
    title: str
    widgets: tuple[str, ...]


@dataclass(frozen=True)
class Template:
    id: str
    title: str
    entities: tuple[str, ...]


# -- competences -------------------------------------------------------------
#
# Three kinds, keyed structurally by (kind, ids); the level never enters the
# set-membership key, so re-setting a competence replaces its level.

@dataclass(frozen=True)
class DomainCompetence:
    concept: str
    context: str
    level: int

    @property
    def key(self) -> tuple:
        return ("domain", self.concept, self.context)


@dataclass(frozen=True)
class ToolCompetence:
    tool: str
    technique: str

    # tool competences carry no EQF level; gap arithmetic treats them as
    # present (1) or absent (0)
    level: int = 1

    @property
    def key(self) -> tuple:
        return ("tool", self.tool, self.technique)


@dataclass(frozen=True)
class SrlCompetence:
    strategy: str
    level: int

    @property
    def key(self) -> tuple:
        return ("srl", self.strategy)


Competence = Union[DomainCompetence, ToolCompetence, SrlCompetence]


def competence_to_dict(c: Competence) -> dict:
    if isinstance(c, DomainCompetence):
        return {"kind": "domain", "concept": c.concept, "context": c.context, "level": c.level}
    if isinstance(c, ToolCompetence):
        return {"kind": "tool", "tool": c.tool, "technique": c.technique}
    return {"kind": "srl", "strategy": c.strategy, "level": c.level}


def competence_from_dict(doc: dict) -> Competence:
    kind = doc.get("kind")
    if kind == "domain":
        return DomainCompetence(doc["concept"], doc["context"], validate_eqf_level(doc["level"]))
    if kind == "tool":
        return ToolCompetence(doc["tool"], doc["technique"])
    if kind == "srl":
        return SrlCompetence(doc["strategy"], validate_eqf_level(doc["level"]))
    raise ValueError(f"unknown competence kind {kind!r}")


class OntologyCatalog:
    """Cross-referenced view over one catalog document."""

    def __init__(
        self,
        *,
        version: int,
        strategies: list[Strategy],
        techniques: list[Technique],
        categories: list[Category],
        vocabularies: list[Vocabulary],
        widgets: list[WidgetDescriptor],
        bundles: list[WidgetBundle],
        templates: list[Template],
    ):
        self.version = version
        self.phases = PHASES
        self.strategy_groups = STRATEGY_GROUPS
        self.strategies: dict[str, Strategy] = {s.id: s for s in strategies}
        self.techniques: dict[str, Technique] = {t.id: t for t in techniques}
        self.categories: dict[str, Category] = {c.id: c for c in categories}
        self.vocabularies: dict[str, Vocabulary] = {v.id: v for v in vocabularies}
        self.widgets: dict[str, WidgetDescriptor] = {w.id: w for w in widgets}
        self.bundles: dict[str, WidgetBundle] = {b.id: b for b in bundles}
        self.templates: dict[str, Template] = {t.id: t for t in templates}
        self._strategy_order = [s.id for s in strategies]
        self._paradata_lock = threading.Lock()
        # technique -> widget ids, built once
        self._widgets_by_technique: dict[str, list[str]] = {t.id: [] for t in techniques}
        for w in widgets:
            for t in sorted(w.techniques):
                self._widgets_by_technique[t].append(w.id)

    # -- structure queries --------------------------------------------------

    def ordered_strategies(self) -> list[Strategy]:
        """Strategies in catalog (file) order; the scheduler's tie-break order."""
        return [self.strategies[s] for s in self._strategy_order]

    def strategies_for_phase(self, phase: str) -> list[Strategy]:
        if phase not in PHASES:
            raise UnknownEntity(f"unknown phase {phase!r}")
        return [s for s in self.ordered_strategies() if s.phase == phase]

    def techniques_for(self, strategy: str) -> list[Technique]:
        if strategy not in self.strategies:
            raise UnknownStrategy(f"unknown strategy {strategy!r}")
        found = [t for t in self.techniques.values() if t.strategy == strategy]
        return sorted(found, key=lambda t: t.id)

    def strategy_of_technique(self, technique: str) -> Strategy:
        t = self.techniques.get(technique)
        if t is None:
            raise UnknownEntity(f"unknown technique {technique!r}")
        return self.strategies[t.strategy]

    def widgets_for(self, entity: str) -> list[WidgetDescriptor]:
        """Widgets reachable from a phase, strategy, or technique id."""
        if entity in self.techniques:
            ids = set(self._widgets_by_technique[entity])
        elif entity in self.strategies:
            ids = set()
            for t in self.techniques_for(entity):
                ids.update(self._widgets_by_technique[t.id])
        elif entity in PHASES:
            ids = set()
            for s in self.strategies_for_phase(entity):
                for t in self.techniques_for(s.id):
                    ids.update(self._widgets_by_technique[t.id])
        else:
            raise UnknownEntity(f"unknown phase/strategy/technique {entity!r}")
        return [self.widgets[w] for w in sorted(ids)]

    def search_widgets(self, query: str, category: str | None = None) -> list[WidgetDescriptor]:
        """Substring search over title+description, ranked by paradata.

        Ordering is total: add_count descending, then id ascending, so
        repeated calls on identical state return identical lists.
        """
        needle = query.lower()
        hits = [w for w in self.widgets.values() if needle in w.search_text]
        if category is not None:
            if category not in self.categories:
                raise UnknownEntity(f"unknown category {category!r}")
            hits = [w for w in hits if category in w.categories]
        return sorted(hits, key=lambda w: (-w.add_count, w.id))

    def srl_widget_ids(self) -> list[str]:
        return sorted(w.id for w in self.widgets.values() if w.srl_flag)

    # -- paradata -----------------------------------------------------------

    def record_widget_added(self, widget: str) -> int:
        """Atomically bump a widget's added-to-space counter."""
        with self._paradata_lock:
            w = self.widgets.get(widget)
            if w is None:
                raise UnknownWidget(f"unknown widget {widget!r}")
            w.add_count += 1
            return w.add_count

    def paradata(self) -> dict[str, int]:
        with self._paradata_lock:
            return {w.id: w.add_count for w in sorted(self.widgets.values(), key=lambda x: x.id)}

    # -- competence validation ----------------------------------------------

    def resolve_competence(self, c: Competence) -> None:
        """Raise UnknownCatalogReference unless every id in ``c`` resolves."""
        if isinstance(c, DomainCompetence):
            vocab = self.vocabularies.get(c.context)
            if vocab is None:
                raise UnknownCatalogReference(f"unknown vocabulary {c.context!r}")
            if not vocab.has_concept(c.concept):
                raise UnknownCatalogReference(f"unknown concept {c.concept!r} in vocabulary {c.context!r}")
        elif isinstance(c, ToolCompetence):
            if c.tool not in self.widgets:
                raise UnknownCatalogReference(f"unknown widget {c.tool!r}")
            if c.technique not in self.techniques:
                raise UnknownCatalogReference(f"unknown technique {c.technique!r}")
        elif isinstance(c, SrlCompetence):
            if c.strategy not in self.strategies:
                raise UnknownCatalogReference(f"unknown strategy {c.strategy!r}")
        else:
            raise UnknownCatalogReference(f"unknown competence variant {type(c).__name__}")

    # -- summary ------------------------------------------------------------

    def counts(self) -> dict[str, int]:
        return {
            "phases": len(self.phases),
            "strategies": len(self.strategies),
            "techniques": len(self.techniques),
            "categories": len(self.categories),
            "widgets": len(self.widgets),
            "bundles": len(self.bundles),
        }


# -- loading ------------------------------------------------------------------

def _as_list(doc: dict, key: str) -> list:
    value = doc.get(key, [])
    if value is None:
        return []
    if not isinstance(value, list):
        raise CatalogParseError(f"section {key!r} must be a list")
    return value


def catalog_from_dict(doc: dict) -> OntologyCatalog:
    """Build and validate a catalog from a parsed document.

    All dangling references and structural violations are collected and
    reported together in one CatalogValidationError.
    """
    if not isinstance(doc, dict):
        raise CatalogParseError("catalog document must be a mapping")
    problems: list[str] = []

    version = doc.get("catalog_version")
    if not isinstance(version, int):
        problems.append("missing or non-integer catalog_version")
        version = 0

    phases = doc.get("phases", list(PHASES))
    if list(phases) != list(PHASES):
        problems.append(f"phase set must be exactly {list(PHASES)} in order, got {phases!r}")

    groups = doc.get("strategy_groups", list(STRATEGY_GROUPS))
    if sorted(groups) != sorted(STRATEGY_GROUPS):
        problems.append(f"strategy groups must be exactly {sorted(STRATEGY_GROUPS)}, got {sorted(groups)!r}")

    strategies: list[Strategy] = []
    for row in _as_list(doc, "strategies"):
        sid = row.get("id", "?")
        if row.get("group") not in STRATEGY_GROUPS:
            problems.append(f"strategy {sid}: unknown group {row.get('group')!r}")
        if row.get("phase") not in PHASES:
            problems.append(f"strategy {sid}: unknown phase {row.get('phase')!r}")
        strategies.append(Strategy(sid, row.get("name", sid), row.get("group", ""), row.get("phase", "")))
    strategy_ids = {s.id for s in strategies}
    if len(strategy_ids) != len(strategies):
        problems.append("duplicate strategy ids")

    techniques: list[Technique] = []
    for row in _as_list(doc, "techniques"):
        tid = row.get("id", "?")
        if row.get("strategy") not in strategy_ids:
            problems.append(f"technique {tid}: unknown strategy {row.get('strategy')!r}")
        techniques.append(Technique(tid, row.get("name", tid), row.get("strategy", "")))
    technique_ids = {t.id for t in techniques}
    if len(technique_ids) != len(techniques):
        problems.append("duplicate technique ids")

    category_rows = _as_list(doc, "categories")
    categories: list[Category] = []
    if category_rows:
        labels = [row.get("id") for row in category_rows]
        if sorted(labels) != sorted(CATEGORY_LABELS):
            problems.append(f"categories must be exactly the {len(CATEGORY_LABELS)} store labels, got {sorted(labels)!r}")
        for row in category_rows:
            cat_phases = row.get("phases", [])
            if not cat_phases:
                problems.append(f"category {row.get('id')!r}: must map to at least one phase")
            for p in cat_phases:
                if p not in PHASES:
                    problems.append(f"category {row.get('id')!r}: unknown phase {p!r}")
            categories.append(Category(row.get("id", "?"), frozenset(cat_phases)))
    else:
        # categories section is optional; default store labels + phase mapping
        default_phases = {
            "Search & Get Recommendation": ("prepare",),
            "Plan & Organize": ("plan",),
            "Communicate & Collaborate": ("learn",),
            "Create & Modify": ("learn",),
            "Train & Test": ("learn",),
            "Explore & View Content": ("learn",),
            "Reflect & Evaluate": ("reflect",),
        }
        categories = [Category(label, frozenset(default_phases[label])) for label in CATEGORY_LABELS]
    category_ids = {c.id for c in categories}

    vocabularies = [
        Vocabulary(row["id"], frozenset(row.get("concepts", [])), bool(row.get("open", False)))
        for row in _as_list(doc, "vocabularies")
    ]

    widgets: list[WidgetDescriptor] = []
    for row in _as_list(doc, "widgets"):
        wid = row.get("id", "?")
        for t in row.get("techniques", []):
            if t not in technique_ids:
                problems.append(f"widget {wid}: unknown technique {t!r}")
        for c in row.get("categories", []):
            if c not in category_ids:
                problems.append(f"widget {wid}: unknown category {c!r}")
        add_count = row.get("add_count", 0)
        if not isinstance(add_count, int) or add_count < 0:
            problems.append(f"widget {wid}: add_count must be a non-negative integer")
            add_count = 0
        widgets.append(
            WidgetDescriptor(
                id=wid,
                title=row.get("title", wid),
                description=row.get("description", ""),
                launch_url=row.get("launch_url", ""),
                techniques=frozenset(row.get("techniques", [])),
                categories=frozenset(row.get("categories", [])),
                srl_flag=bool(row.get("srl", False)),
                add_count=add_count,
            )
        )
    widget_ids = {w.id for w in widgets}
    if len(widget_ids) != len(widgets):
        problems.append("duplicate widget ids")

    bundles: list[WidgetBundle] = []
    for row in _as_list(doc, "bundles"):
        bid = row.get("id", "?")
        members = row.get("widgets", [])
        if not members:
            problems.append(f"bundle {bid}: must contain at least one widget")
        for w in members:
            if w not in widget_ids:
                problems.append(f"bundle {bid}: unknown widget {w!r}")
        bundles.append(WidgetBundle(bid, row.get("title", bid), tuple(members)))

    templates: list[Template] = []
    known_entities = set(PHASES) | strategy_ids | technique_ids
    for row in _as_list(doc, "templates"):
        tid = row.get("id", "?")
        entities = row.get("entities", [])
        if not entities:
            problems.append(f"template {tid}: must contain at least one entity")
        for e in entities:
            if e not in known_entities:
                problems.append(f"template {tid}: unknown entity {e!r}")
        templates.append(Template(tid, row.get("title", tid), tuple(entities)))

    if problems:
        raise CatalogValidationError(problems)

    return OntologyCatalog(
        version=version,
        strategies=strategies,
        techniques=techniques,
        categories=categories,
        vocabularies=vocabularies,
        widgets=widgets,
        bundles=bundles,
        templates=templates,
    )


def load_catalog(path: str | Path) -> OntologyCatalog:
    """Load a catalog document from a YAML file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogParseError(f"cannot read catalog file {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise CatalogParseError(f"catalog file {path} is not valid YAML: {exc}") from exc
    return catalog_from_dict(doc)


def default_catalog_path() -> Path:
    return Path(str(resources.files("srlspace").joinpath("data/catalog.yaml")))


def load_default_catalog() -> OntologyCatalog:
    return load_catalog(default_catalog_path())


def union_widgets(catalog: OntologyCatalog, entities: Iterable[str]) -> list[WidgetDescriptor]:
    """De-duplicated union of widgets_for over several entities, id order."""
    ids: set[str] = set()
    for e in entities:
        ids.update(w.id for w in catalog.widgets_for(e))
    return [catalog.widgets[w] for w in sorted(ids)]
