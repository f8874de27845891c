"""Shared test helpers: deterministic clocks and random catalog documents."""

from __future__ import annotations

import itertools
import random

from srlspace.catalog import OntologyCatalog, catalog_from_dict

PHASES = ("plan", "prepare", "learn", "reflect")
GROUPS = ("cognitive", "meta_cognitive", "resource_management")


def ticking_clock(start_ms: int = 1_700_000_000_000, step_ms: int = 1000):
    """Monotonic fake clock; every call advances by step_ms."""
    counter = itertools.count()
    return lambda: start_ms + step_ms * next(counter)


def random_catalog_doc(
    rng: random.Random,
    max_strategies: int = 9,
    max_techniques: int = 15,
    max_widgets: int = 20,
    max_add_count: int = 50,
) -> dict:
    """A structurally valid catalog document with random cross-links."""
    n_strategies = rng.randint(3, max_strategies)
    strategies = [
        {
            "id": f"s{i}",
            "name": f"Strategy {i}",
            "group": rng.choice(GROUPS),
            "phase": rng.choice(PHASES),
        }
        for i in range(n_strategies)
    ]
    n_techniques = rng.randint(1, max_techniques)
    techniques = [
        {"id": f"t{i}", "name": f"Technique {i}", "strategy": rng.choice(strategies)["id"]}
        for i in range(n_techniques)
    ]
    n_widgets = rng.randint(0, max_widgets)
    widgets = []
    for i in range(n_widgets):
        linked = rng.sample([t["id"] for t in techniques], k=rng.randint(0, min(4, n_techniques)))
        widgets.append(
            {
                "id": f"w{i:02d}",
                "title": f"Widget {i}",
                "description": f"widget number {i}",
                "launch_url": f"/widgets/w{i}.html",
                "techniques": linked,
                "categories": [],
                "srl": rng.random() < 0.3,
                "add_count": rng.randint(0, max_add_count),
            }
        )
    return {
        "catalog_version": 1,
        "phases": list(PHASES),
        "strategy_groups": list(GROUPS),
        "strategies": strategies,
        "techniques": techniques,
        "categories": [],
        "vocabularies": [],
        "widgets": widgets,
        "bundles": [],
        "templates": [],
    }


def random_catalog(rng: random.Random, **kwargs) -> tuple[dict, OntologyCatalog]:
    doc = random_catalog_doc(rng, **kwargs)
    return doc, catalog_from_dict(doc)
