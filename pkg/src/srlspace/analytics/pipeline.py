"""Operation extraction, space classification, and the usage report.

The pipeline is deterministic: identical inputs give a byte-identical
report. Distribution arithmetic is exact (fractions) until the final
one-decimal half-up rounding.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field as dataclasses_field
from datetime import date, datetime, timezone
from decimal import Decimal, ROUND_HALF_UP
from fractions import Fraction
from pathlib import Path
import re

from ..catalog import OntologyCatalog, load_default_catalog
from ..events import ActivityEvent
from .logs import AccessLogEntry, GeoTable, clean, load_bot_patterns, load_partner_ips, parse_log_file

NO_CATEGORY = "no specific category"

OP_VOCABULARY = (
    "space.create",
    "space.join",
    "space.leave",
    "space.load",
    "widget.add",
    "widget.remove",
    "widget.load",
)

_ROUTES: tuple[tuple[str, re.Pattern, str], ...] = (
    ("POST", re.compile(r"^/api/spaces/?$"), "space.create"),
    ("POST", re.compile(r"^/api/spaces/([^/]+)/members/?$"), "space.join"),
    ("DELETE", re.compile(r"^/api/spaces/([^/]+)/members(?:/[^/]+)?/?$"), "space.leave"),
    ("GET", re.compile(r"^/api/spaces/([^/]+)/?$"), "space.load"),
    ("POST", re.compile(r"^/api/spaces/([^/]+)/widgets(?:/([^/?]+))?/?$"), "widget.add"),
    ("DELETE", re.compile(r"^/api/spaces/([^/]+)/widgets/([^/?]+)/?$"), "widget.remove"),
    ("GET", re.compile(r"^/api/spaces/([^/]+)/widgets/([^/?]+)/?$"), "widget.load"),
)


@dataclass(frozen=True)
class Operation:
    op: str
    actor: str
    space: str | None
    widget: str | None
    ts: datetime


def _route(method: str, path: str) -> tuple[str, str | None, str | None] | None:
    path = path.split("?", 1)[0]
    for m, pattern, op in _ROUTES:
        if m != method:
            continue
        match = pattern.match(path)
        if match:
            groups = match.groups()
            space = groups[0] if groups else None
            widget = groups[1] if len(groups) > 1 else None
            return op, space, widget
    return None


def extract_operations(entries: list[AccessLogEntry]) -> tuple[list[Operation], int]:
    """Map cleaned API entries to the operation vocabulary.

    Unmapped API requests are counted, not classified, so classified +
    unclassified always partitions the cleaned entry count.
    """
    ops: list[Operation] = []
    unclassified = 0
    for e in entries:
        routed = _route(e.method, e.path)
        if routed is None:
            unclassified += 1
            continue
        op, space, widget = routed
        ops.append(Operation(op=op, actor=e.ip, space=space, widget=widget, ts=e.ts))
    return ops, unclassified


def operations_from_events(events: list[ActivityEvent]) -> tuple[list[Operation], int]:
    """Event-log input: verbs in the vocabulary map directly."""
    ops: list[Operation] = []
    unclassified = 0
    for e in events:
        if e.verb not in OP_VOCABULARY:
            unclassified += 1
            continue
        widget = e.object_id if e.verb.startswith("widget.") else None
        ts = datetime.fromtimestamp(e.ts / 1000, tz=timezone.utc)
        ops.append(Operation(op=e.verb, actor=e.actor, space=e.space, widget=widget, ts=ts))
    return ops, unclassified


# -- space classification ------------------------------------------------------

@dataclass
class SpaceStats:
    space: str
    first: datetime
    last: datetime
    loads: int = 0
    load_days: set[date] = dataclasses_field(default_factory=set)
    srl_added: bool = False
    srl_loaded: bool = False
    active: bool = False
    lifetime_days: int = 0

    @property
    def srl_enabled(self) -> bool:
        return self.srl_added and self.srl_loaded


def classify_spaces(
    ops: list[Operation],
    srl_widget_ids: set[str],
    active_loads: int = 5,
    active_days: int = 2,
) -> dict[str, SpaceStats]:
    """Label every observed space: active? SRL-enabled? how long alive?

    Active means loaded at least ``active_loads`` times on at least
    ``active_days`` distinct days; SRL-enabled means an SRL widget was both
    added and loaded in the space.
    """
    stats: dict[str, SpaceStats] = {}
    for op in ops:
        if op.space is None:
            continue
        s = stats.get(op.space)
        if s is None:
            s = SpaceStats(space=op.space, first=op.ts, last=op.ts)
            stats[op.space] = s
        s.first = min(s.first, op.ts)
        s.last = max(s.last, op.ts)
        if op.op == "space.load":
            s.loads += 1
            s.load_days.add(op.ts.date())
        elif op.op == "widget.add" and op.widget in srl_widget_ids:
            s.srl_added = True
        elif op.op == "widget.load" and op.widget in srl_widget_ids:
            s.srl_loaded = True
    for s in stats.values():
        s.active = s.loads >= active_loads and len(s.load_days) >= active_days
        s.lifetime_days = (s.last.date() - s.first.date()).days
    return stats


# -- category distribution --------------------------------------------------------

def category_distribution(
    ops: list[Operation],
    catalog: OntologyCatalog,
    space_stats: dict[str, SpaceStats],
) -> dict[str, dict[str, Fraction]]:
    """Per-cohort category shares of widget.add operations.

    Cohorts: srl (SRL-enabled spaces), non_srl, and all labeled spaces. A
    widget assigned to k categories contributes 1/k to each; uncategorized or
    unresolvable widgets land in the no-specific-category bucket, so every
    distribution sums to exactly 1.
    """
    weights: dict[str, dict[str, Fraction]] = {"srl": {}, "non_srl": {}, "all": {}}
    totals: dict[str, int] = {"srl": 0, "non_srl": 0, "all": 0}

    def credit(cohort: str, bucket: str, amount: Fraction) -> None:
        weights[cohort][bucket] = weights[cohort].get(bucket, Fraction(0)) + amount

    for op in ops:
        if op.op != "widget.add" or op.space is None or op.space not in space_stats:
            continue
        cohort = "srl" if space_stats[op.space].srl_enabled else "non_srl"
        widget = catalog.widgets.get(op.widget) if op.widget else None
        categories = sorted(widget.categories) if widget is not None else []
        for c in (cohort, "all"):
            totals[c] += 1
            if not categories:
                credit(c, NO_CATEGORY, Fraction(1))
            else:
                share = Fraction(1, len(categories))
                for cat in categories:
                    credit(c, cat, share)
    out: dict[str, dict[str, Fraction]] = {}
    for cohort, buckets in weights.items():
        n = totals[cohort]
        out[cohort] = {cat: w / n for cat, w in buckets.items()} if n else {}
    return out


def round_percent(value: Fraction) -> float:
    """One decimal place, half-up: the presentation rounding for percentages."""
    scaled = Decimal(value.numerator * 100) / Decimal(value.denominator)
    return float(scaled.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def round_distribution(dist: dict[str, Fraction]) -> dict[str, float]:
    """Round a distribution to one-decimal percents that sum to exactly 100.

    Largest-remainder at tenth-of-a-percent granularity: identical to plain
    half-up whenever shares are exact tenths, and closed under summation
    otherwise (plain per-bucket rounding can drift by several tenths).
    Ties on the remainder break by bucket label so reports stay
    byte-identical.
    """
    if not dist:
        return {}
    units = {bucket: share * 1000 for bucket, share in dist.items()}
    floors = {bucket: int(u) for bucket, u in units.items()}
    leftover = 1000 - sum(floors.values())
    by_remainder = sorted(dist, key=lambda b: (-(units[b] - floors[b]), b))
    for bucket in by_remainder[:leftover]:
        floors[bucket] += 1
    return {bucket: floors[bucket] / 10 for bucket in dist}


def _pct(count: int, total: int) -> float | None:
    if total == 0:
        return None
    return round_percent(Fraction(count, total))


# -- the full pipeline ------------------------------------------------------------

@dataclass
class PipelineConfig:
    log_path: str | Path
    bots_path: str | Path | None = None
    partners_path: str | Path | None = None
    geo_path: str | Path | None = None
    srl_widgets_path: str | Path | None = None
    active_loads: int = 5
    active_days: int = 2
    catalog: OntologyCatalog | None = None


def _load_srl_widget_ids(config: PipelineConfig, catalog: OntologyCatalog) -> set[str]:
    if config.srl_widgets_path is None:
        return set(catalog.srl_widget_ids())
    ids = set()
    for ln in Path(config.srl_widgets_path).read_text(encoding="utf-8").splitlines():
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            ids.add(ln)
    return ids


def run(config: PipelineConfig) -> dict:
    """clean -> geo-enrich -> extract -> classify -> aggregate, one report."""
    catalog = config.catalog if config.catalog is not None else load_default_catalog()
    fmt, rows, malformed = parse_log_file(config.log_path)
    srl_ids = _load_srl_widget_ids(config, catalog)

    if fmt == "clf":
        bot_patterns = load_bot_patterns(config.bots_path)
        partner_ips = load_partner_ips(config.partners_path)
        geo = GeoTable.load(config.geo_path)
        cleaned = clean(rows, bot_patterns, partner_ips)
        ops, unclassified = extract_operations(cleaned)
        ips = sorted({e.ip for e in cleaned})
        located = {ip: geo.lookup(ip) for ip in ips}
        daily_source = [(e.ts, e.bytes) for e in cleaned]
    else:
        cleaned = rows
        ops, unclassified = operations_from_events(rows)
        ips = sorted({e.actor for e in rows})
        located = {}
        daily_source = [(datetime.fromtimestamp(e.ts / 1000, tz=timezone.utc), 0) for e in rows]

    # daily series
    per_day: dict[date, list[int]] = {}
    for ts, size in daily_source:
        bucket = per_day.setdefault(ts.date(), [0, 0])
        bucket[0] += 1
        bucket[1] += size
    daily = []
    cum_requests = 0
    cum_bytes = 0
    for day in sorted(per_day):
        requests, size = per_day[day]
        cum_requests += requests
        cum_bytes += size
        daily.append(
            {
                "date": day.isoformat(),
                "requests": requests,
                "kreq": round(requests / 1000, 4),
                "req_100k_cum": round(cum_requests / 100_000, 4),
                "bytes": size,
                "resp_100mb": round(size / 100_000_000, 4),
                "resp_gb_cum": round(cum_bytes / 1_000_000_000, 4),
            }
        )

    # geo aggregation (distinct IPs per city/country)
    city_ips: dict[tuple[str, str], int] = {}
    country_ips: dict[str, int] = {}
    for ip in located:
        city, country = located[ip]
        key = (city, country)
        city_ips[key] = city_ips.get(key, 0) + 1
        country_ips[country] = country_ips.get(country, 0) + 1

    stats = classify_spaces(ops, srl_ids, config.active_loads, config.active_days)
    by_op: dict[str, int] = {op: 0 for op in OP_VOCABULARY}
    for op in ops:
        by_op[op.op] += 1

    observed = sorted(stats)
    active = [s for s in observed if stats[s].active]
    srl_enabled = [s for s in observed if stats[s].srl_enabled]
    srl_active = [s for s in srl_enabled if stats[s].active]
    srl_lifetimes = [stats[s].lifetime_days for s in srl_enabled]
    mean_srl_lifetime = (
        float(
            (Decimal(sum(srl_lifetimes)) / Decimal(len(srl_lifetimes))).quantize(
                Decimal("0.1"), rounding=ROUND_HALF_UP
            )
        )
        if srl_lifetimes
        else None
    )

    # user cohorts share one denominator: distinct actors in the cleaned ops
    actors = sorted({op.actor for op in ops})
    denominator = len(actors)

    def cohort(op_name: str) -> dict:
        users = {op.actor for op in ops if op.op == op_name}
        return {"count": len(users), "pct": _pct(len(users), denominator)}

    distributions = category_distribution(ops, catalog, stats)
    categories = {}
    for cohort_name, dist in distributions.items():
        rounded = round_distribution(dist)
        categories[cohort_name] = {
            cat: rounded[cat] for cat, _ in sorted(dist.items(), key=lambda kv: (-kv[1], kv[0]))
        }

    return {
        "report_version": 1,
        "source_format": fmt,
        "totals": {
            "raw_entries": len(rows) + malformed,
            "malformed": malformed,
            "cleaned_requests": len(cleaned),
            "distinct_ips": len(ips),
            "cities": len({c for c in city_ips if c[0] != "unknown"}),
            "countries": len({c for c in country_ips if c != "unknown"}),
        },
        "daily": daily,
        "geo": {
            "cities": [
                {"city": city, "country": country, "ips": n}
                for (city, country), n in sorted(city_ips.items())
            ],
            "countries": [
                {"country": country, "ips": n} for country, n in sorted(country_ips.items())
            ],
        },
        "operations": {
            "classified": len(ops),
            "unclassified": unclassified,
            "by_op": by_op,
        },
        "spaces": {
            "created": by_op["space.create"],
            "observed": len(observed),
            "active": len(active),
            "active_pct": _pct(len(active), len(observed)),
            "srl_enabled": len(srl_enabled),
            "srl_active_pct": _pct(len(srl_active), len(srl_enabled)),
            "mean_srl_lifetime_days": mean_srl_lifetime,
        },
        "users": {
            "denominator": denominator,
            "creators": cohort("space.create"),
            "joiners": cohort("space.join"),
            "widget_adders": cohort("widget.add"),
            "reopeners": cohort("space.load"),
        },
        "categories": categories,
    }


# -- emitters ---------------------------------------------------------------------

def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _flatten(prefix: str, value, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for k in value:
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    elif isinstance(value, list):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, "" if value is None else str(value)))


def report_to_csv(report: dict) -> str:
    """Flat key,value rows; city/country counts come out as plain rows too."""
    rows: list[tuple[str, str]] = []
    _flatten("", report, rows)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    return buf.getvalue()
