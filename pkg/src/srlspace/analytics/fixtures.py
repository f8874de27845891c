"""Deterministic log fixtures for the analytics pipeline.

``synthetic_log_lines`` produces a seeded random access log with bots,
partner traffic, static content, and API operations mixed in.
``fig59_lines`` is a hand-engineered fixture whose category distribution hits
known reference percentages exactly (no-category 58.8 vs 64.8, plan/organize
13.0 vs 8.7, reflect/evaluate 4.7 vs 2.6).
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

_HUMAN_UAS = (
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36",
    "Mozilla/5.0 (X11; Linux x86_64; rv:109.0) Gecko/20100101 Firefox/115.0",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_15_7) Safari/605.1.15",
)
_BOT_UAS = (
    "Googlebot/2.1 (+http://www.google.com/bot.html)",
    "Mozilla/5.0 (compatible; bingbot/2.0)",
    "EvilScraper/0.9 (bot)",
)
BOT_PATTERNS = ("googlebot", "bingbot", r"\bbot\b", "scraper")

PARTNER_PREFIXES = ("134.130.", "129.27.")

_EXTERNAL_IP_BASES = (
    "93.82.14", "131.130.4", "137.208.9", "130.83.27", "129.13.40",
    "141.13.8", "160.45.12", "128.178.3", "130.92.77", "192.35.60",
    "202.120.33", "18.85.21", "128.2.11", "137.222.5", "130.88.19",
    "193.136.2", "147.32.80", "150.254.6", "77.119.128", "89.144.200",
)

_STATIC_PATHS = (
    "/", "/index.html", "/static/app.js", "/static/app.css",
    "/static/logo.png", "/widgets/notepad.html", "/favicon.ico",
)

_UNMAPPED_API = ("/api/health", "/api/version", "/api/profile/me", "/api/search")

_EPOCH = datetime(2012, 3, 3, 8, 0, 0, tzinfo=timezone.utc)


def _clf(ip: str, ts: datetime, method: str, path: str, status: int, size: int, ua: str) -> str:
    stamp = ts.strftime("%d/%b/%Y:%H:%M:%S +0000")
    return f'{ip} - - [{stamp}] "{method} {path} HTTP/1.1" {status} {size} "-" "{ua}"'


_SRL_WIDGET_POOL = (
    "to_learn_list", "text_reader", "self_evaluation", "content_search",
    "self_reflection", "activity_monitor", "goal_tracker", "mashup_recommender",
)
_PLAIN_WIDGET_POOL = (
    "question_answer", "function_plotter", "shared_paint", "notepad",
    "idea_board", "help_forum", "vocabulary_trainer", "media_player",
    "web_search", "study_planner",
)


def synthetic_log_lines(n: int = 10_000, seed: int = 42) -> list[str]:
    """A seeded, time-ordered access log exercising every pipeline stage.

    Spaces fall into three profiles: busy SRL spaces, busy plain spaces, and
    sparse test spaces that stay below the active threshold.
    """
    rng = random.Random(seed)
    external_ips = [f"{base}.{i}" for base in _EXTERNAL_IP_BASES for i in range(1, 4)]
    partner_ips = [f"{p}5.{i}" for p in PARTNER_PREFIXES for i in range(1, 4)]
    srl_spaces = [f"space-{i:02d}" for i in range(0, 4)]
    plain_spaces = [f"space-{i:02d}" for i in range(4, 8)]
    sparse_spaces = [f"space-{i:02d}" for i in range(8, 14)]
    created: set[str] = set()
    sparse_budget = {s: rng.randint(1, 3) for s in sparse_spaces}
    lines = []
    ts = _EPOCH
    for _ in range(n):
        ts += timedelta(seconds=rng.randint(30, 600))
        roll = rng.random()
        ua = rng.choice(_HUMAN_UAS)
        ip = rng.choice(external_ips)
        size = rng.randint(180, 52_000)
        status = 200 if rng.random() > 0.04 else rng.choice((301, 404, 500))
        if roll < 0.22:
            lines.append(_clf(ip, ts, "GET", rng.choice(_STATIC_PATHS), status, size, ua))
            continue
        if roll < 0.30:
            bot_path = rng.choice(_STATIC_PATHS + ("/api/spaces/space-00",))
            lines.append(_clf(ip, ts, "GET", bot_path, status, size, rng.choice(_BOT_UAS)))
            continue
        if roll < 0.38:
            space = rng.choice(srl_spaces + plain_spaces)
            lines.append(_clf(rng.choice(partner_ips), ts, "GET", f"/api/spaces/{space}", status, size, ua))
            continue
        if roll < 0.44:
            lines.append(_clf(ip, ts, "GET", rng.choice(_UNMAPPED_API), status, size, ua))
            continue
        if roll < 0.46:
            # malformed line: parser must count and skip it
            lines.append(f"{ip} broken line at {ts.isoformat()}")
            continue
        sparse = rng.random() < 0.08
        if sparse:
            space = rng.choice(sparse_spaces)
            pool = _PLAIN_WIDGET_POOL
        elif rng.random() < 0.5:
            space = rng.choice(srl_spaces)
            pool = _SRL_WIDGET_POOL + _PLAIN_WIDGET_POOL
        else:
            space = rng.choice(plain_spaces)
            pool = _PLAIN_WIDGET_POOL
        if space not in created:
            created.add(space)
            lines.append(_clf(ip, ts, "POST", "/api/spaces", 201, size, ua))
            continue
        if sparse and sparse_budget[space] <= 0:
            # the test space went quiet; its visitor ends up on static pages
            lines.append(_clf(ip, ts, "GET", rng.choice(_STATIC_PATHS), status, size, ua))
            continue
        if sparse:
            sparse_budget[space] -= 1
        action = rng.random()
        if action < 0.40:
            lines.append(_clf(ip, ts, "GET", f"/api/spaces/{space}", status, size, ua))
        elif action < 0.55:
            widget = rng.choice(pool)
            lines.append(_clf(ip, ts, "POST", f"/api/spaces/{space}/widgets/{widget}", 201, size, ua))
        elif action < 0.75:
            widget = rng.choice(pool)
            lines.append(_clf(ip, ts, "GET", f"/api/spaces/{space}/widgets/{widget}", status, size, ua))
        elif action < 0.85:
            lines.append(_clf(ip, ts, "POST", f"/api/spaces/{space}/members", 200, size, ua))
        elif action < 0.93:
            lines.append(_clf(ip, ts, "DELETE", f"/api/spaces/{space}/members/self", 200, size, ua))
        else:
            widget = rng.choice(pool)
            lines.append(_clf(ip, ts, "DELETE", f"/api/spaces/{space}/widgets/{widget}", 200, size, ua))
    return lines


# counts per cohort are engineered so the category shares are exact
_FIG59_SRL_ADDS = (
    ("activity_monitor", 10),   # no category; also the SRL add+load marker
    ("function_plotter", 578),  # no category
    ("to_learn_list", 130),     # Plan & Organize -> 13.0%
    ("self_reflection", 47),    # Reflect & Evaluate -> 4.7%
    ("question_answer", 100),   # Communicate & Collaborate
    ("notepad", 60),            # Create & Modify
    ("vocabulary_trainer", 30), # Train & Test
    ("media_player", 30),       # Explore & View Content
    ("content_search", 15),     # Search & Get Recommendation
)
_FIG59_PLAIN_ADDS = (
    ("function_plotter", 648),       # no category -> 64.8%
    ("study_planner", 87),           # Plan & Organize -> 8.7%
    ("share_your_experience", 26),   # Reflect & Evaluate -> 2.6%
    ("help_forum", 140),             # Communicate & Collaborate
    ("idea_board", 40),              # Create & Modify
    ("vocabulary_trainer", 20),      # Train & Test
    ("media_player", 25),            # Explore & View Content
    ("web_search", 14),              # Search & Get Recommendation
)


def fig59_lines() -> list[str]:
    """Two 10-space cohorts, 1000 widget adds each, exact target percentages."""
    lines = []
    ts = _EPOCH
    ua = _HUMAN_UAS[0]

    def emit(ip: str, method: str, path: str) -> None:
        nonlocal ts
        ts += timedelta(seconds=45)
        lines.append(_clf(ip, ts, method, path, 200, 1200, ua))

    srl_spaces = [f"srl-{i:02d}" for i in range(10)]
    plain_spaces = [f"plain-{i:02d}" for i in range(10)]

    for i, space in enumerate(srl_spaces + plain_spaces):
        ip = f"89.144.20{i % 10}.7"
        emit(ip, "POST", "/api/spaces")
        emit(ip, "GET", f"/api/spaces/{space}")

    # the SRL cohort marker: an SRL widget added AND loaded in every srl space
    for i, space in enumerate(srl_spaces):
        ip = f"89.144.20{i}.7"
        emit(ip, "GET", f"/api/spaces/{space}/widgets/activity_monitor")

    def spread(spaces: list[str], adds) -> None:
        counters = {w: n for w, n in adds}
        idx = 0
        for widget, n in adds:
            for _ in range(counters[widget]):
                space = spaces[idx % len(spaces)]
                ip = f"77.119.{idx % 100}.{(idx // 100) % 250 + 1}"
                emit(ip, "POST", f"/api/spaces/{space}/widgets/{widget}")
                idx += 1

    spread(srl_spaces, _FIG59_SRL_ADDS)
    spread(plain_spaces, _FIG59_PLAIN_ADDS)
    return lines
