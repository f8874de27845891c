"""Access-log ingestion: parsing, cleaning, and offline geo enrichment.

Two input formats are auto-detected: Combined-Log-Format lines and the
platform's own JSON-Lines activity events. Cleaning (bots, partner IPs,
static content) applies to access logs; event-log input carries no IP or
user-agent fields, so those filters are identity there.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from ..errors import ConfigParseError
from ..events import ActivityEvent

_CLF_RE = re.compile(
    r'^(?P<ip>\S+) (?P<ident>\S+) (?P<user>\S+) \[(?P<ts>[^\]]+)\] '
    r'"(?P<request>[^"]*)" (?P<status>\d{3}) (?P<bytes>\S+)'
    r'(?: "(?P<referer>[^"]*)" "(?P<ua>[^"]*)")?\s*$'
)
_TS_FORMAT = "%d/%b/%Y:%H:%M:%S %z"


@dataclass(frozen=True)
class AccessLogEntry:
    ip: str
    ts: datetime
    method: str
    path: str
    status: int
    bytes: int
    user_agent: str


def parse_clf_line(line: str) -> AccessLogEntry | None:
    """One Combined-Log-Format line; None when malformed."""
    m = _CLF_RE.match(line)
    if m is None:
        return None
    try:
        ts = datetime.strptime(m.group("ts"), _TS_FORMAT)
    except ValueError:
        return None
    request = m.group("request").split()
    if len(request) < 2:
        return None
    status = int(m.group("status"))
    if not 100 <= status <= 599:
        return None
    raw_bytes = m.group("bytes")
    return AccessLogEntry(
        ip=m.group("ip"),
        ts=ts,
        method=request[0].upper(),
        path=request[1],
        status=status,
        bytes=0 if raw_bytes == "-" else int(raw_bytes),
        user_agent=m.group("ua") or "",
    )


def parse_log_file(path: str | Path) -> tuple[str, list[AccessLogEntry] | list[ActivityEvent], int]:
    """Auto-detect and parse a log file.

    Returns (format, rows, malformed_count) where format is "clf" or
    "events".
    """
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if lines and lines[0].lstrip().startswith("{"):
        events: list[ActivityEvent] = []
        malformed = 0
        for ln in lines:
            try:
                events.append(ActivityEvent.from_json_line(ln))
            except (json.JSONDecodeError, KeyError, ValueError):
                malformed += 1
        return "events", events, malformed
    entries: list[AccessLogEntry] = []
    malformed = 0
    for ln in lines:
        entry = parse_clf_line(ln)
        if entry is None:
            malformed += 1
        else:
            entries.append(entry)
    return "clf", entries, malformed


# -- filter configuration -----------------------------------------------------

def load_bot_patterns(path: str | Path | None) -> list[re.Pattern]:
    """One case-insensitive regex per line; # comments allowed."""
    if path is None:
        return []
    patterns = []
    try:
        for ln in Path(path).read_text(encoding="utf-8").splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            try:
                patterns.append(re.compile(ln, re.IGNORECASE))
            except re.error as exc:
                raise ConfigParseError(f"bad bot pattern {ln!r}: {exc}") from exc
    except OSError as exc:
        raise ConfigParseError(f"cannot read bot patterns {path}: {exc}") from exc
    return patterns


def load_partner_ips(path: str | Path | None) -> set[str]:
    """Exact IPs, or dotted prefixes ending in '.' for whole ranges."""
    if path is None:
        return set()
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigParseError(f"cannot read partner IPs {path}: {exc}") from exc
    ips = set()
    for ln in lines:
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            ips.add(ln)
    return ips


def _ip_excluded(ip: str, partner_ips: set[str]) -> bool:
    if ip in partner_ips:
        return True
    return any(p.endswith(".") and ip.startswith(p) for p in partner_ips)


def clean(
    entries: list[AccessLogEntry],
    bot_patterns: list[re.Pattern],
    partner_ips: set[str],
) -> list[AccessLogEntry]:
    """Human-operated, external, API traffic only.

    Drops bot user agents, partner-institution IPs, and everything outside
    the /api/ path space (static content says nothing about activity).
    """
    kept = []
    for e in entries:
        if not e.path.startswith("/api/"):
            continue
        if _ip_excluded(e.ip, partner_ips):
            continue
        if any(p.search(e.user_agent) for p in bot_patterns):
            continue
        kept.append(e)
    return kept


# -- geo enrichment ---------------------------------------------------------------

class GeoTable:
    """Offline IP-prefix table; longest matching prefix wins."""

    def __init__(self, rows: list[tuple[str, str, str]]):
        # longest prefixes first makes lookup deterministic
        self._rows = sorted(rows, key=lambda r: (-len(r[0]), r[0]))

    @classmethod
    def load(cls, path: str | Path | None) -> "GeoTable":
        if path is None:
            return cls([])
        rows = []
        try:
            with open(path, encoding="utf-8", newline="") as fh:
                for row in csv.DictReader(fh):
                    rows.append((row["prefix"], row["city"], row["country"]))
        except (OSError, KeyError) as exc:
            raise ConfigParseError(f"cannot read geo table {path}: {exc}") from exc
        return cls(rows)

    def lookup(self, ip: str) -> tuple[str, str]:
        for prefix, city, country in self._rows:
            if ip.startswith(prefix):
                return city, country
        return "unknown", "unknown"
