"""Batch analytics over access logs / event logs: the usage-report pipeline."""

from .logs import AccessLogEntry, GeoTable, clean, load_bot_patterns, load_partner_ips, parse_log_file
from .pipeline import (
    Operation,
    PipelineConfig,
    category_distribution,
    classify_spaces,
    extract_operations,
    report_to_csv,
    report_to_json,
    run,
)

__all__ = [
    "AccessLogEntry",
    "GeoTable",
    "Operation",
    "PipelineConfig",
    "category_distribution",
    "classify_spaces",
    "clean",
    "extract_operations",
    "load_bot_patterns",
    "load_partner_ips",
    "parse_log_file",
    "report_to_csv",
    "report_to_json",
    "run",
]
