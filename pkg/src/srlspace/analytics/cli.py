"""`analyze` command line: run the usage-report pipeline over a log file."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..catalog import load_catalog
from .pipeline import PipelineConfig, report_to_csv, report_to_json, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="analyze",
        description="Usage analytics over an access log (Combined Log Format) "
        "or the platform's JSON-Lines event log (auto-detected).",
    )
    parser.add_argument("--log", required=True, help="input log file")
    parser.add_argument("--bots", help="bot user-agent patterns, one regex per line")
    parser.add_argument("--partners", help="partner IPs/prefixes to exclude, one per line")
    parser.add_argument("--geo", help="offline geo table CSV (prefix,city,country)")
    parser.add_argument("--srl-widgets", help="SRL widget ids, one per line (default: catalog srl flags)")
    parser.add_argument("--catalog", help="catalog YAML (default: bundled catalog)")
    parser.add_argument("--active-loads", type=int, default=5, metavar="N",
                        help="loads needed for a space to count as active (default 5)")
    parser.add_argument("--active-days", type=int, default=2, metavar="D",
                        help="distinct load days needed for active (default 2)")
    parser.add_argument("--out", action="append", default=[],
                        help="output file, .json or .csv; repeatable; default stdout JSON")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = PipelineConfig(
        log_path=args.log,
        bots_path=args.bots,
        partners_path=args.partners,
        geo_path=args.geo,
        srl_widgets_path=args.srl_widgets,
        active_loads=args.active_loads,
        active_days=args.active_days,
        catalog=load_catalog(args.catalog) if args.catalog else None,
    )
    report = run(config)
    if not args.out:
        sys.stdout.write(report_to_json(report))
        return 0
    for out in args.out:
        path = Path(out)
        if path.suffix == ".csv":
            path.write_text(report_to_csv(report), encoding="utf-8")
        else:
            path.write_text(report_to_json(report), encoding="utf-8")
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
