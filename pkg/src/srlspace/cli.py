"""Top-level command line: serve the platform or run the analytics pipeline."""

from __future__ import annotations

import argparse

from .analytics.cli import build_parser as build_analyze_parser
from .analytics.cli import main as analyze_main


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="srlspace")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the platform server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--data-dir", help="persist/restore the event log here")
    serve.add_argument("--ui", help="directory with a built frontend to serve at /")

    analyze = sub.add_parser(
        "analyze",
        help="usage analytics over an access or event log",
        parents=[build_analyze_parser()],
        add_help=False,
        conflict_handler="resolve",
    )

    args, rest = parser.parse_known_args(argv)
    if args.command == "serve":
        import uvicorn

        from .platform import Platform
        from .server import create_app

        platform = Platform.open_data_dir(args.data_dir) if args.data_dir else None
        app = create_app(platform, ui_dir=args.ui)
        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    if args.command == "analyze":
        analyze_argv = []
        for key, value in vars(args).items():
            if key == "command" or value in (None, []):
                continue
            flag = "--" + key.replace("_", "-")
            if isinstance(value, list):
                for v in value:
                    analyze_argv.extend([flag, str(v)])
            else:
                analyze_argv.extend([flag, str(value)])
        return analyze_main(analyze_argv + rest)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
