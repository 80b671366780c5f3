"""Command-line entry point: ``ocel2tekg transform|validate|stats``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .export import ExportFormat, export, graph_stats
from .ingest import OcelParseError, OcelValidationError, parse_ocel_json
from .ocel import validate_log
from .transform import TekgBuilder, TransformConfig

logger = logging.getLogger("ocel2tekg")

LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocel2tekg", description="Transform OCEL 2.0 JSON logs into temporal event knowledge graphs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", type=Path, help="OCEL 2.0 JSON log (.jsonocel or .json)")
        p.add_argument("--reify-update-edges", action="store_true", help="also reify snapshot lifecycle edges")
        p.add_argument("--class-dfc", action="store_true", help="add dfc edges between Class nodes")

    p = sub.add_parser("transform", help="convert a log and export the graph")
    graph_options(p)
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--format", choices=[f.value for f in ExportFormat], default=ExportFormat.JSONL.value)

    p = sub.add_parser("validate", help="report constraint violations of a log")
    p.add_argument("input", type=Path)

    p = sub.add_parser("stats", help="print statistics of the resulting graph as JSON")
    graph_options(p)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("OCEL2TEKG_LOG_LEVEL", "warn").lower()
    logging.basicConfig(level=LOG_LEVELS.get(level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _load(path: Path, validate: bool = True):
    return parse_ocel_json(path.read_bytes(), validate=validate)


def _build(args: argparse.Namespace):
    log = _load(args.input)
    config = TransformConfig(reify_update_edges=args.reify_update_edges, include_class_dfc=args.class_dfc)
    return TekgBuilder(log, config).build()


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = _parser().parse_args(argv)
    try:
        if args.command == "validate":
            log = _load(args.input, validate=False)
            violations = validate_log(log)
            for v in violations:
                print(v)
            return 1 if violations else 0

        graph = _build(args)
        if args.command == "stats":
            print(json.dumps(graph_stats(graph).to_dict(), indent=2))
            return 0

        data = export(graph, args.format)
        if args.out is None:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        else:
            args.out.write_bytes(data)
            logger.info("wrote %d bytes to %s", len(data), args.out)
        return 0
    except OcelValidationError as exc:
        for v in exc.violations:
            print(f"{args.input}: {v}", file=sys.stderr)
        return 1
    except OcelParseError as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ocel2tekg: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
