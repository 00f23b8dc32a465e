"""Operator entry point: ingest, classify, search, trends, export, serve.

Machine-readable output (reports, search results, CSV) goes to stdout;
diagnostics go to stderr. Exit codes: 0 success, 1 fatal error, 2 usage
error. Identical invocations on identical inputs print identical bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .classify import ClassifierConfig
from .errors import ScholarGraphError
from .graph import NodeKind
from .ingest import (
    IngestConfig,
    classify_dry_run,
    export_snapshot,
    ingest_corpus,
    load_snapshot,
)
from .search import IndexConfig
from .server import ServerConfig, serve
from .taxonomy import taxonomy_from_snapshot
from .text import DEFAULT_STOPWORDS, load_stopwords

log = logging.getLogger(__name__)

_CONFIG_KEYS = {
    "threshold": float,
    "top_k": int,
    "title_boost": int,
    "k1": float,
    "b": float,
    "host": str,
    "port": int,
    "cors_origin": str,
    "trend_window": int,
    "snapshot_dir": str,
    "institution_name": str,
    "stopwords": str,
}


class UsageError(Exception):
    pass


def _parse_config_file(path: str) -> dict:
    values: dict = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected KEY=VALUE with a known key, got {line!r}")
        try:
            values[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _parse_kinds(value: str) -> set[NodeKind]:
    by_name = {k.value.casefold(): k for k in NodeKind}
    kinds = set()
    for part in value.split(","):
        part = part.strip().casefold()
        if not part:
            continue
        if part not in by_name:
            raise UsageError(f"unknown node kind {part!r}")
        kinds.add(by_name[part])
    return kinds


def _setting(args: argparse.Namespace, config: dict, key: str, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    return config.get(key, default)


def _ingest_config(args: argparse.Namespace, config: dict) -> IngestConfig:
    stopword_path = _setting(args, config, "stopwords", None)
    stopwords = load_stopwords(stopword_path) if stopword_path else DEFAULT_STOPWORDS
    return IngestConfig(
        classifier=ClassifierConfig(
            threshold=_setting(args, config, "threshold", 0.05),
            top_k=_setting(args, config, "top_k", 5),
            title_boost=_setting(args, config, "title_boost", 2),
        ),
        index=IndexConfig(
            k1=_setting(args, config, "k1", 1.2),
            b=_setting(args, config, "b", 0.75),
        ),
        stopwords=stopwords,
        institution_name=_setting(args, config, "institution_name", "Research Institution"),
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scholargraph",
        description="Knowledge-graph exploratory search over one research institution.",
    )
    parser.add_argument("--config", help="key=value file overriding defaults")
    parser.add_argument("--snapshot-dir", dest="snapshot_dir", help="snapshot directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="build and commit a snapshot from input files")
    p_ingest.add_argument("--taxonomy", required=True)
    p_ingest.add_argument("--units", required=True)
    p_ingest.add_argument("--researchers", required=True)
    p_ingest.add_argument("--publications", required=True)
    p_classify = sub.add_parser("classify", help="classification report without committing")
    p_classify.add_argument("--taxonomy", required=True)
    p_classify.add_argument("--publications", required=True)
    p_classify.add_argument(
        "--dry-run", action="store_true", help="never commits; flag kept for explicitness"
    )
    for p in (p_ingest, p_classify):
        p.add_argument("--threshold", type=float)
        p.add_argument("--top-k", dest="top_k", type=int)
        p.add_argument("--title-boost", dest="title_boost", type=int)
        p.add_argument("--stopwords")
    p_ingest.add_argument("--k1", type=float)
    p_ingest.add_argument("--b", type=float)
    p_ingest.add_argument("--institution-name", dest="institution_name")

    p_search = sub.add_parser("search", help="one-shot lookup against the snapshot")
    p_search.add_argument("query")
    p_search.add_argument("--kinds", help="comma-separated node kinds")
    p_search.add_argument("--limit", type=int, default=10)

    p_trends = sub.add_parser("trends", help="trend series as CSV on stdout")
    p_trends.add_argument("--level", type=int, default=1)
    p_trends.add_argument("--from", dest="year_from", type=int)
    p_trends.add_argument("--to", dest="year_to", type=int)
    p_trends.add_argument("--trend-window", dest="trend_window", type=int)

    p_export = sub.add_parser("export", help="verified copy of the snapshot directory")
    p_export.add_argument("--dest", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--cors-origin", dest="cors_origin")
    p_serve.add_argument("--trend-window", dest="trend_window", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        config = _parse_config_file(args.config) if args.config else {}
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    snapshot_dir = _setting(args, config, "snapshot_dir", "snapshot")

    try:
        if args.command == "ingest":
            report = ingest_corpus(
                args.taxonomy,
                args.units,
                args.researchers,
                args.publications,
                cfg=_ingest_config(args, config),
                snapshot_dir=snapshot_dir,
            )
            print(report.to_json())
            log.info(
                "snapshot version %d written to %s (%d rejection(s))",
                report.snapshot_version,
                snapshot_dir,
                len(report.rejected),
            )
        elif args.command == "classify":
            report = classify_dry_run(
                args.taxonomy, args.publications, cfg=_ingest_config(args, config)
            )
            sys.stdout.write(report)
        elif args.command == "search":
            snapshot = load_snapshot(snapshot_dir)
            kinds = _parse_kinds(args.kinds) if args.kinds else None
            hits = snapshot.index.lookup(args.query, kinds, limit=max(1, args.limit))
            print(
                json.dumps(
                    {
                        "query": args.query,
                        "hits": [
                            {
                                "id": h.node,
                                "kind": h.kind.value,
                                "score": h.score,
                                "matched_fields": list(h.matched_fields),
                            }
                            for h in hits
                        ],
                    },
                    sort_keys=True,
                    indent=2,
                )
            )
        elif args.command == "trends":
            from . import analytics

            snapshot = load_snapshot(snapshot_dir)
            taxonomy = taxonomy_from_snapshot(snapshot)
            window = analytics.default_year_window(
                snapshot, _setting(args, config, "trend_window", analytics.DEFAULT_TREND_SPAN)
            ) or (0, 0)
            year_from = args.year_from if args.year_from is not None else window[0]
            year_to = args.year_to if args.year_to is not None else window[1]
            series = analytics.trend_series(snapshot, taxonomy, args.level, year_from, year_to)
            print("fos_id,year,count")
            for s in series:
                for year in sorted(s.counts):
                    print(f"{s.fos},{year},{s.counts[year]}")
        elif args.command == "export":
            export_snapshot(snapshot_dir, args.dest)
            log.info("snapshot exported to %s", args.dest)
        elif args.command == "serve":
            server_config = ServerConfig(
                host=_setting(args, config, "host", "127.0.0.1"),
                port=_setting(args, config, "port", 8000),
                snapshot_dir=snapshot_dir,
                cors_origin=_setting(args, config, "cors_origin", None),
                trend_window=_setting(args, config, "trend_window", 10),
            )
            serve(server_config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScholarGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
