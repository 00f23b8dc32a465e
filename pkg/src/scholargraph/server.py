"""Read-only HTTP API over the currently published snapshot.

All endpoints are GETs returning JSON with the snapshot version in every
body. Writes happen only through the CLI ingest path; a snapshot swap is
observable to clients purely as a version bump. Data conditions map to
400 (malformed parameters), 404 (unknown ids) and 503 (no snapshot yet),
never 500.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import analytics, inference, recommend
from .errors import (
    BindFailureError,
    InvalidYearRangeError,
    LevelOutOfRangeError,
    ScholarGraphError,
    SnapshotMissingError,
    UnknownConceptError,
    UnknownNodeError,
)
from .graph import EdgeKind, GraphSnapshot, GraphStore, NodeKind
from .search import SearchIndex, build_index
from .taxonomy import Taxonomy, taxonomy_from_snapshot

log = logging.getLogger(__name__)

DEFAULT_PAGE_LIMIT = 25
DEFAULT_TOP_K = 5
DEFAULT_LEVEL = 1


@dataclass(frozen=True)
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    snapshot_dir: str = "snapshot"
    cors_origin: str | None = None
    trend_window: int = analytics.DEFAULT_TREND_SPAN


class BadParameterError(ScholarGraphError):
    pass


class _SnapshotContext:
    """Per-version caches derived from the snapshot (taxonomy, index)."""

    def __init__(self, snapshot: GraphSnapshot):
        self.snapshot = snapshot
        self.taxonomy: Taxonomy = taxonomy_from_snapshot(snapshot)
        self.index: SearchIndex = snapshot.index or build_index(snapshot)


def _int_param(value: str | None, name: str, default: int, minimum: int | None = None) -> int:
    if value is None:
        return default
    try:
        parsed = int(value)
    except ValueError:
        raise BadParameterError(f"parameter {name!r} must be an integer") from None
    if minimum is not None and parsed < minimum:
        raise BadParameterError(f"parameter {name!r} must be >= {minimum}")
    return parsed


def _kinds_param(value: str | None) -> set[NodeKind] | None:
    if value is None or not value.strip():
        return None
    kinds = set()
    by_name = {k.value.casefold(): k for k in NodeKind}
    for part in value.split(","):
        part = part.strip().casefold()
        if not part:
            continue
        if part not in by_name:
            raise BadParameterError(f"unknown node kind {part!r}")
        kinds.add(by_name[part])
    return kinds or None


def _label(snapshot: GraphSnapshot, node_id: str) -> str:
    props = snapshot.nodes[node_id].props
    value = props.get("name") or props.get("title") or node_id
    return str(value)


def _named(snapshot: GraphSnapshot, node_id: str) -> dict:
    return {"id": node_id, "name": _label(snapshot, node_id)}


def create_app(store: GraphStore, config: ServerConfig | None = None) -> FastAPI:
    config = config or ServerConfig()
    app = FastAPI(title="scholargraph", docs_url=None, redoc_url=None)

    if config.cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    contexts: dict[int, _SnapshotContext] = {}

    def ctx() -> _SnapshotContext:
        snapshot = store.current()
        cached = contexts.get(snapshot.version)
        if cached is None or cached.snapshot is not snapshot:
            cached = _SnapshotContext(snapshot)
            contexts.clear()
            contexts[snapshot.version] = cached
        return cached

    def body(c: _SnapshotContext, payload: dict) -> dict:
        return {"snapshot_version": c.snapshot.version, **payload}

    @app.exception_handler(ScholarGraphError)
    async def domain_error(_request: Request, exc: ScholarGraphError):
        if isinstance(exc, SnapshotMissingError):
            status, code = 503, "snapshot_missing"
        elif isinstance(exc, (UnknownNodeError, UnknownConceptError)):
            status, code = 404, "unknown_id"
        elif isinstance(exc, (BadParameterError, InvalidYearRangeError, LevelOutOfRangeError)):
            status, code = 400, "bad_parameter"
        else:
            status, code = 400, "bad_request"
        snap = store.current_or_none()
        return JSONResponse(
            status_code=status,
            content={
                "snapshot_version": snap.version if snap else None,
                "error": code,
                "message": str(exc),
            },
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError):
        snap = store.current_or_none()
        return JSONResponse(
            status_code=400,
            content={
                "snapshot_version": snap.version if snap else None,
                "error": "bad_parameter",
                "message": str(exc),
            },
        )

    @app.get("/health")
    def health() -> dict:
        return body(ctx(), {"status": "ok"})

    @app.get("/search")
    def search(
        q: str = "",
        kinds: str | None = None,
        limit: str | None = None,
        offset: str | None = None,
    ) -> dict:
        c = ctx()
        kind_filter = _kinds_param(kinds)
        page = _int_param(limit, "limit", DEFAULT_PAGE_LIMIT, minimum=1)
        skip = _int_param(offset, "offset", 0, minimum=0)
        hits = c.index.lookup(q, kind_filter, limit=page + skip)[skip:]
        return body(
            c,
            {
                "query": q,
                "hits": [
                    {
                        "id": h.node,
                        "kind": h.kind.value,
                        "score": h.score,
                        "label": _label(c.snapshot, h.node),
                        "matched_fields": list(h.matched_fields),
                    }
                    for h in hits
                ],
            },
        )

    @app.get("/fos")
    def fos_roots(limit: str | None = None, offset: str | None = None) -> dict:
        c = ctx()
        page = _int_param(limit, "limit", DEFAULT_PAGE_LIMIT, minimum=1)
        skip = _int_param(offset, "offset", 0, minimum=0)
        tiles = {t.fos: t for t in analytics.root_tiles(c.snapshot, c.taxonomy)}
        roots = []
        for root_id in c.taxonomy.roots[skip : skip + page]:
            tile = tiles[root_id]
            roots.append(
                {
                    "id": root_id,
                    "name": c.taxonomy.get(root_id).name,
                    "level": 0,
                    "publication_count": tile.publication_count,
                    "researcher_count": tile.researcher_count,
                    "total_citations": tile.total_citations,
                }
            )
        return body(c, {"roots": roots})

    @app.get("/fos/{fos_id}")
    def fos_detail(fos_id: str, limit: str | None = None) -> dict:
        c = ctx()
        concept = c.taxonomy.get(fos_id)
        page = _int_param(limit, "limit", DEFAULT_PAGE_LIMIT, minimum=1)
        tagged = sorted(
            c.snapshot.neighbors(fos_id, EdgeKind.ABOUT, "in"),
            key=lambda pair: (-pair[1]["score"], pair[0]),
        )
        publications = [
            {
                "id": pub_id,
                "title": _label(c.snapshot, pub_id),
                "year": c.snapshot.nodes[pub_id].props.get("year"),
                "score": props["score"],
            }
            for pub_id, props in tagged[:page]
        ]
        return body(
            c,
            {
                "id": fos_id,
                "name": concept.name,
                "description": concept.description,
                "level": concept.level,
                "parents": [_named(c.snapshot, p) for p in concept.parents],
                "children": [_named(c.snapshot, ch) for ch in c.taxonomy.children(fos_id)],
                "publication_count": len(tagged),
                "publications": publications,
            },
        )

    @app.get("/fos/{fos_id}/related")
    def fos_related(fos_id: str, k: str | None = None) -> dict:
        c = ctx()
        top = _int_param(k, "k", DEFAULT_TOP_K, minimum=1)
        recs = recommend.related_fos(c.snapshot, c.taxonomy, fos_id, top)
        return body(c, {"id": fos_id, "related": _rec_payload(c.snapshot, recs)})

    @app.get("/researchers/{researcher_id}")
    def researcher_detail(
        researcher_id: str, level: str | None = None, k: str | None = None
    ) -> dict:
        c = ctx()
        node = c.snapshot.node(researcher_id)
        if node.kind != NodeKind.RESEARCHER:
            raise UnknownNodeError(f"{researcher_id!r} is not a researcher")
        top_level = _int_param(level, "level", DEFAULT_LEVEL, minimum=0)
        top_k = _int_param(k, "k", DEFAULT_TOP_K, minimum=1)
        units = [
            _named(c.snapshot, u)
            for u, _ in c.snapshot.neighbors(researcher_id, EdgeKind.MEMBER_OF, "out")
        ]
        pubs = [
            pub for pub, _ in c.snapshot.neighbors(researcher_id, EdgeKind.AUTHORED, "out")
        ]
        publications = sorted(
            (
                {
                    "id": p,
                    "title": _label(c.snapshot, p),
                    "year": c.snapshot.nodes[p].props.get("year"),
                    "citations": c.snapshot.nodes[p].props.get("citations"),
                }
                for p in pubs
            ),
            key=lambda r: (-(r["year"] or 0), r["id"]),
        )
        return body(
            c,
            {
                "id": researcher_id,
                "name": _label(c.snapshot, researcher_id),
                "units": units,
                "top_concepts": _top_concepts_payload(c, researcher_id, top_level, top_k),
                "publications": publications,
            },
        )

    @app.get("/researchers/{researcher_id}/similar")
    def researcher_similar(researcher_id: str, k: str | None = None) -> dict:
        c = ctx()
        node = c.snapshot.node(researcher_id)
        if node.kind != NodeKind.RESEARCHER:
            raise UnknownNodeError(f"{researcher_id!r} is not a researcher")
        top = _int_param(k, "k", DEFAULT_TOP_K, minimum=1)
        recs = recommend.similar_researchers(c.snapshot, researcher_id, top)
        return body(c, {"id": researcher_id, "similar": _rec_payload(c.snapshot, recs)})

    @app.get("/units/{unit_id}")
    def unit_detail(unit_id: str, level: str | None = None, k: str | None = None) -> dict:
        c = ctx()
        node = c.snapshot.node(unit_id)
        if node.kind != NodeKind.ORG_UNIT:
            raise UnknownNodeError(f"{unit_id!r} is not an org unit")
        top_level = _int_param(level, "level", DEFAULT_LEVEL, minimum=0)
        top_k = _int_param(k, "k", DEFAULT_TOP_K, minimum=1)
        parents = c.snapshot.neighbors(unit_id, EdgeKind.PART_OF, "out")
        return body(
            c,
            {
                "id": unit_id,
                "name": _label(c.snapshot, unit_id),
                "unit_type": node.props.get("unit_type", ""),
                "parent": _named(c.snapshot, parents[0][0]) if parents else None,
                "children": [
                    _named(c.snapshot, child)
                    for child, _ in c.snapshot.neighbors(unit_id, EdgeKind.PART_OF, "in")
                ],
                "members": [
                    _named(c.snapshot, member)
                    for member, _ in c.snapshot.neighbors(unit_id, EdgeKind.MEMBER_OF, "in")
                ],
                "top_concepts": _top_concepts_payload(c, unit_id, top_level, top_k),
            },
        )

    @app.get("/units/{unit_id}/related")
    def unit_related(unit_id: str, k: str | None = None) -> dict:
        c = ctx()
        node = c.snapshot.node(unit_id)
        if node.kind != NodeKind.ORG_UNIT:
            raise UnknownNodeError(f"{unit_id!r} is not an org unit")
        top = _int_param(k, "k", DEFAULT_TOP_K, minimum=1)
        recs = recommend.related_content(c.snapshot, c.taxonomy, unit_id, top)
        return body(c, {"id": unit_id, "related": _rec_payload(c.snapshot, recs)})

    @app.get("/publications/{pub_id}")
    def publication_detail(pub_id: str) -> dict:
        c = ctx()
        node = c.snapshot.node(pub_id)
        if node.kind != NodeKind.PUBLICATION:
            raise UnknownNodeError(f"{pub_id!r} is not a publication")
        tags = sorted(
            c.snapshot.neighbors(pub_id, EdgeKind.ABOUT, "out"),
            key=lambda pair: (-pair[1]["score"], pair[0]),
        )
        return body(
            c,
            {
                "id": pub_id,
                "title": node.props.get("title", ""),
                "abstract": node.props.get("abstract", ""),
                "year": node.props.get("year"),
                "citations": node.props.get("citations"),
                "authors": [
                    _named(c.snapshot, a)
                    for a, _ in c.snapshot.neighbors(pub_id, EdgeKind.AUTHORED, "in")
                ],
                "tags": [
                    {"id": fos, "name": _label(c.snapshot, fos), "score": props["score"]}
                    for fos, props in tags
                ],
            },
        )

    @app.get("/trends")
    def trends(
        level: str | None = None,
        year_from: str | None = Query(default=None, alias="from"),
        year_to: str | None = Query(default=None, alias="to"),
    ) -> dict:
        c = ctx()
        trend_level = _int_param(level, "level", DEFAULT_LEVEL, minimum=0)
        window = analytics.default_year_window(c.snapshot, config.trend_window) or (0, 0)
        y_from = _int_param(year_from, "from", window[0])
        y_to = _int_param(year_to, "to", window[1])
        series = analytics.trend_series(c.snapshot, c.taxonomy, trend_level, y_from, y_to)
        years = list(range(y_from, y_to + 1))
        return body(
            c,
            {
                "level": trend_level,
                "year_from": y_from,
                "year_to": y_to,
                "series": [
                    {
                        "fos": s.fos,
                        "name": _label(c.snapshot, s.fos),
                        "level": s.level,
                        "years": years,
                        "counts": [s.counts[y] for y in years],
                        "trend_score": s.trend_score,
                    }
                    for s in series
                ],
            },
        )

    @app.get("/compare/citations")
    def compare_citations(fos: str = "") -> dict:
        c = ctx()
        fos_ids = [part.strip() for part in fos.split(",") if part.strip()]
        if not fos_ids:
            raise BadParameterError("parameter 'fos' must list at least one concept id")
        rows = analytics.compare_citations(c.snapshot, c.taxonomy, fos_ids)
        return body(
            c,
            {
                "fields": [
                    {
                        "fos": fos_id,
                        "name": _label(c.snapshot, fos_id),
                        "total_citations": total,
                        "publication_count": count,
                    }
                    for fos_id, total, count in rows
                ]
            },
        )

    @app.get("/overview")
    def overview() -> dict:
        c = ctx()
        tiles = analytics.institution_overview(c.snapshot, c.taxonomy)
        return body(
            c,
            {
                "tiles": [
                    {
                        "fos": t.fos,
                        "name": _label(c.snapshot, t.fos),
                        "publication_count": t.publication_count,
                        "researcher_count": t.researcher_count,
                        "total_citations": t.total_citations,
                    }
                    for t in tiles
                ]
            },
        )

    def _top_concepts_payload(
        c: _SnapshotContext, entity_id: str, level: int, k: int
    ) -> list[dict]:
        dist = inference.profile_of(c.snapshot, entity_id)
        ranked = inference.top_concepts(dist, c.taxonomy, level, k) if dist else []
        return [
            {"id": fos, "name": _label(c.snapshot, fos), "weight": weight}
            for fos, weight in ranked
        ]

    def _rec_payload(snapshot: GraphSnapshot, recs: list) -> list[dict]:
        return [
            {
                "id": r.target,
                "name": _label(snapshot, r.target),
                "score": r.score,
                "reason": r.reason,
            }
            for r in recs
        ]

    return app


def serve(config: ServerConfig, store: GraphStore | None = None) -> None:
    """Load the snapshot directory and run the API with uvicorn (blocking)."""
    import uvicorn

    from .ingest import load_snapshot

    if store is None:
        store = GraphStore(load_snapshot(config.snapshot_dir))
    app = create_app(store, config)
    log.info("serving snapshot version %d on %s:%d", store.current().version, config.host, config.port)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    except OSError as exc:
        raise BindFailureError(f"cannot bind {config.host}:{config.port}: {exc}") from exc
