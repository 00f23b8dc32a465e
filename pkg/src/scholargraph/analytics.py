"""Aggregations over the snapshot: trends per depth level, citation
comparison, and the institution overview.

Trend counting is fractional: each publication distributes its unit mass
over its rolled-up concepts, so per-year masses sum to the number of
publications that roll up to the requested level. Citation comparison
counts whole publications per field (a paper tagged into two queried
fields contributes its full citation count to each).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidYearRangeError, LevelOutOfRangeError, TooFewYearsError
from .graph import GraphSnapshot, NodeId, NodeKind
from .inference import profile_of
from .taxonomy import Taxonomy, rollup_distribution

DEFAULT_TREND_SPAN = 10


@dataclass(frozen=True)
class TrendSeries:
    fos: NodeId
    level: int
    counts: dict[int, float]  # contiguous year range, missing years filled with 0
    trend_score: float


@dataclass(frozen=True)
class OverviewTile:
    fos: NodeId
    publication_count: int
    researcher_count: int
    total_citations: int


def _slope_over_mean(values: list[float]) -> float:
    # Least-squares slope over the year index, scale-freed by the mean.
    if all(v == values[0] for v in values):
        return 0.0
    n = len(values)
    x_mean = (n - 1) / 2.0
    y_mean = sum(values) / n
    num = 0.0
    den = 0.0
    for i, y in enumerate(values):
        dx = i - x_mean
        num += dx * (y - y_mean)
        den += dx * dx
    slope = num / den
    return slope / max(y_mean, 1.0)


def trend_score(series: TrendSeries) -> float:
    """Least-squares slope of the counts divided by max(mean, 1)."""
    if len(series.counts) < 2:
        raise TooFewYearsError("trend score requires at least 2 years")
    return _slope_over_mean([series.counts[y] for y in sorted(series.counts)])


def _publication_year(snapshot: GraphSnapshot, pub_id: NodeId) -> int | None:
    year = snapshot.nodes[pub_id].props.get("year")
    return year if isinstance(year, int) else None


def trend_series(
    snapshot: GraphSnapshot,
    taxonomy: Taxonomy,
    level: int,
    year_from: int,
    year_to: int,
) -> list[TrendSeries]:
    """One series per concept with nonzero mass in the year range,
    ascending by concept id."""
    if year_from > year_to:
        raise InvalidYearRangeError(f"year_from {year_from} > year_to {year_to}")
    if level < 0:
        raise LevelOutOfRangeError(f"level must be >= 0, got {level}")
    acc: dict[NodeId, dict[int, float]] = {}
    for node in snapshot.nodes_of_kind(NodeKind.PUBLICATION):
        year = _publication_year(snapshot, node.id)
        if year is None or not year_from <= year <= year_to:
            continue
        dist = profile_of(snapshot, node.id)
        if not dist:
            continue
        rolled = rollup_distribution(taxonomy, dist, level)
        for fos in sorted(rolled):
            per_year = acc.setdefault(fos, {})
            per_year[year] = per_year.get(year, 0.0) + rolled[fos]
    out = []
    years = range(year_from, year_to + 1)
    for fos in sorted(acc):
        counts = {y: acc[fos].get(y, 0.0) for y in years}
        values = [counts[y] for y in years]
        score = _slope_over_mean(values) if len(values) >= 2 else 0.0
        out.append(TrendSeries(fos, taxonomy.level(fos), counts, score))
    return out


def compare_citations(
    snapshot: GraphSnapshot, taxonomy: Taxonomy, fos_ids: list[NodeId]
) -> list[tuple[NodeId, int, int]]:
    """(field, total citations, publication count) per requested field.

    A publication counts for a field when its distribution, rolled up to
    that field's level, gives the field positive weight; its full
    citation count is credited (no fractional split).
    """
    for fos_id in fos_ids:
        taxonomy.get(fos_id)
    publications = snapshot.nodes_of_kind(NodeKind.PUBLICATION)
    results = []
    for fos_id in fos_ids:
        field_level = taxonomy.level(fos_id)
        total = 0
        count = 0
        for node in publications:
            dist = profile_of(snapshot, node.id)
            if not dist:
                continue
            rolled = rollup_distribution(taxonomy, dist, field_level)
            if rolled.get(fos_id, 0.0) > 0.0:
                citations = node.props.get("citations", 0)
                total += citations if isinstance(citations, int) else 0
                count += 1
        results.append((fos_id, total, count))
    return results


def overview_tile(snapshot: GraphSnapshot, taxonomy: Taxonomy, root_id: NodeId) -> OverviewTile:
    """Recounted tile for one level-0 concept (zero counts allowed)."""
    tiles = {t.fos: t for t in root_tiles(snapshot, taxonomy)}
    return tiles.get(root_id, OverviewTile(taxonomy.get(root_id).id, 0, 0, 0))


def root_tiles(snapshot: GraphSnapshot, taxonomy: Taxonomy) -> list[OverviewTile]:
    pub_count: dict[NodeId, int] = {}
    cite_total: dict[NodeId, int] = {}
    res_count: dict[NodeId, int] = {}
    for node in snapshot.nodes_of_kind(NodeKind.PUBLICATION):
        dist = profile_of(snapshot, node.id)
        if not dist:
            continue
        rolled = rollup_distribution(taxonomy, dist, 0)
        citations = node.props.get("citations", 0)
        citations = citations if isinstance(citations, int) else 0
        for root in sorted(rolled):
            if rolled[root] > 0.0:
                pub_count[root] = pub_count.get(root, 0) + 1
                cite_total[root] = cite_total.get(root, 0) + citations
    for node in snapshot.nodes_of_kind(NodeKind.RESEARCHER):
        dist = profile_of(snapshot, node.id)
        if not dist:
            continue
        rolled = rollup_distribution(taxonomy, dist, 0)
        for root in sorted(rolled):
            if rolled[root] > 0.0:
                res_count[root] = res_count.get(root, 0) + 1
    return [
        OverviewTile(
            root,
            pub_count.get(root, 0),
            res_count.get(root, 0),
            cite_total.get(root, 0),
        )
        for root in taxonomy.roots
    ]


def institution_overview(snapshot: GraphSnapshot, taxonomy: Taxonomy) -> list[OverviewTile]:
    """Active root-domain tiles, ordered by publication count descending."""
    tiles = [
        t
        for t in root_tiles(snapshot, taxonomy)
        if t.publication_count or t.researcher_count
    ]
    tiles.sort(key=lambda t: (-t.publication_count, t.fos))
    return tiles


def default_year_window(
    snapshot: GraphSnapshot, span: int = DEFAULT_TREND_SPAN
) -> tuple[int, int] | None:
    """Calendar window ending at the most recent publication year."""
    years = [
        y
        for node in snapshot.nodes_of_kind(NodeKind.PUBLICATION)
        if (y := _publication_year(snapshot, node.id)) is not None
    ]
    if not years:
        return None
    year_to = max(years)
    return (year_to - span + 1, year_to)
