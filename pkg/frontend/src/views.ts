/**
 * Page renderers. Every entity shown anywhere is rendered as a working
 * link whose href fully encodes the next view state (route + breadcrumb),
 * so navigation, deep links and browser history all go through the URL.
 */

import { api, ApiError } from "./api.js";
import type {
  FosDetail,
  OverviewTile,
  PublicationDetail,
  Recommendation,
  ResearcherDetail,
  TrendsResponse,
} from "./api.js";
import { lineChart, seriesColor } from "./charts.js";
import { clear, el, formatScore, link, section } from "./dom.js";
import {
  crumbLabel,
  decodeState,
  encodeState,
  pushCrumb,
  Route,
  ViewState,
} from "./state.js";

export function hrefTo(state: ViewState, next: Route): string {
  return encodeState(pushCrumb(state, next));
}

function entityLink(state: ViewState, next: Route, label: string): HTMLElement {
  return link(hrefTo(state, next), label);
}

function breadcrumbBar(state: ViewState): HTMLElement {
  const bar = el("nav", { class: "breadcrumb", "aria-label": "breadcrumb" });
  state.breadcrumb.forEach((path, index) => {
    const target: ViewState = {
      route: decodeState(`#${path}`).route,
      breadcrumb: state.breadcrumb.slice(0, index),
    };
    bar.append(link(encodeState(target), crumbLabel(path), "crumb"), el("span", { class: "crumb-sep" }, " / "));
  });
  bar.append(el("span", { class: "crumb-current" }, crumbLabel(routeLabel(state))));
  return bar;
}

function routeLabel(state: ViewState): string {
  return encodeState({ route: state.route, breadcrumb: [] }).slice(1);
}

function searchBox(state: ViewState, initial = ""): HTMLElement {
  const input = el("input", {
    type: "search",
    name: "q",
    placeholder: "Search researchers, topics, publications...",
    value: initial,
    class: "search-input",
  }) as HTMLInputElement;
  const form = el("form", { class: "search-form" }, input, el("button", { type: "submit" }, "Search"));
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    window.location.hash = hrefTo(state, { page: "search", query: input.value }).slice(1);
  });
  return form;
}

function recommendationPanel(
  state: ViewState,
  title: string,
  recs: Recommendation[],
  toRoute: (id: string) => Route,
): HTMLElement {
  const list = el("ul", { class: "related-list" });
  for (const rec of recs) {
    list.append(
      el(
        "li",
        {},
        entityLink(state, toRoute(rec.id), rec.name),
        el("span", { class: "score" }, ` ${formatScore(rec.score)}`),
        el("span", { class: "reason" }, ` (${rec.reason})`),
      ),
    );
  }
  return section(title, recs.length ? list : el("p", { class: "empty" }, "No related entries."));
}

function conceptList(
  state: ViewState,
  concepts: { id: string; name: string; weight: number }[],
): HTMLElement {
  const list = el("ul", { class: "concept-list" });
  for (const c of concepts) {
    list.append(
      el("li", {}, entityLink(state, { page: "fos", id: c.id }, c.name),
        el("span", { class: "score" }, ` ${formatScore(c.weight)}`)),
    );
  }
  return list;
}

// --- pages ---

export async function renderOverview(root: HTMLElement, state: ViewState): Promise<void> {
  const [overview, trends] = await Promise.all([api.overview(), api.trends(1)]);
  clear(root);
  root.append(breadcrumbBar(state), el("h1", {}, "Research landscape"), searchBox(state));

  const tilesBox = el("div", { class: "tiles" });
  if (!overview.tiles.length) {
    tilesBox.append(
      el("p", { class: "empty" }, "No research activity ingested yet. The search above still works."),
    );
  }
  for (const tile of overview.tiles) {
    tilesBox.append(overviewTile(state, tile));
  }
  root.append(section("Research domains", tilesBox));

  // Panel re-queries are last-write-wins: a stale response never lands.
  const preview = el("div", { class: "trend-preview" });
  let panelSeq = 0;
  root.append(
    section(
      "Current research trends",
      levelSelector(trends.level, async (level) => {
        const seq = ++panelSeq;
        const refreshed = await api.trends(level);
        if (seq !== panelSeq) return;
        clear(preview);
        preview.append(trendPanel(state, refreshed));
      }),
      preview,
      el("p", {}, entityLink(state, { page: "trends", level: 1 }, "Open the trend console")),
    ),
  );
  preview.append(trendPanel(state, trends));
}

function overviewTile(state: ViewState, tile: OverviewTile): HTMLElement {
  return el(
    "div",
    { class: "tile", "data-fos": tile.fos },
    el("h3", {}, entityLink(state, { page: "fos", id: tile.fos }, tile.name)),
    el("p", {}, `${tile.publication_count} publications`),
    el("p", {}, `${tile.researcher_count} researchers`),
    el("p", {}, `${tile.total_citations} citations`),
  );
}

function levelSelector(current: number, onChange: (level: number) => void): HTMLElement {
  const select = el("select", { class: "level-select", "aria-label": "taxonomy depth level" }) as HTMLSelectElement;
  for (let level = 0; level <= 3; level += 1) {
    const option = el("option", { value: String(level) }, `Level ${level}`) as HTMLOptionElement;
    option.selected = level === current;
    select.append(option);
  }
  select.addEventListener("change", () => onChange(Number(select.value)));
  return el("label", { class: "level-label" }, "Depth level: ", select);
}

function trendPanel(state: ViewState, trends: TrendsResponse): HTMLElement {
  const panel = el("div", { class: "trend-panel" });
  const ranked = [...trends.series].sort(
    (a, b) => b.trend_score - a.trend_score || (a.fos < b.fos ? -1 : 1),
  );
  const top = ranked.slice(0, 8);
  panel.append(
    lineChart(top.map((s) => ({ label: s.fos, years: s.years, counts: s.counts }))),
  );
  const legend = el("ul", { class: "legend" });
  top.forEach((s, index) => {
    legend.append(
      el(
        "li",
        { "data-fos": s.fos },
        el("span", { class: "swatch", style: `background:${seriesColor(index)}` }, "■ "),
        entityLink(state, { page: "fos", id: s.fos }, s.name),
        el(
          "span",
          { class: s.trend_score === 0 ? "score badge-flat" : "score" },
          ` ${s.trend_score === 0 ? "flat (0)" : s.trend_score.toFixed(3)}`,
        ),
      ),
    );
  });
  panel.append(legend);
  return panel;
}

export async function renderFos(root: HTMLElement, state: ViewState, id: string): Promise<void> {
  const [detail, related] = await Promise.all([api.fos(id), api.fosRelated(id)]);
  clear(root);
  root.append(breadcrumbBar(state), el("h1", {}, detail.name));
  root.append(
    el("p", { class: "meta" }, `Level ${detail.level} concept`),
    detail.description ? el("p", {}, detail.description) : null as never,
  );
  if (detail.parents.length) {
    const parents = el("p", { class: "parents" }, "Broader: ");
    detail.parents.forEach((p) => parents.append(entityLink(state, { page: "fos", id: p.id }, p.name), " "));
    root.append(parents);
  }
  if (detail.children.length) {
    const list = el("ul", { class: "children" });
    detail.children.forEach((c) =>
      list.append(el("li", {}, entityLink(state, { page: "fos", id: c.id }, c.name))),
    );
    root.append(section("Narrower concepts", list));
  }
  root.append(publicationList(state, detail));
  root.append(recommendationPanel(state, "Related fields", related.related, (rid) => ({ page: "fos", id: rid })));
}

function publicationList(state: ViewState, detail: FosDetail): HTMLElement {
  const list = el("ul", { class: "publication-list" });
  for (const pub of detail.publications) {
    list.append(
      el(
        "li",
        {},
        entityLink(state, { page: "publication", id: pub.id }, pub.title),
        el("span", { class: "meta" }, ` (${pub.year ?? "n/a"}, tag score ${formatScore(pub.score)})`),
      ),
    );
  }
  return section(
    `Tagged publications (${detail.publication_count})`,
    detail.publications.length ? list : el("p", { class: "empty" }, "No tagged publications."),
  );
}

export async function renderResearcher(root: HTMLElement, state: ViewState, id: string): Promise<void> {
  const [detail, similar] = await Promise.all([api.researcher(id), api.researcherSimilar(id)]);
  clear(root);
  root.append(breadcrumbBar(state), el("h1", {}, detail.name));
  const units = el("p", { class: "units" }, "Member of: ");
  detail.units.forEach((u) => units.append(entityLink(state, { page: "unit", id: u.id }, u.name), " "));
  root.append(detail.units.length ? units : el("p", { class: "empty" }, "No unit affiliation."));
  root.append(
    section(
      "Expertise",
      detail.top_concepts.length
        ? conceptList(state, detail.top_concepts)
        : el("p", { class: "empty" }, "No tagged publications yet."),
    ),
  );
  root.append(researcherPublications(state, detail));
  root.append(
    recommendationPanel(state, "Similar researchers", similar.similar, (rid) => ({
      page: "researcher",
      id: rid,
    })),
  );
}

function researcherPublications(state: ViewState, detail: ResearcherDetail): HTMLElement {
  const list = el("ul", { class: "publication-list" });
  for (const pub of detail.publications) {
    list.append(
      el(
        "li",
        {},
        entityLink(state, { page: "publication", id: pub.id }, pub.title),
        el("span", { class: "meta" }, ` (${pub.year ?? "n/a"}, ${pub.citations ?? 0} citations)`),
      ),
    );
  }
  return section(
    `Publications (${detail.publications.length})`,
    detail.publications.length ? list : el("p", { class: "empty" }, "No publications."),
  );
}

export async function renderUnit(root: HTMLElement, state: ViewState, id: string): Promise<void> {
  const [detail, related] = await Promise.all([api.unit(id), api.unitRelated(id)]);
  clear(root);
  root.append(breadcrumbBar(state), el("h1", {}, detail.name));
  root.append(el("p", { class: "meta" }, detail.unit_type || "unit"));
  if (detail.parent && detail.parent.id !== "institution") {
    root.append(el("p", {}, "Part of: ", entityLink(state, { page: "unit", id: detail.parent.id }, detail.parent.name)));
  }
  if (detail.children.length) {
    const list = el("ul", { class: "children" });
    detail.children.forEach((c) => list.append(el("li", {}, entityLink(state, { page: "unit", id: c.id }, c.name))));
    root.append(section("Sub-units", list));
  }
  const members = el("ul", { class: "member-list" });
  detail.members.forEach((m) =>
    members.append(el("li", {}, entityLink(state, { page: "researcher", id: m.id }, m.name))),
  );
  root.append(
    section("Members", detail.members.length ? members : el("p", { class: "empty" }, "No direct members.")),
  );
  root.append(
    section(
      "Research profile",
      detail.top_concepts.length
        ? conceptList(state, detail.top_concepts)
        : el("p", { class: "empty" }, "No tagged publications yet."),
    ),
  );
  root.append(recommendationPanel(state, "Related units", related.related, (rid) => ({ page: "unit", id: rid })));
}

export async function renderPublication(root: HTMLElement, state: ViewState, id: string): Promise<void> {
  const detail: PublicationDetail = await api.publication(id);
  clear(root);
  root.append(breadcrumbBar(state), el("h1", {}, detail.title));
  root.append(el("p", { class: "meta" }, `${detail.year ?? "n/a"} · ${detail.citations ?? 0} citations`));
  if (detail.abstract) root.append(el("p", { class: "abstract" }, detail.abstract));
  const authors = el("p", { class: "authors" }, "Authors: ");
  detail.authors.forEach((a) => authors.append(entityLink(state, { page: "researcher", id: a.id }, a.name), " "));
  root.append(detail.authors.length ? authors : el("p", { class: "empty" }, "No linked authors."));
  const tags = el("ul", { class: "tag-list" });
  detail.tags.forEach((t) =>
    tags.append(
      el("li", {}, entityLink(state, { page: "fos", id: t.id }, t.name),
        el("span", { class: "score" }, ` ${formatScore(t.score)}`)),
    ),
  );
  root.append(section("Fields of study", detail.tags.length ? tags : el("p", { class: "empty" }, "Untagged.")));
}

export async function renderSearch(
  root: HTMLElement,
  state: ViewState,
  query: string,
  kinds?: string,
): Promise<void> {
  const results = query ? await api.search(query, kinds) : { hits: [], query: "", snapshot_version: 0 };
  clear(root);
  root.append(breadcrumbBar(state), el("h1", {}, "Search"), searchBox(state, query));
  const list = el("ul", { class: "search-results" });
  for (const hit of results.hits) {
    list.append(
      el(
        "li",
        { "data-kind": hit.kind },
        el("span", { class: "kind" }, `[${hit.kind}] `),
        entityLink(state, hitRoute(hit.kind, hit.id), hit.label),
        el("span", { class: "score" }, ` ${formatScore(hit.score)}`),
      ),
    );
  }
  root.append(
    query
      ? results.hits.length
        ? list
        : el("p", { class: "empty" }, "No matches.")
      : el("p", { class: "empty" }, "Type a query to search the knowledge graph."),
  );
}

function hitRoute(kind: string, id: string): Route {
  switch (kind) {
    case "Researcher":
      return { page: "researcher", id };
    case "Publication":
      return { page: "publication", id };
    case "OrgUnit":
      return { page: "unit", id };
    case "FieldOfStudy":
      return { page: "fos", id };
    default:
      return { page: "search", query: id };
  }
}

export async function renderTrends(
  root: HTMLElement,
  state: ViewState,
  level: number,
  from?: number,
  to?: number,
): Promise<void> {
  // Invalid ranges are caught client-side: inline message, no request.
  if (from !== undefined && to !== undefined && from > to) {
    clear(root);
    root.append(
      breadcrumbBar(state),
      el("h1", {}, "Research trends"),
      trendControls(state, level, from, to),
      el("p", { class: "validation-error" }, "Invalid range: the start year is after the end year."),
    );
    return;
  }
  const trends = await api.trends(level, from, to);
  clear(root);
  root.append(
    breadcrumbBar(state),
    el("h1", {}, "Research trends"),
    trendControls(state, trends.level, trends.year_from, trends.year_to),
    trendPanel(state, trends),
    el(
      "p",
      { class: "meta" },
      `Trend score: least-squares slope of yearly topical mass, scale-freed by the mean; 0 means flat.`,
    ),
  );
}

function trendControls(state: ViewState, level: number, from: number, to: number): HTMLElement {
  const fromInput = el("input", { type: "number", value: String(from), class: "year-from" }) as HTMLInputElement;
  const toInput = el("input", { type: "number", value: String(to), class: "year-to" }) as HTMLInputElement;
  const form = el(
    "form",
    { class: "trend-controls" },
    levelSelector(level, (next) => {
      window.location.hash = encodeState({
        route: { page: "trends", level: next, from: Number(fromInput.value), to: Number(toInput.value) },
        breadcrumb: state.breadcrumb,
      }).slice(1);
    }),
    el("label", {}, "From ", fromInput),
    el("label", {}, "To ", toInput),
    el("button", { type: "submit" }, "Apply"),
  );
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    window.location.hash = encodeState({
      route: {
        page: "trends",
        level,
        from: Number(fromInput.value),
        to: Number(toInput.value),
      },
      breadcrumb: state.breadcrumb,
    }).slice(1);
  });
  return form;
}

// --- error states ---

export function renderNotFound(root: HTMLElement, state: ViewState, message: string): void {
  clear(root);
  root.append(
    breadcrumbBar(state), // breadcrumb survives so the user can back out
    el("h1", {}, "Not found"),
    el("p", { class: "error" }, message),
    link(encodeState({ route: { page: "overview" }, breadcrumb: [] }), "Back to the overview"),
  );
}

export function renderApiUnreachable(root: HTMLElement, retry: () => void): void {
  clear(root);
  const button = el("button", { class: "retry" }, "Retry");
  button.addEventListener("click", retry);
  root.append(
    el("h1", {}, "API unreachable"),
    el("p", { class: "error" }, "The knowledge-graph API did not respond."),
    button,
  );
}

export async function renderRoute(root: HTMLElement, state: ViewState): Promise<void> {
  const route = state.route;
  switch (route.page) {
    case "overview":
      return renderOverview(root, state);
    case "fos":
      return renderFos(root, state, route.id);
    case "researcher":
      return renderResearcher(root, state, route.id);
    case "unit":
      return renderUnit(root, state, route.id);
    case "publication":
      return renderPublication(root, state, route.id);
    case "search":
      return renderSearch(root, state, route.query, route.kinds);
    case "trends":
      return renderTrends(root, state, route.level, route.from, route.to);
  }
}

export { ApiError };
