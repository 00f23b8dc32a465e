/**
 * Typed client for the knowledge-graph API.
 *
 * The UI only ever issues the documented GET endpoints and never computes
 * scores itself; the server is authoritative for all ranking.
 */

export interface SearchHit {
  id: string;
  kind: string;
  score: number;
  label: string;
  matched_fields: string[];
}

export interface SearchResponse {
  snapshot_version: number;
  query: string;
  hits: SearchHit[];
}

export interface RootTile {
  id: string;
  name: string;
  level: number;
  publication_count: number;
  researcher_count: number;
  total_citations: number;
}

export interface OverviewTile {
  fos: string;
  name: string;
  publication_count: number;
  researcher_count: number;
  total_citations: number;
}

export interface OverviewResponse {
  snapshot_version: number;
  tiles: OverviewTile[];
}

export interface NamedRef {
  id: string;
  name: string;
}

export interface FosDetail {
  snapshot_version: number;
  id: string;
  name: string;
  description: string;
  level: number;
  parents: NamedRef[];
  children: NamedRef[];
  publication_count: number;
  publications: { id: string; title: string; year: number | null; score: number }[];
}

export interface Recommendation {
  id: string;
  name: string;
  score: number;
  reason: string;
}

export interface ResearcherDetail {
  snapshot_version: number;
  id: string;
  name: string;
  units: NamedRef[];
  top_concepts: { id: string; name: string; weight: number }[];
  publications: { id: string; title: string; year: number | null; citations: number | null }[];
}

export interface UnitDetail {
  snapshot_version: number;
  id: string;
  name: string;
  unit_type: string;
  parent: NamedRef | null;
  children: NamedRef[];
  members: NamedRef[];
  top_concepts: { id: string; name: string; weight: number }[];
}

export interface PublicationDetail {
  snapshot_version: number;
  id: string;
  title: string;
  abstract: string;
  year: number | null;
  citations: number | null;
  authors: NamedRef[];
  tags: { id: string; name: string; score: number }[];
}

export interface TrendSeries {
  fos: string;
  name: string;
  level: number;
  years: number[];
  counts: number[];
  trend_score: number;
}

export interface TrendsResponse {
  snapshot_version: number;
  level: number;
  year_from: number;
  year_to: number;
  series: TrendSeries[];
}

/** Raised for HTTP error statuses so views can distinguish 404s. */
export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

declare global {
  interface Window {
    SCHOLARGRAPH_API?: string;
  }
}

export function apiBase(): string {
  const override = typeof window !== "undefined" ? window.SCHOLARGRAPH_API : undefined;
  return override !== undefined ? override : "http://127.0.0.1:8000";
}

async function getJson<T>(path: string): Promise<T> {
  const response = await fetch(apiBase() + path);
  if (!response.ok) {
    let message = `HTTP ${response.status}`;
    try {
      const body = await response.json();
      if (body && body.message) message = body.message;
    } catch {
      // non-JSON error body; keep the status message
    }
    throw new ApiError(response.status, message);
  }
  return (await response.json()) as T;
}

export const api = {
  overview: () => getJson<OverviewResponse>("/overview"),
  fosRoots: () => getJson<{ snapshot_version: number; roots: RootTile[] }>("/fos"),
  fos: (id: string) => getJson<FosDetail>(`/fos/${encodeURIComponent(id)}`),
  fosRelated: (id: string, k = 5) =>
    getJson<{ related: Recommendation[] }>(`/fos/${encodeURIComponent(id)}/related?k=${k}`),
  researcher: (id: string) => getJson<ResearcherDetail>(`/researchers/${encodeURIComponent(id)}`),
  researcherSimilar: (id: string, k = 5) =>
    getJson<{ similar: Recommendation[] }>(
      `/researchers/${encodeURIComponent(id)}/similar?k=${k}`,
    ),
  unit: (id: string) => getJson<UnitDetail>(`/units/${encodeURIComponent(id)}`),
  unitRelated: (id: string, k = 5) =>
    getJson<{ related: Recommendation[] }>(`/units/${encodeURIComponent(id)}/related?k=${k}`),
  publication: (id: string) => getJson<PublicationDetail>(`/publications/${encodeURIComponent(id)}`),
  search: (query: string, kinds?: string) =>
    getJson<SearchResponse>(
      `/search?q=${encodeURIComponent(query)}${kinds ? `&kinds=${encodeURIComponent(kinds)}` : ""}`,
    ),
  trends: (level: number, from?: number, to?: number) => {
    let path = `/trends?level=${level}`;
    if (from !== undefined) path += `&from=${from}`;
    if (to !== undefined) path += `&to=${to}`;
    return getJson<TrendsResponse>(path);
  },
};

export type Api = typeof api;
