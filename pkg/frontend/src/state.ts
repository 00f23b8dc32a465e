/**
 * View state and its URL encoding.
 *
 * The hash fully encodes what is on screen, including the breadcrumb
 * trail, so any deep link reloads to the identical view and browser
 * back-navigation restores the prior state exactly.
 *
 * Format: `#/<route>?<params>&bc=<crumb,crumb,...>` where each crumb is
 * a percent-encoded route path (without its own breadcrumb).
 */

export type Route =
  | { page: "overview" }
  | { page: "fos"; id: string }
  | { page: "researcher"; id: string }
  | { page: "unit"; id: string }
  | { page: "publication"; id: string }
  | { page: "search"; query: string; kinds?: string }
  | { page: "trends"; level: number; from?: number; to?: number };

export interface ViewState {
  route: Route;
  breadcrumb: string[]; // route paths of previously visited views
}

const MAX_CRUMBS = 12;

/** Route -> canonical path (no breadcrumb). */
export function routePath(route: Route): string {
  switch (route.page) {
    case "overview":
      return "/overview";
    case "fos":
      return `/fos/${encodeURIComponent(route.id)}`;
    case "researcher":
      return `/researcher/${encodeURIComponent(route.id)}`;
    case "unit":
      return `/unit/${encodeURIComponent(route.id)}`;
    case "publication":
      return `/publication/${encodeURIComponent(route.id)}`;
    case "search": {
      const params = new URLSearchParams({ q: route.query });
      if (route.kinds) params.set("kinds", route.kinds);
      return `/search?${params.toString()}`;
    }
    case "trends": {
      const params = new URLSearchParams({ level: String(route.level) });
      if (route.from !== undefined) params.set("from", String(route.from));
      if (route.to !== undefined) params.set("to", String(route.to));
      return `/trends?${params.toString()}`;
    }
  }
}

export function encodeState(state: ViewState): string {
  const path = routePath(state.route);
  if (!state.breadcrumb.length) return `#${path}`;
  const bc = state.breadcrumb.map(encodeURIComponent).join(",");
  return `#${path}${path.includes("?") ? "&" : "?"}bc=${bc}`;
}

function parseRoute(path: string, params: URLSearchParams): Route {
  const segments = path.split("/").filter(Boolean);
  const head = segments[0] ?? "overview";
  const id = segments[1] ? decodeURIComponent(segments[1]) : "";
  switch (head) {
    case "overview":
      return { page: "overview" };
    case "fos":
      return id ? { page: "fos", id } : { page: "overview" };
    case "researcher":
      return id ? { page: "researcher", id } : { page: "overview" };
    case "unit":
      return id ? { page: "unit", id } : { page: "overview" };
    case "publication":
      return id ? { page: "publication", id } : { page: "overview" };
    case "search":
      return { page: "search", query: params.get("q") ?? "", kinds: params.get("kinds") ?? undefined };
    case "trends": {
      const level = Number(params.get("level") ?? "1");
      const from = params.get("from");
      const to = params.get("to");
      return {
        page: "trends",
        level: Number.isFinite(level) && level >= 0 ? level : 1,
        from: from !== null ? Number(from) : undefined,
        to: to !== null ? Number(to) : undefined,
      };
    }
    default:
      return { page: "overview" };
  }
}

export function decodeState(hash: string): ViewState {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const [path, queryString] = raw.split("?", 2);
  const params = new URLSearchParams(queryString ?? "");
  const bc = params.get("bc");
  const breadcrumb = bc ? bc.split(",").filter(Boolean).map(decodeURIComponent) : [];
  return { route: parseRoute(path || "/overview", params), breadcrumb };
}

/** State for following a link: the current view joins the trail. */
export function pushCrumb(current: ViewState, next: Route): ViewState {
  const trail = [...current.breadcrumb, routePath(current.route)].slice(-MAX_CRUMBS);
  return { route: next, breadcrumb: trail };
}

/** Human label for a crumb path, e.g. "/fos/fos-ml" -> "fos-ml". */
export function crumbLabel(path: string): string {
  const [clean] = path.split("?", 1);
  const segments = clean.split("/").filter(Boolean);
  return decodeURIComponent(segments[segments.length - 1] ?? "overview");
}
