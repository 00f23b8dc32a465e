/**
 * SPA bootstrap: hash-based routing with last-write-wins rendering.
 *
 * Every navigation bumps a sequence number; an async render only commits
 * its DOM if it is still the newest request, so a slow response can
 * never overwrite a newer view.
 */

import { ApiError } from "./api.js";
import { decodeState } from "./state.js";
import { renderApiUnreachable, renderNotFound, renderRoute } from "./views.js";

let renderSeq = 0;

export async function handleNavigation(root: HTMLElement): Promise<void> {
  const seq = ++renderSeq;
  const state = decodeState(window.location.hash || "#/overview");
  const staging = document.createElement("div");
  try {
    await renderRoute(staging, state);
  } catch (error) {
    if (seq !== renderSeq) return;
    if (error instanceof ApiError && error.status === 404) {
      renderNotFound(root, state, error.message);
    } else {
      renderApiUnreachable(root, () => void handleNavigation(root));
    }
    return;
  }
  if (seq !== renderSeq) return; // a newer navigation already rendered
  root.replaceChildren(...Array.from(staging.childNodes));
}

export function start(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  window.addEventListener("hashchange", () => void handleNavigation(root));
  void handleNavigation(root);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  start();
}
