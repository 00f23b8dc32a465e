/** Fetch mock backed by the recorded fixture API responses. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export interface FixtureData {
  responses: Record<string, unknown>;
  entities: {
    fos: string[];
    researchers: string[];
    units: string[];
    publications: string[];
  };
}

export const fixture: FixtureData = JSON.parse(
  readFileSync(join(here, "fixtures", "api.json"), "utf-8"),
);

/** Paths requested while the mock was installed. */
export const requestedPaths: string[] = [];

export function installFetchMock(): void {
  requestedPaths.length = 0;
  window.SCHOLARGRAPH_API = "";
  globalThis.fetch = (async (input: RequestInfo | URL) => {
    const path = String(input);
    requestedPaths.push(path);
    const body = fixture.responses[path];
    if (body === undefined) {
      return new Response(JSON.stringify({ error: "unknown_id", message: `unrecorded ${path}` }), {
        status: 404,
        headers: { "content-type": "application/json" },
      });
    }
    return new Response(JSON.stringify(body), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
}

export function installFailingFetch(): void {
  globalThis.fetch = (async () => {
    throw new TypeError("network down");
  }) as typeof fetch;
}
