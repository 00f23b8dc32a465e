import { describe, expect, it } from "vitest";

import { lineChart, scalePoint, seriesColor } from "../src/charts.js";

describe("line chart", () => {
  it("scales years across the plot width and counts up the height", () => {
    const left = scalePoint(2015, 0, 2015, 2024, 10);
    const right = scalePoint(2024, 10, 2015, 2024, 10);
    expect(right.x).toBeGreaterThan(left.x);
    expect(right.y).toBeLessThan(left.y); // larger count sits higher
  });

  it("handles a single-year span without dividing by zero", () => {
    const point = scalePoint(2020, 1, 2020, 2020, 1);
    expect(Number.isFinite(point.x)).toBe(true);
    expect(Number.isFinite(point.y)).toBe(true);
  });

  it("renders one polyline per series", () => {
    const svg = lineChart([
      { label: "a", years: [2020, 2021], counts: [1, 2] },
      { label: "b", years: [2020, 2021], counts: [2, 1] },
    ]);
    const lines = svg.querySelectorAll("polyline");
    expect(lines.length).toBe(2);
    expect(lines[0].getAttribute("data-series")).toBe("a");
  });

  it("flat zero series stay on the baseline", () => {
    const svg = lineChart([{ label: "a", years: [2020, 2021, 2022], counts: [0, 0, 0] }]);
    const points = svg.querySelector("polyline")!.getAttribute("points")!.trim().split(/\s+/);
    const ys = new Set(points.map((p) => p.split(",")[1]));
    expect(ys.size).toBe(1);
  });

  it("cycles the palette deterministically", () => {
    expect(seriesColor(0)).toBe(seriesColor(10));
  });
});
