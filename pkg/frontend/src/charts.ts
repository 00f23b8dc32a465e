/**
 * Hand-rolled SVG line chart for trend series. Line series only; the
 * design deliberately avoids graph-layout visualizations.
 */

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 240;
const PAD = { left: 42, right: 12, top: 12, bottom: 26 };

const PALETTE = [
  "#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed",
  "#0891b2", "#be185d", "#4d7c0f", "#b45309", "#1e40af",
];

export interface LineSeries {
  label: string;
  years: number[];
  counts: number[];
}

export function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

/** Scale a data point into pixel space. */
export function scalePoint(
  year: number,
  count: number,
  yearMin: number,
  yearMax: number,
  countMax: number,
): { x: number; y: number } {
  const spanX = Math.max(yearMax - yearMin, 1);
  const plotW = WIDTH - PAD.left - PAD.right;
  const plotH = HEIGHT - PAD.top - PAD.bottom;
  const x = PAD.left + ((year - yearMin) / spanX) * plotW;
  const y = PAD.top + plotH - (countMax > 0 ? (count / countMax) * plotH : 0);
  return { x, y };
}

export function lineChart(series: LineSeries[]): SVGElement {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: String(WIDTH),
    height: String(HEIGHT),
    role: "img",
    class: "trend-chart",
  });
  if (!series.length) return svg;

  const years = series[0].years;
  const yearMin = Math.min(...years);
  const yearMax = Math.max(...years);
  const countMax = Math.max(...series.flatMap((s) => s.counts), 0);

  const axisY = HEIGHT - PAD.bottom;
  svg.append(
    svgEl("line", {
      x1: String(PAD.left), y1: String(axisY),
      x2: String(WIDTH - PAD.right), y2: String(axisY),
      stroke: "#9ca3af", "stroke-width": "1",
    }),
    svgEl("line", {
      x1: String(PAD.left), y1: String(PAD.top),
      x2: String(PAD.left), y2: String(axisY),
      stroke: "#9ca3af", "stroke-width": "1",
    }),
  );
  const labels: [number, number, string][] = [
    [PAD.left, HEIGHT - 8, String(yearMin)],
    [WIDTH - PAD.right - 28, HEIGHT - 8, String(yearMax)],
    [4, PAD.top + 10, countMax.toFixed(1)],
    [4, axisY, "0"],
  ];
  for (const [x, y, text] of labels) {
    const label = svgEl("text", {
      x: String(x), y: String(y), "font-size": "11", fill: "#6b7280",
    });
    label.textContent = text;
    svg.append(label);
  }

  series.forEach((s, index) => {
    const points = s.years
      .map((year, i) => scalePoint(year, s.counts[i], yearMin, yearMax, countMax))
      .map((p) => `${p.x.toFixed(1)},${p.y.toFixed(1)}`)
      .join(" ");
    const line = svgEl("polyline", {
      points,
      fill: "none",
      stroke: seriesColor(index),
      "stroke-width": "2",
      "data-series": s.label,
    });
    svg.append(line);
  });
  return svg;
}
