import { nice, ticks } from "d3-array";
import type { BoundSeries, Series } from "./series.js";

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#17becf",
];

// Dash patterns cycle over the bound kinds present in the file.
const BOUND_DASHES = ["6 3", "2 2", "8 2 2 2", "1 4"];

// Bound estimates above this are drawn clipped instead of widening the
// y axis: the all-ones upper bound is unclamped and can reach the
// hundreds, which would flatten every curve to the x axis.
const BOUND_AXIS_CAP = 1.5;

export const PANEL_WIDTH = 460;
export const PANEL_HEIGHT = 320;
const MARGIN = { top: 12, right: 14, bottom: 44, left: 58 };

export interface Panel {
  index: number;
  metric: "fdr" | "power";
  xLabel: string;
  yLabel: string;
  curves: Series[];
  bounds: BoundSeries[];
}

type Scale = (v: number) => number;

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d1 === d0) {
    // Single grid point; pad so the point lands mid-panel.
    d0 -= 1;
    d1 += 1;
  }
  const k = (r1 - r0) / (d1 - d0);
  return (v) => r0 + (v - d0) * k;
}

const px = (v: number) => v.toFixed(2);

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Exact series values, embedded so tests can read back what was drawn. */
export function dataAttrs(s: Series): string {
  const parts = [
    `data-attack="${escapeXml(s.attack)}"`,
    `data-defense="${escapeXml(s.defense)}"`,
    `data-x="${JSON.stringify(s.x)}"`,
    `data-y="${JSON.stringify(s.y)}"`,
    `data-se="${JSON.stringify(s.se)}"`,
  ];
  return parts.join(" ");
}

function curvePath(s: Series, sx: Scale, sy: Scale): string {
  return s.x
    .map((x, i) => `${i === 0 ? "M" : "L"}${px(sx(x))} ${px(sy(s.y[i]))}`)
    .join("");
}

function bandPath(s: Series, sx: Scale, sy: Scale): string {
  const upper = s.x.map((x, i) => `${i === 0 ? "M" : "L"}${px(sx(x))} ${px(sy(s.y[i] + s.se[i]))}`);
  const lower = [...s.x.keys()]
    .reverse()
    .map((i) => `L${px(sx(s.x[i]))} ${px(sy(s.y[i] - s.se[i]))}`);
  return [...upper, ...lower, "Z"].join("");
}

export function boundDash(kind: string, kinds: string[]): string {
  const i = Math.max(0, kinds.indexOf(kind));
  return BOUND_DASHES[i % BOUND_DASHES.length];
}

function yAxisMax(panel: Panel): number {
  let top = 0;
  for (const s of panel.curves) {
    for (let i = 0; i < s.y.length; i++) top = Math.max(top, s.y[i] + s.se[i]);
  }
  for (const b of panel.bounds) {
    for (const v of b.y) if (v <= BOUND_AXIS_CAP) top = Math.max(top, v);
  }
  return top > 0 ? top : 0.05;
}

/**
 * One x/y panel as an SVG group at (ox, oy): axes, ±1 SE bands, one
 * polyline per curve, dashed bound overlays, point markers. Curves are
 * clipped to the plot rectangle; the data attributes carry the exact
 * unclipped values.
 */
export function renderPanel(panel: Panel, ox: number, oy: number, colorOf: (key: string) => string): string {
  const plotW = PANEL_WIDTH - MARGIN.left - MARGIN.right;
  const plotH = PANEL_HEIGHT - MARGIN.top - MARGIN.bottom;

  const xs = panel.curves.flatMap((s) => s.x);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const [yLo, yHi] = nice(0, yAxisMax(panel), 6);
  const sx = linearScale(xLo, xHi, MARGIN.left, MARGIN.left + plotW);
  const sy = linearScale(yLo, yHi, MARGIN.top + plotH, MARGIN.top);

  const clipId = `plot${panel.index}`;
  const out: string[] = [];
  out.push(`<g transform="translate(${px(ox)},${px(oy)})">`);
  out.push(
    `<clipPath id="${clipId}"><rect x="${px(MARGIN.left)}" y="${px(MARGIN.top)}" width="${px(plotW)}" height="${px(plotH)}"/></clipPath>`,
  );
  out.push(
    `<rect x="${px(MARGIN.left)}" y="${px(MARGIN.top)}" width="${px(plotW)}" height="${px(plotH)}" fill="none" stroke="#444"/>`,
  );

  for (const t of ticks(xLo, xHi, 6)) {
    const x = sx(t);
    out.push(`<line x1="${px(x)}" y1="${px(MARGIN.top + plotH)}" x2="${px(x)}" y2="${px(MARGIN.top + plotH + 5)}" stroke="#444"/>`);
    out.push(`<text x="${px(x)}" y="${px(MARGIN.top + plotH + 18)}" text-anchor="middle" font-size="11">${t}</text>`);
  }
  for (const t of ticks(yLo, yHi, 6)) {
    const y = sy(t);
    out.push(`<line x1="${px(MARGIN.left - 5)}" y1="${px(y)}" x2="${px(MARGIN.left)}" y2="${px(y)}" stroke="#444"/>`);
    out.push(`<text x="${px(MARGIN.left - 8)}" y="${px(y + 4)}" text-anchor="end" font-size="11">${t}</text>`);
  }
  out.push(
    `<text x="${px(MARGIN.left + plotW / 2)}" y="${px(PANEL_HEIGHT - 8)}" text-anchor="middle" font-size="12">${escapeXml(panel.xLabel)}</text>`,
  );
  out.push(
    `<text transform="translate(14,${px(MARGIN.top + plotH / 2)}) rotate(-90)" text-anchor="middle" font-size="12">${escapeXml(panel.yLabel)}</text>`,
  );

  const metric = ` data-metric="${panel.metric}"`;
  out.push(`<g clip-path="url(#${clipId})">`);
  for (const s of panel.curves) {
    const color = colorOf(s.key);
    out.push(`<path class="band" ${dataAttrs(s)}${metric} d="${bandPath(s, sx, sy)}" fill="${color}" fill-opacity="0.15" stroke="none"/>`);
  }
  const kinds = [...new Set(panel.bounds.map((b) => b.boundKind))].sort();
  for (const b of panel.bounds) {
    out.push(
      `<path class="bound" ${dataAttrs(b)}${metric} data-bound-kind="${escapeXml(b.boundKind)}" d="${curvePath(b, sx, sy)}" fill="none" stroke="${colorOf(`${b.attack}/${b.defense}`)}" stroke-width="1.2" stroke-dasharray="${boundDash(b.boundKind, kinds)}"/>`,
    );
  }
  for (const s of panel.curves) {
    const color = colorOf(s.key);
    out.push(`<path class="curve" ${dataAttrs(s)}${metric} d="${curvePath(s, sx, sy)}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    for (let i = 0; i < s.x.length; i++) {
      out.push(`<circle cx="${px(sx(s.x[i]))}" cy="${px(sy(s.y[i]))}" r="2.5" fill="${color}"/>`);
    }
  }
  out.push("</g>");
  out.push("</g>");
  return out.join("\n");
}
