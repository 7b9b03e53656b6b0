import { parseResultsCsv } from "./schema.js";
import { boundSeries, fdrSeries, powerSeries } from "./series.js";
import type { BoundSeries, Series } from "./series.js";
import { PALETTE, PANEL_HEIGHT, PANEL_WIDTH, boundDash, escapeXml, renderPanel } from "./svg.js";

export const FIGURE_IDS = ["fig1", "fig2", "fig3", "fig4"] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

interface FigureSpec {
  title: string;
  xLabel: string;
  panels: ("fdr" | "power")[];
}

const FIGURES: Record<FigureId, FigureSpec> = {
  fig1: {
    title: "Label-aware vs classifier attack, one captured node",
    xLabel: "true null count n0",
    panels: ["fdr"],
  },
  fig2: {
    title: "Zero-value counter-attacks against the classifier attack",
    xLabel: "true null count n0",
    panels: ["fdr"],
  },
  fig3: {
    title: "Rescaling vs shuffling attack",
    xLabel: "true null count n0",
    panels: ["fdr"],
  },
  fig4: {
    title: "Attacks on a 20-node network by captured fraction",
    xLabel: "captured node fraction",
    panels: ["fdr", "power"],
  },
};

const TITLE_BAND = 32;
const PANEL_GAP = 18;
const LEGEND_ROW = 18;

function legendRow(label: string, color: string, dash: string | null, y: number): string {
  const stroke = dash ? ` stroke-dasharray="${dash}"` : "";
  return (
    `<line x1="58" y1="${y}" x2="94" y2="${y}" stroke="${color}" stroke-width="1.8"${stroke}/>` +
    `<text x="102" y="${y + 4}" font-size="12">${escapeXml(label)}</text>`
  );
}

/**
 * Render one experiment figure from a results CSV.
 *
 * Pure string-to-string: the same csv bytes always produce the same svg.
 * Curves are keyed by the attack and defense columns; rows carrying a
 * bound estimate become dashed overlays on the FDR panel.
 */
export function renderFigure(csvText: string, figureId: FigureId): string {
  const spec = FIGURES[figureId];
  if (!spec) {
    const known = FIGURE_IDS.join(", ");
    throw new Error(`unknown figure '${figureId}'; expected one of ${known}`);
  }
  const rows = parseResultsCsv(csvText);
  const fdr = fdrSeries(rows);
  const power = powerSeries(rows);
  const bounds = boundSeries(rows);

  const colors = new Map<string, string>(fdr.map((s, i) => [s.key, PALETTE[i % PALETTE.length]]));
  const colorOf = (key: string) => colors.get(key) ?? "#666";

  const panels = spec.panels.map((metric, index) => ({
    index,
    metric,
    xLabel: spec.xLabel,
    yLabel: metric === "fdr" ? "FDR" : "power",
    curves: metric === "fdr" ? fdr : power,
    bounds: metric === "fdr" ? bounds : [],
  }));

  const legendEntries: string[] = [];
  const kinds = [...new Set(bounds.map((b) => b.boundKind))].sort();
  let ly = TITLE_BAND + PANEL_HEIGHT + 16;
  for (const s of fdr) {
    legendEntries.push(legendRow(s.key, colorOf(s.key), null, ly));
    ly += LEGEND_ROW;
  }
  for (const b of bounds) {
    legendEntries.push(legendRow(b.key, colorOf(`${b.attack}/${b.defense}`), boundDash(b.boundKind, kinds), ly));
    ly += LEGEND_ROW;
  }

  const width = spec.panels.length * PANEL_WIDTH + (spec.panels.length - 1) * PANEL_GAP;
  const height = ly + 8;
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif" data-figure="${figureId}">`,
  );
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  out.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="14" font-weight="bold">${escapeXml(spec.title)}</text>`,
  );
  panels.forEach((panel, i) => {
    out.push(renderPanel(panel, i * (PANEL_WIDTH + PANEL_GAP), TITLE_BAND, colorOf));
  });
  out.push(...legendEntries);
  out.push("</svg>");
  return out.join("\n");
}
