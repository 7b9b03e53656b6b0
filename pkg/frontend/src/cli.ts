#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { FIGURE_IDS, renderFigure } from "./figures.js";
import type { FigureId } from "./figures.js";

const USAGE = `usage: byzfdr-figures render <results.csv> --figure <fig1|fig2|fig3|fig4> [--out <file.svg>]

Reads a simulator results CSV and writes one experiment figure as SVG.
The output path defaults to <figure>.svg in the working directory.`;

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        figure: { type: "string" },
        out: { type: "string" },
      },
    });
  } catch (err) {
    console.error(`byzfdr-figures: error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }

  const [command, csvPath] = parsed.positionals;
  if (command !== "render" || !csvPath) {
    console.error(USAGE);
    return 2;
  }
  const figure = parsed.values.figure;
  if (!figure) {
    console.error("byzfdr-figures: error: --figure is required");
    console.error(USAGE);
    return 2;
  }
  if (!(FIGURE_IDS as readonly string[]).includes(figure)) {
    console.error(`byzfdr-figures: error: unknown figure '${figure}'; expected one of ${FIGURE_IDS.join(", ")}`);
    return 1;
  }
  const outPath = parsed.values.out ?? `${figure}.svg`;

  let csvText: string;
  try {
    csvText = readFileSync(csvPath, "utf8");
  } catch (err) {
    console.error(`byzfdr-figures: error: ${(err as Error).message}`);
    return 1;
  }

  // Render before touching the output path: a bad csv must not leave a file.
  let svg: string;
  try {
    svg = renderFigure(csvText, figure as FigureId);
  } catch (err) {
    console.error(`byzfdr-figures: error: ${(err as Error).message}`);
    return 1;
  }

  writeFileSync(outPath, svg + "\n", "utf8");
  console.log(`wrote ${outPath}`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
