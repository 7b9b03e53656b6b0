import type { ResultRow } from "./schema.js";

/** One plotted curve: grid values with a mean and its standard error. */
export interface Series {
  key: string;
  attack: string;
  defense: string;
  x: number[];
  y: number[];
  se: number[];
}

export interface BoundSeries extends Series {
  boundKind: string;
}

function curveKey(row: ResultRow): string {
  return `${row.attack}/${row.defense}`;
}

function sortByX(s: Series): Series {
  const order = s.x.map((_, i) => i).sort((a, b) => s.x[a] - s.x[b]);
  return {
    ...s,
    x: order.map((i) => s.x[i]),
    y: order.map((i) => s.y[i]),
    se: order.map((i) => s.se[i]),
  };
}

function groupCurves(
  rows: ResultRow[],
  pick: (row: ResultRow) => { y: number; se: number },
): Series[] {
  // First-appearance order keeps rendering a pure function of the file.
  const byKey = new Map<string, Series & { seen: Set<number> }>();
  for (const row of rows) {
    const key = curveKey(row);
    let series = byKey.get(key);
    if (!series) {
      series = { key, attack: row.attack, defense: row.defense, x: [], y: [], se: [], seen: new Set() };
      byKey.set(key, series);
    }
    // Bound rows repeat the same grid point; keep the first occurrence.
    if (series.seen.has(row.axisValue)) continue;
    series.seen.add(row.axisValue);
    const { y, se } = pick(row);
    series.x.push(row.axisValue);
    series.y.push(y);
    series.se.push(se);
  }
  return [...byKey.values()].map(({ seen, ...s }) => sortByX(s));
}

export function fdrSeries(rows: ResultRow[]): Series[] {
  return groupCurves(rows, (r) => ({ y: r.meanFdr, se: r.seFdr }));
}

export function powerSeries(rows: ResultRow[]): Series[] {
  return groupCurves(rows, (r) => ({ y: r.meanPower, se: r.sePower }));
}

/** Bound estimates, one dashed overlay per (attack, defense, bound kind). */
export function boundSeries(rows: ResultRow[]): BoundSeries[] {
  const byKey = new Map<string, BoundSeries>();
  for (const row of rows) {
    if (row.boundKind === "" || row.boundValue === null) continue;
    const key = `${curveKey(row)}/${row.boundKind}`;
    let series = byKey.get(key);
    if (!series) {
      series = {
        key,
        attack: row.attack,
        defense: row.defense,
        boundKind: row.boundKind,
        x: [],
        y: [],
        se: [],
      };
      byKey.set(key, series);
    }
    series.x.push(row.axisValue);
    series.y.push(row.boundValue);
    series.se.push(row.boundSe ?? 0);
  }
  return [...byKey.values()].map((s) => sortByX(s) as BoundSeries);
}
