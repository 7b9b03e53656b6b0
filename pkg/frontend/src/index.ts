export { parseResultsCsv, SchemaError, RESULT_COLUMNS } from "./schema.js";
export type { ResultRow } from "./schema.js";
export { fdrSeries, powerSeries, boundSeries } from "./series.js";
export type { Series, BoundSeries } from "./series.js";
export { renderFigure, FIGURE_IDS } from "./figures.js";
export type { FigureId } from "./figures.js";
