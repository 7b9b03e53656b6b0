/** Pull the data series back out of a rendered svg's path attributes. */
export interface ExtractedPath {
  cls: string;
  metric: string;
  attack: string;
  defense: string;
  boundKind?: string;
  x: number[];
  y: number[];
  se: number[];
}

export function extractPaths(svg: string): ExtractedPath[] {
  const out: ExtractedPath[] = [];
  for (const tag of svg.match(/<path [^>]*>/g) ?? []) {
    const attrs = new Map<string, string>();
    for (const m of tag.matchAll(/([a-zA-Z-]+)="([^"]*)"/g)) {
      attrs.set(m[1], m[2]);
    }
    if (!attrs.has("data-x")) continue;
    out.push({
      cls: attrs.get("class") ?? "",
      metric: attrs.get("data-metric") ?? "",
      attack: attrs.get("data-attack") ?? "",
      defense: attrs.get("data-defense") ?? "",
      boundKind: attrs.get("data-bound-kind"),
      x: JSON.parse(attrs.get("data-x") ?? "[]"),
      y: JSON.parse(attrs.get("data-y") ?? "[]"),
      se: JSON.parse(attrs.get("data-se") ?? "[]"),
    });
  }
  return out;
}

export function curves(svg: string, metric: string): ExtractedPath[] {
  return extractPaths(svg).filter((p) => p.cls === "curve" && p.metric === metric);
}

export function boundOverlays(svg: string): ExtractedPath[] {
  return extractPaths(svg).filter((p) => p.cls === "bound");
}
