/** Panels (d)/(e): MDS overview and t-SNE detail scatterplots.
 *
 * Points take Viridis colors from overall performance normalized over the
 * displayed models; the lasso highlights its current selection.
 */

import type { Algorithm, ModelRow, ProjectionDoc } from "../types.js";
import { el, esc, fmt, svgRoot } from "../svg.js";
import { extent, linearScale, pointInPolygon, type Point } from "../geometry.js";
import { viridis } from "../color.js";

export interface ScatterPoint {
  id: string;
  algorithm: Algorithm | "?";
  overall: number;
  px: number;
  py: number;
  color: string;
  selected: boolean;
  bucketed: boolean;
}

export interface ProjectionView {
  method: string;
  diagnostic: number;
  points: ScatterPoint[];
  svg: string;
}

const PAD = 16;

export function renderProjectionPanel(proj: ProjectionDoc,
                                      models: ReadonlyMap<string, ModelRow>,
                                      lasso: readonly string[],
                                      bucket: readonly string[],
                                      size = 340): ProjectionView {
  const xs = proj.coords.map((c) => c[0]);
  const ys = proj.coords.map((c) => c[1]);
  const sx = linearScale(extent(xs), [PAD, size - PAD]);
  const sy = linearScale(extent(ys), [size - PAD, PAD]);

  const overalls = proj.model_ids.map((id) => models.get(id)?.overall ?? 0);
  const [lo, hi] = extent(overalls);
  const span = hi - lo;

  const inLasso = new Set(lasso);
  const inBucket = new Set(bucket);
  const points: ScatterPoint[] = proj.model_ids.map((id, i) => {
    const m = models.get(id);
    const overall = m?.overall ?? 0;
    const t = span > 0 ? (overall - lo) / span : 0.5;
    return {
      id,
      algorithm: m?.algorithm ?? "?",
      overall,
      px: sx(proj.coords[i]![0]),
      py: sy(proj.coords[i]![1]),
      color: viridis(t),
      selected: inLasso.has(id),
      bucketed: inBucket.has(id),
    };
  });

  const svg = svgRoot(size, size,
    el("text", { x: 6, y: 12, "font-size": 10, fill: "#555" },
       esc(`${proj.method} (${fmt(proj.diagnostic, 4)})`)),
    ...points.map((p) =>
      el("circle", {
        cx: p.px, cy: p.py, r: p.bucketed ? 5 : 3.5,
        fill: p.color,
        stroke: p.selected ? "#e4572e" : p.bucketed ? "#222" : undefined,
        "stroke-width": p.selected || p.bucketed ? 1.5 : undefined,
        "data-id": p.id,
        class: "proj-point",
      }, el("title", {}, esc(`${p.id} ${fmt(p.overall)}`)))),
  );

  return { method: proj.method, diagnostic: proj.diagnostic, points, svg };
}

/** Ids of displayed points inside the lasso polygon (pixel space). */
export function lassoSelect(view: ProjectionView, polygon: readonly Point[]): string[] {
  return view.points
    .filter((p) => pointInPolygon([p.px, p.py], polygon))
    .map((p) => p.id);
}
