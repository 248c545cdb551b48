/** Panel (h): mirrored per-class metric bars for the ensembles.
 * Blue bars show the active (last evaluated) ensemble, red the best one;
 * class 0 extends left of the axis, class 1 right.
 */

import { ALL_METRICS, type EnsembleEvalDoc, type MetricName } from "../types.js";
import { el, esc, fmt, svgRoot } from "../svg.js";

export const ACTIVE_COLOR = "#1f77b4";
export const BEST_COLOR = "#d62728";

export interface PerClassRow {
  metric: MetricName;
  activeClass0: number;
  activeClass1: number;
  bestClass0: number;
  bestClass1: number;
}

export interface PerClassView {
  rows: PerClassRow[];
  activeOverall: number | null;
  bestOverall: number | null;
  svg: string;
}

export function renderPerClassPanel(ensemble: EnsembleEvalDoc | null,
                                    width = 460, rowHeight = 34): PerClassView {
  if (!ensemble) {
    const svg = svgRoot(width, 40,
      el("text", { x: 8, y: 22, "font-size": 11, fill: "#777" },
         "no ensemble evaluated yet"));
    return { rows: [], activeOverall: null, bestOverall: null, svg };
  }

  const active = ensemble.spec;
  const best = ensemble.best.spec;
  const rows: PerClassRow[] = ALL_METRICS.map((metric) => ({
    metric,
    activeClass0: active.per_class[`${metric}/0`] ?? 0,
    activeClass1: active.per_class[`${metric}/1`] ?? 0,
    bestClass0: best.per_class[`${metric}/0`] ?? 0,
    bestClass1: best.per_class[`${metric}/1`] ?? 0,
  }));

  const mid = width / 2 + 18;
  const half = width / 2 - 80;
  const top = 20;
  const scaleMax = Math.max(1, ...rows.flatMap((r) =>
    [r.activeClass0, r.activeClass1, r.bestClass0, r.bestClass1]));

  const parts: string[] = [
    el("text", { x: 6, y: 12, "font-size": 10, fill: ACTIVE_COLOR },
       esc(`active ${fmt(active.overall)} [${active.model_ids.join(" ")}]`)),
    el("text", { x: width / 2 + 40, y: 12, "font-size": 10, fill: BEST_COLOR },
       esc(`best ${fmt(best.overall)} (#${ensemble.best.ordinal})`)),
    el("line", { x1: mid, x2: mid, y1: top, y2: top + rows.length * rowHeight,
                 stroke: "#999" }),
  ];

  rows.forEach((r, i) => {
    const y = top + i * rowHeight;
    const bar = (value: number, side: -1 | 1, color: string, offset: number) => {
      const w = (value / scaleMax) * half;
      parts.push(el("rect", {
        x: side < 0 ? mid - w : mid,
        y: y + offset,
        width: w,
        height: 9,
        fill: color,
        "fill-opacity": 0.85,
      }, el("title", {}, esc(`${r.metric}/${side < 0 ? 0 : 1} ${fmt(value)}`))));
    };
    bar(r.activeClass0, -1, ACTIVE_COLOR, 4);
    bar(r.activeClass1, 1, ACTIVE_COLOR, 4);
    bar(r.bestClass0, -1, BEST_COLOR, 15);
    bar(r.bestClass1, 1, BEST_COLOR, 15);
    parts.push(el("text", { x: 4, y: y + 16, "font-size": 9 }, esc(r.metric)));
  });

  return {
    rows,
    activeOverall: active.overall,
    bestOverall: best.overall,
    svg: svgRoot(width, top + rows.length * rowHeight + 8, ...parts),
  };
}
