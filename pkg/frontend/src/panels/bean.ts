/** Panel (f): bean plots per metric, all models vs current selection.
 *
 * The service ships raw scores; the silhouette here is a simple binned
 * outline, with tick marks for the all-model mean and the selection mean.
 */

import { ALL_METRICS, type BeanSeries, type MetricName } from "../types.js";
import { el, esc, fmt, svgRoot } from "../svg.js";
import { extent, linearScale } from "../geometry.js";

const BINS = 24;

export interface BeanMetricView {
  metric: MetricName;
  all: number[];
  selected: number[];
  meanAll: number;
  meanSelected: number | null;
}

export interface BeanView {
  metrics: BeanMetricView[];
  svg: string;
}

function silhouette(values: readonly number[], domain: [number, number],
                    x0: number, x1: number, baseline: number,
                    maxHalf: number, up: boolean): string {
  if (values.length === 0) return "";
  const counts = new Array<number>(BINS).fill(0);
  const [lo, hi] = domain;
  const span = hi - lo || 1;
  for (const v of values) {
    const b = Math.min(BINS - 1, Math.max(0, Math.floor(((v - lo) / span) * BINS)));
    counts[b]! += 1;
  }
  const peak = Math.max(...counts);
  const sx = linearScale([0, BINS], [x0, x1]);
  const dir = up ? -1 : 1;
  let d = `M${sx(0)},${baseline}`;
  counts.forEach((c, b) => {
    const h = peak > 0 ? (c / peak) * maxHalf : 0;
    d += ` L${sx(b)},${baseline + dir * h} L${sx(b + 1)},${baseline + dir * h}`;
  });
  d += ` L${sx(BINS)},${baseline} Z`;
  return d;
}

export function renderBeanPanel(bean: Record<MetricName, BeanSeries>,
                                width = 460, rowHeight = 46): BeanView {
  const metrics: BeanMetricView[] = [];
  const parts: string[] = [];
  const x0 = 74;
  const x1 = width - 16;

  ALL_METRICS.forEach((metric, row) => {
    const series = bean[metric];
    if (!series) return;
    const baseline = row * rowHeight + rowHeight / 2;
    const domain = extent([...series.all, ...series.selected,
                           series.mean_all, series.mean_selected ?? series.mean_all]);
    const sx = linearScale(domain, [x0, x1]);

    parts.push(el("text", { x: 4, y: baseline + 3, "font-size": 10 }, esc(metric)));
    const allPath = silhouette(series.all, domain, x0, x1, baseline, rowHeight * 0.4, true);
    if (allPath) {
      parts.push(el("path", { d: allPath, fill: "#9ecae1", "fill-opacity": 0.8 }));
    }
    const selPath = silhouette(series.selected, domain, x0, x1, baseline,
                               rowHeight * 0.4, false);
    if (selPath) {
      parts.push(el("path", { d: selPath, fill: "#31a354", "fill-opacity": 0.8 }));
    }
    // mean ticks: all models (dark) vs selection (green)
    parts.push(el("line", {
      x1: sx(series.mean_all), x2: sx(series.mean_all),
      y1: baseline - rowHeight * 0.45, y2: baseline,
      stroke: "#222", "stroke-width": 1.5, class: "mean-all",
    }, el("title", {}, esc(`all mean ${fmt(series.mean_all)}`))));
    if (series.mean_selected !== null) {
      parts.push(el("line", {
        x1: sx(series.mean_selected), x2: sx(series.mean_selected),
        y1: baseline, y2: baseline + rowHeight * 0.45,
        stroke: "#0b6623", "stroke-width": 1.5, class: "mean-selected",
      }, el("title", {}, esc(`selection mean ${fmt(series.mean_selected)}`))));
    }

    metrics.push({
      metric,
      all: [...series.all],
      selected: [...series.selected],
      meanAll: series.mean_all,
      meanSelected: series.mean_selected,
    });
  });

  const height = rowHeight * ALL_METRICS.length;
  return { metrics, svg: svgRoot(width, height, ...parts) };
}
