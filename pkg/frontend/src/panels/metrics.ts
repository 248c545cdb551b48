/** Panel (a): dataset summary, metric-group checkboxes and n/k controls. */

import { ALL_METRICS, METRIC_GROUPS, type MetricName, type SessionStatus } from "../types.js";
import type { PanelState } from "../state.js";
import { el, esc } from "../svg.js";

export interface MetricItem {
  metric: MetricName;
  inGroup: boolean;
  checked: boolean;
}

export interface MetricsView {
  group: string;
  items: MetricItem[];
  n: number;
  k: number;
  classCounts: number[];
  html: string;
}

export function renderMetricsPanel(status: SessionStatus, state: PanelState): MetricsView {
  const group = METRIC_GROUPS[state.metricGroup] ?? [];
  const items: MetricItem[] = ALL_METRICS.map((metric) => ({
    metric,
    inGroup: group.includes(metric),
    checked: state.metrics.includes(metric),
  }));

  const boxes = items.map((it) =>
    el("label", { class: it.inGroup ? "metric" : "metric off" },
       el("input", {
         type: "checkbox",
         "data-metric": it.metric,
         checked: it.checked,
         disabled: !it.inGroup || state.busy,
       }),
       esc(it.metric)),
  ).join("");

  const counts = status.dataset.class_counts;
  const html = [
    el("div", { class: "dataset-line" },
       esc(`${status.dataset.instances} instances, ${status.dataset.features} features, `
           + `classes ${status.dataset.class_names.join("/")} (${counts.join(":")})`)),
    el("div", { class: "group-line" },
       el("select", { "data-role": "metric-group", disabled: state.busy },
          ...Object.keys(METRIC_GROUPS).map((g) =>
            el("option", { value: g, selected: g === state.metricGroup }, esc(g)))),
       boxes),
    el("div", { class: "budget-line" },
       el("label", {}, "n ",
          el("input", { type: "number", "data-role": "n", value: state.n, min: 50, max: 300 })),
       el("label", {}, "k ",
          el("input", { type: "number", "data-role": "k", value: state.k, min: 2, max: 20 })),
       el("label", {}, "seed ",
          el("input", { type: "number", "data-role": "seed", value: state.seed })),
       el("button", { "data-role": "search", disabled: state.busy }, "search")),
  ].join("");

  return { group: state.metricGroup, items, n: state.n, k: state.k,
           classCounts: [...counts], html };
}
