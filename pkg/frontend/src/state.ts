/** Local UI state and the payload builders that feed the service.
 *
 * Panel rendering is a pure function of (session snapshot, this state), so
 * reloading against the same session reproduces the same views.
 */

import {
  ALGORITHMS,
  METRIC_GROUPS,
  type Algorithm,
  type MetricName,
  type SessionStatus,
  type StageOrigin,
} from "./types.js";

export interface StageSliders {
  crossover: Record<Algorithm, number>;
  mutation: Record<Algorithm, number>;
}

export interface PanelState {
  metricGroup: string;
  metrics: MetricName[];
  n: number;
  k: number;
  seed: number;
  projectionMethod: "mds" | "tsne";
  /** ids currently lassoed in the projection; always a subset of the display */
  lasso: string[];
  bucket: string[];
  sliders: StageSliders;
  busy: boolean;
}

export function sliderMax(n: number): number {
  return Math.floor(n / 2);
}

/** Slider values live in [0, n/2]; out-of-range requests are clamped. */
export function clampSlider(value: number, n: number): number {
  const v = Math.round(value);
  if (!Number.isFinite(v) || v < 0) return 0;
  return Math.min(v, sliderMax(n));
}

function defaultSliders(n: number): StageSliders {
  const half = sliderMax(n);
  const fill = () =>
    Object.fromEntries(ALGORITHMS.map((a) => [a, half])) as Record<Algorithm, number>;
  return { crossover: fill(), mutation: fill() };
}

export function initialState(status: SessionStatus): PanelState {
  return {
    metricGroup: status.settings.metric_group,
    metrics: [...status.settings.selected],
    n: status.settings.n,
    k: status.settings.k,
    seed: status.settings.seed,
    projectionMethod: "mds",
    lasso: [],
    bucket: [...status.bucket],
    sliders: defaultSliders(status.settings.n),
    busy: status.job.state === "running",
  };
}

export function setSlider(state: PanelState, origin: StageOrigin,
                          algorithm: Algorithm, value: number): PanelState {
  const sliders: StageSliders = {
    crossover: { ...state.sliders.crossover },
    mutation: { ...state.sliders.mutation },
  };
  sliders[origin][algorithm] = clampSlider(value, state.n);
  return { ...state, sliders };
}

export function toggleMetric(state: PanelState, metric: MetricName): PanelState {
  const group = METRIC_GROUPS[state.metricGroup] ?? [];
  if (!group.includes(metric)) return state; // cross-group picks are rejected
  const metrics = state.metrics.includes(metric)
    ? state.metrics.filter((m) => m !== metric)
    : [...state.metrics, metric];
  return { ...state, metrics };
}

export function setLasso(state: PanelState, ids: readonly string[],
                         displayed: readonly string[]): PanelState {
  const shown = new Set(displayed);
  return { ...state, lasso: ids.filter((i) => shown.has(i)) };
}

// --- request payloads ---

export interface StagePayload {
  crossover: Record<Algorithm, number>;
  mutation: Record<Algorithm, number>;
}

/** The stage request carries the slider values verbatim (already clamped). */
export function buildStagePayload(state: PanelState): StagePayload {
  return {
    crossover: { ...state.sliders.crossover },
    mutation: { ...state.sliders.mutation },
  };
}

export function buildBucketAdd(ids: readonly string[]): { add: string[] } {
  return { add: [...ids] };
}

export function buildBucketRemove(ids: readonly string[]): { remove: string[] } {
  return { remove: [...ids] };
}

export function buildSettingsPayload(state: PanelState): {
  metric_group: string; metrics: MetricName[]; n: number; k: number; seed: number;
} {
  return {
    metric_group: state.metricGroup,
    metrics: [...state.metrics],
    n: state.n,
    k: state.k,
    seed: state.seed,
  };
}
