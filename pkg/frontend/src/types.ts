/** Wire types mirroring the evovote service JSON contract. */

export type Algorithm = "KNN" | "LR" | "MLP" | "RF" | "GradB";

export const ALGORITHMS: readonly Algorithm[] = ["KNN", "LR", "MLP", "RF", "GradB"];

export type MetricName =
  | "accuracy"
  | "precision"
  | "recall"
  | "f1"
  | "g_mean"
  | "roc_auc"
  | "log_loss"
  | "mcc";

export const ALL_METRICS: readonly MetricName[] = [
  "accuracy", "precision", "recall", "f1", "g_mean", "roc_auc", "log_loss", "mcc",
];

export const METRIC_GROUPS: Record<string, readonly MetricName[]> = {
  balanced: ["accuracy", "precision", "recall", "f1"],
  imbalanced: ["g_mean", "roc_auc", "log_loss", "mcc"],
};

export type Origin = "random" | "crossover" | "mutation";
export type StageOrigin = "crossover" | "mutation";

export interface JobStatus {
  state: "idle" | "running" | "failed";
  kind: string | null;
  stage: number | null;
  progress: number;
  error: string | null;
}

export interface SessionSettings {
  metric_group: string;
  selected: MetricName[];
  n: number;
  k: number;
  seed: number;
}

export interface SessionStatus {
  id: string;
  settings: SessionSettings;
  dataset: {
    instances: number;
    features: number;
    class_names: string[];
    class_counts: number[];
  };
  models: number;
  failures: number;
  stages: number;
  bucket: string[];
  ensembles: number;
  best: { ordinal: number; overall: number; model_ids: string[] } | null;
  job: JobStatus;
}

export interface ModelRow {
  id: string;
  algorithm: Algorithm;
  params: Record<string, unknown>;
  stage: number;
  origin: Origin;
  metrics: Record<MetricName, number>;
  overall: number;
}

export interface ProjectionDoc {
  method: string;
  model_ids: string[];
  coords: [number, number][];
  diagnostic: number;
}

export interface GridCellDoc {
  cell: number;
  count: number;
  power: Record<Algorithm, number>;
  difference: Record<Algorithm, number>;
  power_all: number;
}

export interface GridDoc {
  cell_count: number;
  clustered: boolean;
  assignment: number[];
  cells: GridCellDoc[];
}

export interface BeeswarmEntry {
  id: string;
  overall: number;
}

export interface BeanSeries {
  all: number[];
  selected: number[];
  mean_all: number;
  mean_selected: number | null;
}

export interface PanelsDoc {
  beeswarm: Record<Algorithm, BeeswarmEntry[]>;
  bean: Record<MetricName, BeanSeries>;
}

export interface PathStatDoc {
  algorithm: Algorithm;
  origin: StageOrigin;
  better: number;
  total: number;
  direction: "over" | "under";
}

export interface StagePlanDoc {
  stage: number;
  crossover: Record<Algorithm, number>;
  mutation: Record<Algorithm, number>;
}

export interface StageDoc {
  plan: StagePlanDoc;
  parent_ids: Record<Algorithm, string[]>;
  child_ids: Record<Algorithm, Record<StageOrigin, string[]>>;
  path_stats: PathStatDoc[];
  failures: Record<string, string>;
}

export interface EnsembleSpecDoc {
  model_ids: string[];
  pooled: Record<MetricName, number>;
  /** keys look like "accuracy/0" and "accuracy/1" */
  per_class: Record<string, number>;
  overall: number;
}

export interface EnsembleEvalDoc {
  spec: EnsembleSpecDoc;
  best: { ordinal: number; spec: EnsembleSpecDoc };
}

/** Everything the eight panels render from; recorded as the test fixture. */
export interface SessionSnapshot {
  status: SessionStatus;
  models: ModelRow[];
  projections: { mds: ProjectionDoc; tsne: ProjectionDoc };
  grid: GridDoc;
  panels: PanelsDoc;
  stages: StageDoc[];
  ensemble: EnsembleEvalDoc | null;
}
