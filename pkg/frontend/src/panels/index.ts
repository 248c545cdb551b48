/** The eight coordinated panels as one pure function of
 * (session snapshot, local UI state). */

import type { ModelRow, SessionSnapshot } from "../types.js";
import type { PanelState } from "../state.js";
import { renderMetricsPanel, type MetricsView } from "./metrics.js";
import { renderSankeyPanel, type SankeyView } from "./sankey.js";
import { renderBeeswarmPanel, type BeeswarmView } from "./beeswarm.js";
import { renderProjectionPanel, type ProjectionView } from "./projection.js";
import { renderBeanPanel, type BeanView } from "./bean.js";
import { renderGridPanel, type GridView } from "./grid.js";
import { renderPerClassPanel, type PerClassView } from "./perclass.js";

export interface PanelViews {
  metrics: MetricsView;        // (a)
  sankey: SankeyView;          // (b)
  beeswarm: BeeswarmView;      // (c)
  projectionMds: ProjectionView;   // (d)
  projectionTsne: ProjectionView;  // (e)
  bean: BeanView;              // (f)
  grid: GridView;              // (g)
  perClass: PerClassView;      // (h)
}

export function modelIndex(models: readonly ModelRow[]): Map<string, ModelRow> {
  return new Map(models.map((m) => [m.id, m]));
}

export function renderPanels(snapshot: SessionSnapshot, state: PanelState): PanelViews {
  const byId = modelIndex(snapshot.models);
  const selectionActive = state.bucket.length > 0;
  return {
    metrics: renderMetricsPanel(snapshot.status, state),
    sankey: renderSankeyPanel(snapshot.stages),
    beeswarm: renderBeeswarmPanel(snapshot.panels.beeswarm),
    projectionMds: renderProjectionPanel(snapshot.projections.mds, byId,
                                         state.lasso, state.bucket),
    projectionTsne: renderProjectionPanel(snapshot.projections.tsne, byId,
                                          state.lasso, state.bucket),
    bean: renderBeanPanel(snapshot.panels.bean),
    grid: renderGridPanel(snapshot.grid, selectionActive),
    perClass: renderPerClassPanel(snapshot.ensemble),
  };
}

export { lassoSelect } from "./projection.js";
export { MIN_LINK_WIDTH } from "./sankey.js";
export { POINT_RADIUS } from "./beeswarm.js";
export { ACTIVE_COLOR, BEST_COLOR } from "./perclass.js";
