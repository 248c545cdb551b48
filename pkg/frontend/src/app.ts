/** Imperative shell: fetches a full snapshot, renders the eight panels into
 * the page, polls running jobs and forwards user actions to the service.
 * All layout decisions live in the pure panel renderers.
 */

import { EvovoteClient, ServiceError } from "./api.js";
import {
  buildBucketAdd,
  buildSettingsPayload,
  buildStagePayload,
  initialState,
  setLasso,
  setSlider,
  toggleMetric,
  type PanelState,
} from "./state.js";
import { lassoSelect, renderPanels, type PanelViews } from "./panels/index.js";
import type { Algorithm, MetricName, SessionSnapshot, StageOrigin } from "./types.js";
import type { Point } from "./geometry.js";

const POLL_MS = 1500;
const TSNE_LIMIT = 120; // cap the detail view so iterations stay interactive

export class App {
  private state!: PanelState;
  private snapshot!: SessionSnapshot;
  private lassoPath: Point[] = [];
  private views!: PanelViews;

  constructor(private readonly client: EvovoteClient,
              private readonly sessionId: string,
              private readonly root: Document = document) {}

  async start(): Promise<void> {
    await this.refresh();
    this.poll();
  }

  /** Pulls every panel input in one sweep; cheap relative to training jobs. */
  private async fetchSnapshot(): Promise<SessionSnapshot> {
    const status = await this.client.status(this.sessionId);
    const { models } = await this.client.models(this.sessionId);
    const searched = models.length >= 3;
    const mds = searched
      ? await this.client.projection(this.sessionId, { method: "mds" })
      : { method: "mds", model_ids: [], coords: [], diagnostic: 0 };
    const detailIds = models
      .slice()
      .sort((a, b) => b.overall - a.overall)
      .slice(0, TSNE_LIMIT)
      .map((m) => m.id);
    const tsne = searched
      ? await this.client.projection(this.sessionId, {
          method: "tsne", model_ids: detailIds, perplexity: 10, iterations: 250,
        })
      : { method: "tsne", model_ids: [], coords: [], diagnostic: 0 };
    const grid = searched
      ? await this.client.grid(this.sessionId, status.bucket)
      : { cell_count: 0, clustered: false, assignment: [], cells: [] };
    const panels = searched
      ? await this.client.panels(this.sessionId, status.bucket)
      : { beeswarm: {} as SessionSnapshot["panels"]["beeswarm"],
          bean: {} as SessionSnapshot["panels"]["bean"] };
    const stages = [];
    for (let i = 1; i <= status.stages; i++) {
      stages.push(await this.client.stage(this.sessionId, i));
    }
    return { status, models, projections: { mds, tsne }, grid, panels,
             stages, ensemble: null };
  }

  private async refresh(): Promise<void> {
    const ensemble = this.snapshot?.ensemble ?? null;
    this.snapshot = { ...(await this.fetchSnapshot()), ensemble };
    if (!this.state) this.state = initialState(this.snapshot.status);
    this.state = {
      ...this.state,
      bucket: [...this.snapshot.status.bucket],
      busy: this.snapshot.status.job.state === "running",
    };
    this.render();
  }

  private render(): void {
    this.views = renderPanels(this.snapshot, this.state);
    const mounts: [string, string][] = [
      ["panel-metrics", this.views.metrics.html],
      ["panel-sankey", this.views.sankey.svg],
      ["panel-beeswarm", this.views.beeswarm.svg],
      ["panel-projection-mds", this.views.projectionMds.svg],
      ["panel-projection-tsne", this.views.projectionTsne.svg],
      ["panel-bean", this.views.bean.svg],
      ["panel-grid", this.views.grid.svg],
      ["panel-perclass", this.views.perClass.svg],
    ];
    for (const [id, content] of mounts) {
      const node = this.root.getElementById(id);
      if (node) node.innerHTML = content;
    }
    this.wire();
    const banner = this.root.getElementById("job-banner");
    if (banner) {
      const job = this.snapshot.status.job;
      banner.textContent = job.state === "running"
        ? `${job.kind} running: ${(job.progress * 100).toFixed(0)}%`
        : job.state === "failed" ? `job failed: ${job.error}` : "";
    }
  }

  private wire(): void {
    const metricsRoot = this.root.getElementById("panel-metrics");
    metricsRoot?.querySelectorAll("input[data-metric]").forEach((node) => {
      node.addEventListener("change", () => {
        this.state = toggleMetric(this.state,
                                  node.getAttribute("data-metric") as MetricName);
        void this.pushSettings();
      });
    });
    metricsRoot?.querySelector("button[data-role=search]")
      ?.addEventListener("click", () => void this.guard(async () => {
        await this.client.startSearch(this.sessionId);
        await this.refresh();
      }));

    const mds = this.root.getElementById("panel-projection-mds");
    mds?.addEventListener("click", (ev) => this.extendLasso(ev as MouseEvent, mds));
    mds?.addEventListener("dblclick", () => this.closeLasso());

    this.root.getElementById("stage-launch")
      ?.addEventListener("click", () => void this.guard(async () => {
        await this.client.launchStage(this.sessionId, buildStagePayload(this.state));
        await this.refresh();
      }));
    this.root.getElementById("bucket-add")
      ?.addEventListener("click", () => void this.guard(async () => {
        await this.client.updateBucket(this.sessionId, buildBucketAdd(this.state.lasso));
        await this.refresh();
      }));
    this.root.querySelectorAll("input[data-slider]").forEach((node) => {
      node.addEventListener("change", () => {
        const origin = node.getAttribute("data-slider") as StageOrigin;
        const algo = node.getAttribute("data-algorithm") as Algorithm;
        const value = Number((node as HTMLInputElement).value);
        this.state = setSlider(this.state, origin, algo, value);
        (node as HTMLInputElement).value =
          String(this.state.sliders[origin][algo]);
      });
    });
    this.root.getElementById("ensemble-evaluate")
      ?.addEventListener("click", () => void this.guard(async () => {
        this.snapshot.ensemble =
          await this.client.evaluateEnsemble(this.sessionId, this.state.bucket);
        this.render();
      }));
  }

  private extendLasso(ev: MouseEvent, mount: HTMLElement): void {
    const rect = mount.getBoundingClientRect();
    this.lassoPath.push([ev.clientX - rect.left, ev.clientY - rect.top]);
  }

  private closeLasso(): void {
    if (this.lassoPath.length >= 3) {
      const ids = lassoSelect(this.views.projectionMds, this.lassoPath);
      this.state = setLasso(this.state, ids,
                            this.snapshot.projections.mds.model_ids);
      this.render();
    }
    this.lassoPath = [];
  }

  private async pushSettings(): Promise<void> {
    await this.guard(async () => {
      await this.client.updateSettings(this.sessionId,
                                       buildSettingsPayload(this.state));
      await this.refresh();
    });
  }

  /** Mutations are disabled while a job runs; surface errors as banners. */
  private async guard(action: () => Promise<void>): Promise<void> {
    if (this.state.busy) return;
    try {
      await action();
    } catch (err) {
      const banner = this.root.getElementById("job-banner");
      if (banner) {
        banner.textContent = err instanceof ServiceError
          ? `${err.kind}: ${err.message}`
          : String(err);
      }
    }
  }

  private poll(): void {
    setTimeout(async () => {
      try {
        if (this.snapshot.status.job.state === "running") await this.refresh();
        else this.state = { ...this.state, busy: false };
      } finally {
        this.poll();
      }
    }, POLL_MS);
  }
}
