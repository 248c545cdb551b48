import { readFileSync } from "node:fs";
import { afterEach, describe, expect, it, vi } from "vitest";

import { EvovoteClient, ServiceError } from "../src/api.js";
import {
  buildBucketAdd,
  buildBucketRemove,
  buildSettingsPayload,
  buildStagePayload,
  clampSlider,
  initialState,
  setLasso,
  setSlider,
  sliderMax,
  toggleMetric,
} from "../src/state.js";
import { lassoSelect, modelIndex, renderPanels } from "../src/panels/index.js";
import { renderProjectionPanel } from "../src/panels/projection.js";
import type { ModelRow, ProjectionDoc, SessionSnapshot } from "../src/types.js";

const snapshot = JSON.parse(readFileSync(
  new URL("./fixture/heart_snapshot.json", import.meta.url), "utf-8",
)) as SessionSnapshot;

const state = initialState(snapshot.status);

interface Captured {
  url: string;
  method: string;
  body: unknown;
}

function stubFetch(response: unknown, status = 200): Captured[] {
  const calls: Captured[] = [];
  vi.stubGlobal("fetch", vi.fn(async (url: string, init?: RequestInit) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : null,
    });
    return new Response(JSON.stringify(response), {
      status,
      headers: { "content-type": "application/json" },
    });
  }));
  return calls;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

function fakeModel(id: string, overall: number): ModelRow {
  return {
    id,
    algorithm: "KNN",
    params: {},
    stage: 0,
    origin: "random",
    metrics: {
      accuracy: overall, precision: overall, recall: overall, f1: overall,
      g_mean: overall, roc_auc: overall, log_loss: overall, mcc: overall,
    },
    overall,
  };
}

describe("lasso selection", () => {
  it("captures exactly the points inside the polygon", () => {
    // five points in a row; the projection maps x:[0,4] onto px:[16,324]
    const proj: ProjectionDoc = {
      method: "mds",
      model_ids: ["m0", "m1", "m2", "m3", "m4"],
      coords: [[0, 0], [1, 0], [2, 0], [3, 0], [4, 0]],
      diagnostic: 0,
    };
    const models = modelIndex(proj.model_ids.map((id, i) => fakeModel(id, i / 4)));
    const view = renderProjectionPanel(proj, models, [], []);
    expect(view.points.map((p) => Math.round(p.px))).toEqual([16, 93, 170, 247, 324]);

    const polygon: [number, number][] = [[80, 100], [260, 100], [260, 240], [80, 240]];
    expect(lassoSelect(view, polygon)).toEqual(["m1", "m2", "m3"]);
    expect(lassoSelect(view, [[0, 0], [1, 1]])).toEqual([]); // degenerate polygon
  });

  it("round-trips the exact id set into the bucket request", async () => {
    const byId = modelIndex(snapshot.models);
    const view = renderProjectionPanel(snapshot.projections.mds, byId, [], []);
    const mid = 170;
    for (const p of view.points) {
      expect(Math.abs(p.px - mid)).toBeGreaterThan(1e-6);
    }

    const half: [number, number][] = [[0, 0], [mid, 0], [mid, 340], [0, 340]];
    const ids = lassoSelect(view, half);
    const expected = view.points.filter((p) => p.px < mid).map((p) => p.id);
    expect(ids).toEqual(expected);
    expect(ids.length).toBeGreaterThan(0);
    expect(ids.length).toBeLessThan(view.points.length);

    const lassoed = setLasso(state, ids, view.points.map((p) => p.id));
    expect(lassoed.lasso).toEqual(ids);

    const calls = stubFetch({ bucket: ids });
    const client = new EvovoteClient("http://svc");
    const res = await client.updateBucket("abc", buildBucketAdd(lassoed.lasso));
    expect(calls[0]!.url).toBe("http://svc/sessions/abc/bucket");
    expect(calls[0]!.body).toEqual({ add: ids });
    expect(res.bucket).toEqual(ids);
  });

  it("drops ids that are not currently displayed", () => {
    const next = setLasso(state, ["shown", "hidden"], ["shown", "other"]);
    expect(next.lasso).toEqual(["shown"]);
  });

  it("highlights the lassoed points on the next render", () => {
    const byId = modelIndex(snapshot.models);
    const target = snapshot.projections.mds.model_ids.slice(0, 3);
    const view = renderProjectionPanel(snapshot.projections.mds, byId, target, []);
    for (const p of view.points) {
      expect(p.selected).toBe(target.includes(p.id));
    }
  });
});

describe("stage sliders", () => {
  it("default to half the search budget and clamp to [0, n/2]", () => {
    expect(sliderMax(snapshot.status.settings.n)).toBe(25);
    expect(state.sliders.crossover.KNN).toBe(25);
    expect(clampSlider(10, 50)).toBe(10);
    expect(clampSlider(99, 50)).toBe(25);
    expect(clampSlider(-3, 50)).toBe(0);
    expect(clampSlider(7.4, 50)).toBe(7);
    expect(clampSlider(Number.NaN, 50)).toBe(0);
  });

  it("propagate slider values into the stage request payload", async () => {
    let s = setSlider(state, "mutation", "KNN", 10);
    s = setSlider(s, "crossover", "RF", 4);
    s = setSlider(s, "crossover", "GradB", 999); // clamped

    const payload = buildStagePayload(s);
    expect(payload.mutation.KNN).toBe(10);
    expect(payload.crossover.RF).toBe(4);
    expect(payload.crossover.GradB).toBe(25);
    expect(payload.crossover.KNN).toBe(25); // untouched slider keeps its default

    const calls = stubFetch({ job: { state: "running", kind: "stage",
                                     stage: 2, progress: 0, error: null } });
    const client = new EvovoteClient();
    await client.launchStage("abc", payload);
    expect(calls[0]!.url).toBe("/sessions/abc/stages");
    expect(calls[0]!.method).toBe("POST");
    expect(calls[0]!.body).toEqual({
      crossover: { KNN: 25, LR: 25, MLP: 25, RF: 4, GradB: 25 },
      mutation: { KNN: 10, LR: 25, MLP: 25, RF: 25, GradB: 25 },
    });
  });

  it("does not mutate the previous state", () => {
    const next = setSlider(state, "mutation", "KNN", 1);
    expect(state.sliders.mutation.KNN).toBe(25);
    expect(next.sliders.mutation.KNN).toBe(1);
  });
});

describe("metric picking", () => {
  it("toggles metrics within the active group only", () => {
    const off = toggleMetric(state, "g_mean"); // imbalanced metric, balanced group
    expect(off).toBe(state);
    const dropped = toggleMetric(state, "accuracy");
    expect(dropped.metrics).not.toContain("accuracy");
    const restored = toggleMetric(dropped, "accuracy");
    expect(new Set(restored.metrics)).toEqual(new Set(state.metrics));
  });

  it("ships the picked metrics in the settings payload", () => {
    const payload = buildSettingsPayload(toggleMetric(state, "f1"));
    expect(payload.metric_group).toBe("balanced");
    expect(payload.metrics).not.toContain("f1");
    expect(payload.n).toBe(snapshot.status.settings.n);
  });
});

describe("service client", () => {
  it("sends bucket removals verbatim", async () => {
    const calls = stubFetch({ bucket: [] });
    await new EvovoteClient().updateBucket("abc", buildBucketRemove(["a", "b"]));
    expect(calls[0]!.body).toEqual({ remove: ["a", "b"] });
  });

  it("sends ensemble evaluations with the bucket ids", async () => {
    const calls = stubFetch(snapshot.ensemble);
    const client = new EvovoteClient();
    await client.evaluateEnsemble("abc", state.bucket);
    expect(calls[0]!.url).toBe("/sessions/abc/ensemble/evaluate");
    expect(calls[0]!.body).toEqual({ model_ids: snapshot.status.bucket });
  });

  it("raises typed errors from the service envelope", async () => {
    stubFetch({ error: "SessionBusy", detail: "a job is already running" }, 409);
    const err = await new EvovoteClient().startSearch("abc").catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).status).toBe(409);
    expect((err as ServiceError).kind).toBe("SessionBusy");
  });
});

describe("full snapshot interaction pass", () => {
  it("render, lasso, bucket payload, stage payload all agree", () => {
    const views = renderPanels(snapshot, state);
    const shown = views.projectionMds.points.map((p) => p.id);
    const picked = shown.slice(0, 4);
    const next = setLasso(state, picked, shown);
    expect(buildBucketAdd(next.lasso)).toEqual({ add: picked });
    const staged = setSlider(next, "mutation", "MLP", 3);
    expect(buildStagePayload(staged).mutation.MLP).toBe(3);
    expect(buildStagePayload(staged).crossover).toEqual(state.sliders.crossover);
  });
});
