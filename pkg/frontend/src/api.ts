/** Thin typed client over the session service; the UI computes nothing itself. */

import type {
  EnsembleEvalDoc,
  GridDoc,
  JobStatus,
  ModelRow,
  PanelsDoc,
  ProjectionDoc,
  SessionStatus,
  StageDoc,
} from "./types.js";
import type { StagePayload } from "./state.js";

export class ServiceError extends Error {
  constructor(readonly status: number, readonly kind: string, detail: string) {
    super(detail);
  }
}

export interface CreateSessionResponse {
  id: string;
  balance: {
    count_per_class: number[];
    minority_ratio: number;
    recommended_group: string;
  };
  status: SessionStatus;
}

export class EvovoteClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body instanceof FormData) {
      init.body = body;
    } else if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await fetch(this.baseUrl + path, init);
    const text = await res.text();
    const doc = text ? JSON.parse(text) : null;
    if (!res.ok) {
      throw new ServiceError(res.status, doc?.error ?? "HTTPError",
                             doc?.detail ?? res.statusText);
    }
    return doc as T;
  }

  createSession(file: Blob, label: string): Promise<CreateSessionResponse> {
    const form = new FormData();
    form.append("file", file, "data.csv");
    form.append("label", label);
    return this.request("POST", "/sessions", form);
  }

  status(id: string): Promise<SessionStatus> {
    return this.request("GET", `/sessions/${id}`);
  }

  updateSettings(id: string, payload: unknown): Promise<SessionStatus> {
    return this.request("PUT", `/sessions/${id}/settings`, payload);
  }

  startSearch(id: string): Promise<{ job: JobStatus }> {
    return this.request("POST", `/sessions/${id}/search`);
  }

  models(id: string, stage?: number): Promise<{ models: ModelRow[] }> {
    const suffix = stage === undefined ? "" : `?stage=${stage}`;
    return this.request("GET", `/sessions/${id}/models${suffix}`);
  }

  projection(id: string, body: {
    method: "mds" | "tsne";
    model_ids?: string[];
    perplexity?: number;
    iterations?: number;
  }): Promise<ProjectionDoc> {
    return this.request("POST", `/sessions/${id}/projection`, body);
  }

  grid(id: string, selectedIds: readonly string[]): Promise<GridDoc> {
    return this.request("POST", `/sessions/${id}/grid`, { selected_ids: selectedIds });
  }

  panels(id: string, selectedIds: readonly string[]): Promise<PanelsDoc> {
    return this.request("POST", `/sessions/${id}/panels`, { selected_ids: selectedIds });
  }

  updateBucket(id: string, payload: { add?: string[]; remove?: string[] }):
      Promise<{ bucket: string[] }> {
    return this.request("POST", `/sessions/${id}/bucket`, payload);
  }

  launchStage(id: string, payload: StagePayload): Promise<{ job: JobStatus }> {
    return this.request("POST", `/sessions/${id}/stages`, payload);
  }

  stage(id: string, stage: number): Promise<StageDoc> {
    return this.request("GET", `/sessions/${id}/stages/${stage}`);
  }

  evaluateEnsemble(id: string, modelIds: readonly string[]): Promise<EnsembleEvalDoc> {
    return this.request("POST", `/sessions/${id}/ensemble/evaluate`,
                        { model_ids: modelIds });
  }

  save(id: string): Promise<{ path: string; bytes: number }> {
    return this.request("POST", `/sessions/${id}/save`);
  }

  load(document: unknown): Promise<{ id: string; status: SessionStatus }> {
    return this.request("POST", "/sessions/load", document);
  }
}
