"""HTTP API over sessions: upload, search, stages, analytics, ensembles, persistence."""

from __future__ import annotations

import io
import os
import threading

import numpy as np
from fastapi import Body, FastAPI, File, Form, UploadFile
from fastapi.responses import JSONResponse

from .dataset import class_balance, parse_csv
from .errors import EvovoteError, SessionBusy, UnknownModelId, VersionMismatch
from .metrics import METRIC_GROUPS, MetricId
from .session import Session, Settings, _ensemble_doc, _stage_doc

DEFAULT_N = 100
DEFAULT_K = 10


class _Entry:
    def __init__(self, session: Session):
        self.session = session
        self.job = {"state": "idle", "kind": None, "stage": None,
                    "progress": 0.0, "error": None}
        self.lock = threading.Lock()


def _model_row(m) -> dict:
    return {"id": m.id, "algorithm": m.config.algorithm.value,
            "params": {k: (list(v) if isinstance(v, tuple) else v)
                       for k, v in m.config.params.items()},
            "stage": m.config.stage, "origin": m.config.origin.value,
            "metrics": {k.value: float(v) for k, v in m.metric_scores.items()},
            "overall": float(m.overall)}


def create_app(data_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="evovote service")
    registry: dict[str, _Entry] = {}

    def entry_of(session_id: str) -> _Entry:
        if session_id not in registry:
            raise UnknownModelId(f"no session {session_id!r}")
        return registry[session_id]

    def require_idle(entry: _Entry) -> None:
        if entry.job["state"] == "running":
            raise SessionBusy("a job is running for this session")

    def start_job(entry: _Entry, kind: str, stage, target) -> None:
        with entry.lock:
            require_idle(entry)
            entry.job = {"state": "running", "kind": kind, "stage": stage,
                         "progress": 0.0, "error": None}

        def progress(fraction: float) -> None:
            entry.job["progress"] = max(entry.job["progress"], float(fraction))

        def body() -> None:
            try:
                target(progress)
                entry.job = {"state": "idle", "kind": None, "stage": None,
                             "progress": 1.0, "error": None}
            except Exception as exc:  # noqa: BLE001 - reported via status
                entry.job = {"state": "failed", "kind": kind, "stage": stage,
                             "progress": entry.job["progress"],
                             "error": f"{type(exc).__name__}: {exc}"}

        threading.Thread(target=body, daemon=True).start()

    @app.exception_handler(EvovoteError)
    def _on_error(_, exc: EvovoteError):
        status = 400
        if isinstance(exc, UnknownModelId):
            status = 404
        elif isinstance(exc, SessionBusy):
            status = 409
        elif isinstance(exc, VersionMismatch):
            status = 409
        return JSONResponse({"error": type(exc).__name__, "detail": str(exc)},
                            status_code=status)

    @app.exception_handler(ValueError)
    def _on_value_error(_, exc: ValueError):
        return JSONResponse({"error": "ValueError", "detail": str(exc)}, status_code=400)

    def status_doc(entry: _Entry) -> dict:
        s = entry.session
        with s.lock:
            return {
                "id": s.id,
                "settings": {"metric_group": s.settings.metric_group,
                             "selected": [m.value for m in s.settings.selected],
                             "n": s.settings.n, "k": s.settings.k,
                             "seed": s.settings.seed},
                "dataset": {"instances": s.dataset.n_instances,
                            "features": s.dataset.n_features,
                            "class_names": list(s.dataset.class_names),
                            "class_counts": [int(c) for c in s.dataset.class_counts()]},
                "models": len(s.models),
                "failures": len(s.failures),
                "stages": s.current_stage,
                "bucket": list(s.bucket),
                "ensembles": len(s.ensemble_history),
                "best": ({"ordinal": s.best.ordinal, "overall": s.best.spec.overall,
                          "model_ids": list(s.best.spec.model_ids)}
                         if s.best else None),
                "job": dict(entry.job),
            }

    @app.post("/sessions")
    async def create_session(file: UploadFile = File(...), label: str = Form(...)):
        text = (await file.read()).decode("utf-8")
        dataset = parse_csv(io.StringIO(text), label)
        balance = class_balance(dataset)
        group = balance.recommended_group
        settings = Settings(group, METRIC_GROUPS[group], n=DEFAULT_N, k=DEFAULT_K, seed=0)
        session = Session(dataset, settings)
        registry[session.id] = _Entry(session)
        return {"id": session.id,
                "balance": {"count_per_class": list(balance.count_per_class),
                            "minority_ratio": balance.minority_ratio,
                            "recommended_group": balance.recommended_group},
                "status": status_doc(registry[session.id])}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return status_doc(entry_of(session_id))

    @app.put("/sessions/{session_id}/settings")
    def put_settings(session_id: str, body: dict = Body(...)):
        entry = entry_of(session_id)
        require_idle(entry)
        s = entry.session
        group = body.get("metric_group", s.settings.metric_group)
        metrics = tuple(MetricId(m) for m in body["metrics"]) if "metrics" in body \
            else METRIC_GROUPS[group]
        settings = Settings(group, metrics,
                            n=int(body.get("n", s.settings.n)),
                            k=int(body.get("k", s.settings.k)),
                            seed=int(body.get("seed", s.settings.seed)))
        s.configure(settings)
        return status_doc(entry)

    @app.post("/sessions/{session_id}/search")
    def post_search(session_id: str):
        entry = entry_of(session_id)
        start_job(entry, "search", 0, lambda cb: entry.session.run_search(progress=cb))
        return {"job": dict(entry.job)}

    @app.get("/sessions/{session_id}/models")
    def get_models(session_id: str, stage: int | None = None):
        s = entry_of(session_id).session
        with s.lock:
            models = list(s.models.values())
        if stage is not None:
            models = [m for m in models if m.config.stage == stage]
        return {"models": [_model_row(m) for m in models]}

    @app.post("/sessions/{session_id}/projection")
    def post_projection(session_id: str, body: dict = Body(...)):
        s = entry_of(session_id).session
        proj = s.projection(body.get("method", "mds"), body.get("model_ids"),
                            perplexity=float(body.get("perplexity", 10.0)),
                            iterations=int(body.get("iterations", 500)))
        return {"method": proj.method, "model_ids": list(proj.model_ids),
                "coords": [[float(a), float(b)] for a, b in proj.coords],
                "diagnostic": float(proj.diagnostic)}

    @app.post("/sessions/{session_id}/grid")
    def post_grid(session_id: str, body: dict = Body(default={})):
        s = entry_of(session_id).session
        grid = s.grid(body.get("selected_ids", []))
        return {"cell_count": grid.cell_count, "clustered": grid.clustered,
                "assignment": [int(v) for v in grid.assignment],
                "cells": [{"cell": c.cell, "count": c.count, "power": c.power,
                           "difference": c.difference, "power_all": c.power_all}
                          for c in grid.cells]}

    @app.post("/sessions/{session_id}/panels")
    def post_panels(session_id: str, body: dict = Body(default={})):
        s = entry_of(session_id).session
        p = s.panels(body.get("selected_ids", []))
        return {
            "beeswarm": {a: [{"id": i, "overall": v} for i, v in pairs]
                         for a, pairs in p.beeswarm.items()},
            "bean": {m.value: {"all": list(p.bean_all[m]),
                               "selected": list(p.bean_selected[m]),
                               "mean_all": p.mean_all[m],
                               "mean_selected": p.mean_selected[m]}
                     for m in p.bean_all},
        }

    @app.post("/sessions/{session_id}/bucket")
    def post_bucket(session_id: str, body: dict = Body(...)):
        entry = entry_of(session_id)
        require_idle(entry)
        s = entry.session
        with s.lock:
            bucket = s.update_bucket(body.get("add", ()), body.get("remove", ()))
        return {"bucket": list(bucket)}

    @app.post("/sessions/{session_id}/stages")
    def post_stages(session_id: str, body: dict = Body(default={})):
        entry = entry_of(session_id)
        stage = entry.session.current_stage + 1
        start_job(entry, "stage", stage,
                  lambda cb: entry.session.launch_stage(body.get("crossover"),
                                                        body.get("mutation"),
                                                        progress=cb))
        return {"job": dict(entry.job)}

    @app.get("/sessions/{session_id}/stages/{stage}")
    def get_stage(session_id: str, stage: int):
        s = entry_of(session_id).session
        with s.lock:
            if not 1 <= stage <= len(s.stage_records):
                raise UnknownModelId(f"no stage {stage} in session {session_id!r}")
            return _stage_doc(s.stage_records[stage - 1])

    @app.post("/sessions/{session_id}/ensemble/evaluate")
    def post_ensemble(session_id: str, body: dict = Body(...)):
        entry = entry_of(session_id)
        require_idle(entry)
        s = entry.session
        with s.lock:
            spec, best = s.evaluate_ensemble(body["model_ids"])
        return {"spec": _ensemble_doc(spec),
                "best": {"ordinal": best.ordinal, "spec": _ensemble_doc(best.spec)}}

    @app.post("/sessions/{session_id}/save")
    def post_save(session_id: str):
        entry = entry_of(session_id)
        require_idle(entry)
        target_dir = data_dir or "."
        os.makedirs(target_dir, exist_ok=True)
        path = os.path.join(target_dir, f"{session_id}.json")
        with entry.session.lock:
            entry.session.save(path)
        return {"path": path, "bytes": os.path.getsize(path)}

    @app.post("/sessions/load")
    def post_load(document: dict = Body(...)):
        session = Session.from_document(document)
        registry[session.id] = _Entry(session)
        return {"id": session.id, "status": status_doc(registry[session.id])}

    return app
