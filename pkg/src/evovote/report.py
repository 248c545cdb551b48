"""Headless run artifacts: report.json, models.csv and rendered figures."""

from __future__ import annotations

import csv
import json
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dataset import class_balance
from .metrics import ALL_METRICS, MetricId
from .session import Session, _ensemble_doc, _stage_doc
from .space import ALGORITHM_ORDER

REPORT_SCHEMA = "evovote-report/1"


def write_models_csv(session: Session, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "algorithm", "stage", "origin", "params"]
                        + [m.value for m in ALL_METRICS] + ["overall"])
        for m in session.models.values():
            params = "|".join(f"{k}={v}" for k, v in sorted(m.config.params.items()))
            writer.writerow([m.id, m.config.algorithm.value, m.config.stage,
                             m.config.origin.value, params]
                            + [f"{m.metric_scores[x]:.6f}" for x in ALL_METRICS]
                            + [f"{m.overall:.6f}"])


def _save(fig, figures_dir, name) -> str:
    path = os.path.join(figures_dir, name)
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
    return name


def plot_projection(session: Session, figures_dir) -> str:
    proj = session.projection("mds")
    overall = np.array([session.models[i].overall for i in proj.model_ids])
    fig, ax = plt.subplots(figsize=(6, 5))
    sc = ax.scatter(proj.coords[:, 0], proj.coords[:, 1], c=overall, cmap="viridis",
                    s=18, linewidths=0)
    fig.colorbar(sc, ax=ax, label="overall performance")
    ax.set_title(f"MDS projection of {len(proj.model_ids)} models "
                 f"(stress {proj.diagnostic:.3f})")
    ax.set_xlabel("dim 1")
    ax.set_ylabel("dim 2")
    return _save(fig, figures_dir, "fig_projection.png")


def plot_overall_by_algorithm(session: Session, figures_dir) -> str:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    rng = np.random.default_rng(0)
    for pos, a in enumerate(ALGORITHM_ORDER):
        values = [m.overall for m in session.models.values() if m.config.algorithm is a]
        if not values:
            continue
        x = pos + rng.uniform(-0.28, 0.28, size=len(values))
        ax.scatter(x, values, s=8, alpha=0.55, linewidths=0)
        ax.hlines(float(np.mean(values)), pos - 0.35, pos + 0.35, colors="black", lw=1.2)
    ax.set_xticks(range(len(ALGORITHM_ORDER)),
                  [a.value for a in ALGORITHM_ORDER])
    ax.set_ylabel("overall performance")
    ax.set_title("Model pool by algorithm (bar = mean)")
    return _save(fig, figures_dir, "fig_overall_by_algorithm.png")


def plot_stage_paths(session: Session, figures_dir) -> str:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    labels, ratios, colors = [], [], []
    for record in session.stage_records:
        for a in ALGORITHM_ORDER:
            for origin in ("crossover", "mutation"):
                stat = None
                for (sa, so), st in record.path_stats.items():
                    if sa is a and so.value == origin:
                        stat = st
                if stat is None or stat.total == 0:
                    continue
                labels.append(f"S{record.plan.stage} {a.value} {origin[:5]}")
                ratios.append(stat.better / stat.total)
                colors.append("#2a9d4e" if stat.direction.value == "over" else "#b0533a")
    if labels:
        y = np.arange(len(labels))
        ax.barh(y, ratios, color=colors)
        ax.set_yticks(y, labels, fontsize=7)
        ax.invert_yaxis()
    ax.set_xlabel("path ratio (green = over, red = under)")
    ax.set_title("Evolution path statistics")
    return _save(fig, figures_dir, "fig_stage_paths.png")


def plot_ensemble_per_class(session: Session, figures_dir) -> str:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    active = session.ensemble_history[-1] if session.ensemble_history else None
    best = session.best.spec if session.best else None
    y = np.arange(len(ALL_METRICS))
    h = 0.2
    for spec, color, label, off in ((active, "#2457a8", "active", -h / 2),
                                    (best, "#c03434", "best", h / 2)):
        if spec is None:
            continue
        left = [-spec.per_class_scores[(m, 0)] for m in ALL_METRICS]
        right = [spec.per_class_scores[(m, 1)] for m in ALL_METRICS]
        ax.barh(y + off, left, height=h, color=color, alpha=0.85,
                label=f"{label} (class {session.dataset.class_names[0]})")
        ax.barh(y + off, right, height=h, color=color, alpha=0.45,
                label=f"{label} (class {session.dataset.class_names[1]})")
    ax.axvline(0, color="black", lw=0.8)
    ax.set_yticks(y, [m.value for m in ALL_METRICS])
    ax.set_xlabel("per-class score (left = class 0, right = class 1)")
    ax.set_title("Ensemble per-class metrics: active vs best")
    ax.legend(fontsize=7, loc="lower right")
    return _save(fig, figures_dir, "fig_ensemble_per_class.png")


def plot_grid(session: Session, figures_dir) -> str:
    grid = session.grid(selected_ids=list(session.bucket))
    power = np.array([c.power_all for c in grid.cells])
    diff = np.array([float(np.mean(list(c.difference.values()))) for c in grid.cells])
    cols = max(1, int(math.ceil(math.sqrt(grid.cell_count))))
    rows = int(math.ceil(grid.cell_count / cols))

    def as_image(values, fill):
        img = np.full(rows * cols, fill, dtype=np.float64)
        img[:values.size] = values
        return img.reshape(rows, cols)

    fig, axes = plt.subplots(1, 2, figsize=(10, 4.5))
    im0 = axes[0].imshow(as_image(power, np.nan), cmap="Greens", vmin=0, vmax=1)
    axes[0].set_title("per-cell predictive power (all models)")
    fig.colorbar(im0, ax=axes[0], shrink=0.8)
    im1 = axes[1].imshow(as_image(diff, np.nan), cmap="PRGn", vmin=-1, vmax=1)
    axes[1].set_title("difference layer (selection vs all)")
    fig.colorbar(im1, ax=axes[1], shrink=0.8)
    for ax in axes:
        ax.set_xticks([])
        ax.set_yticks([])
    fig.suptitle(f"Instance grid: {grid.cell_count} cells"
                 f" ({'clustered' if grid.clustered else 'one instance per cell'})")
    return _save(fig, figures_dir, "fig_grid.png")


def best_single(session: Session, metric: MetricId = MetricId.ACCURACY):
    return max(session.models.values(), key=lambda m: m.metric_scores[metric])


def _model_summary(m) -> dict:
    return {"id": m.id, "algorithm": m.config.algorithm.value, "stage": m.config.stage,
            "origin": m.config.origin.value,
            "params": {k: (list(v) if isinstance(v, tuple) else v)
                       for k, v in m.config.params.items()},
            "metrics": {k.value: float(v) for k, v in m.metric_scores.items()},
            "overall": float(m.overall)}


def write_report(session: Session, out_path, runtime_seconds: float | None = None) -> dict:
    """Write report.json plus models.csv and all figures next to it."""
    out_dir = os.path.dirname(os.path.abspath(out_path)) or "."
    os.makedirs(out_dir, exist_ok=True)
    write_models_csv(session, os.path.join(out_dir, "models.csv"))
    figures = {
        "projection": plot_projection(session, out_dir),
        "overall_by_algorithm": plot_overall_by_algorithm(session, out_dir),
        "stage_paths": plot_stage_paths(session, out_dir),
        "ensemble_per_class": plot_ensemble_per_class(session, out_dir),
        "grid": plot_grid(session, out_dir),
    }
    balance = class_balance(session.dataset)
    top = best_single(session)
    by_algo = {}
    for a in ALGORITHM_ORDER:
        members = [m for m in session.models.values() if m.config.algorithm is a]
        if members:
            by_algo[a.value] = _model_summary(
                max(members, key=lambda m: m.metric_scores[MetricId.ACCURACY]))
    doc = {
        "schema": REPORT_SCHEMA,
        "session_id": session.id,
        "settings": {
            "metric_group": session.settings.metric_group,
            "selected": [m.value for m in session.settings.selected],
            "n": session.settings.n,
            "k": session.settings.k,
            "seed": session.settings.seed,
        },
        "dataset": {
            "instances": session.dataset.n_instances,
            "features": session.dataset.n_features,
            "class_counts": [int(c) for c in session.dataset.class_counts()],
            "minority_ratio": float(balance.minority_ratio),
            "recommended_group": balance.recommended_group,
        },
        "pool": {"models": len(session.models), "failures": len(session.failures)},
        "stages": [_stage_doc(r) for r in session.stage_records],
        "best_single": _model_summary(top),
        "best_single_by_algorithm": by_algo,
        "ensemble": (_ensemble_doc(session.ensemble_history[-1])
                     if session.ensemble_history else None),
        "best_record": ({"ordinal": session.best.ordinal,
                         "spec": _ensemble_doc(session.best.spec)}
                        if session.best else None),
        "figures": figures,
        "models_csv": "models.csv",
    }
    if runtime_seconds is not None:
        doc["runtime_seconds"] = round(float(runtime_seconds), 3)
    with open(out_path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc
