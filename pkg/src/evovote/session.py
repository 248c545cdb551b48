"""Session state: settings, model pool, stages, bucket, ensembles, persistence.

Documents are canonical JSON (sorted keys, compact separators), so an
unchanged session always serializes to the same bytes.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass

import numpy as np

from . import analytics, ensemble as ens
from .dataset import Dataset, Folds, stratified_kfold
from .errors import EmptySelection, UnknownModelId, VersionMismatch
from .evaluator import EvaluatedModel, derive_seed
from .evolution import (
    ExploredValues,
    PathStat,
    Direction,
    StagePlan,
    StageRecord,
    run_random_search,
    run_stage,
)
from .metrics import METRIC_GROUPS, MetricId
from .space import ALGORITHM_ORDER, Algorithm, ModelConfig, Origin, decode_params, encode_params

SCHEMA = "evovote-session/1"


@dataclass(frozen=True)
class Settings:
    metric_group: str
    selected: tuple[MetricId, ...]
    n: int = 100
    k: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.metric_group not in METRIC_GROUPS:
            raise ValueError(f"unknown metric group {self.metric_group!r}")
        if not self.selected:
            raise EmptySelection("select at least one metric")
        group = METRIC_GROUPS[self.metric_group]
        for m in self.selected:
            if m not in group:
                raise ValueError(f"{m.value} is not part of the {self.metric_group} group")


class Session:
    """One dataset, one master seed, one evolving model pool."""

    def __init__(self, dataset: Dataset, settings: Settings, session_id: str | None = None):
        self.id = session_id or uuid.uuid4().hex
        self.dataset = dataset
        self.settings = settings
        self.folds: Folds = stratified_kfold(dataset, settings.k,
                                             derive_seed(settings.seed, "folds"))
        self.models: dict[str, EvaluatedModel] = {}
        self.failures: dict[str, str] = {}
        self.explored = ExploredValues()
        self.stage_records: list[StageRecord] = []
        self.bucket: list[str] = []
        self.ensemble_history: list[ens.EnsembleSpec] = []
        self.best: ens.BestEnsembleRecord | None = None
        self.next_number = 0
        self.actions: list[dict] = []
        # guards state commits so readers never see a half-applied batch
        self.lock = threading.RLock()

    # ----- workflow -----

    def configure(self, settings: Settings) -> None:
        """Replace settings; resets the pool (models depend on folds and seed)."""
        self.__init__(self.dataset, settings, session_id=self.id)

    def run_search(self, progress=None, n_jobs: int = 1) -> int:
        """Stage S0. Clears any previous pool and reruns from the master seed."""
        with self.lock:
            self.models = {}
            self.failures = {}
            self.explored = ExploredValues()
            self.stage_records = []
            self.bucket = []
            self.ensemble_history = []
            self.best = None
            self.next_number = 0
            self.actions = []
        explored = ExploredValues()
        evaluated, failures = run_random_search(
            self.settings.n, self.dataset, self.folds, self.settings.selected,
            self.settings.seed, explored=explored, start_number=0,
            n_jobs=n_jobs, progress=progress)
        with self.lock:
            self.explored = explored
            self.models = {m.id: m for m in evaluated}
            self.failures = dict(failures)
            self.next_number = self.settings.n * len(ALGORITHM_ORDER)
            self.actions.append({"op": "search"})
        return len(evaluated)

    @property
    def current_stage(self) -> int:
        return len(self.stage_records)

    def unselected_pool(self) -> list[EvaluatedModel]:
        return [m for i, m in self.models.items() if i not in set(self.bucket)]

    def launch_stage(self, crossover_counts: dict | None = None,
                     mutation_counts: dict | None = None,
                     progress=None, n_jobs: int = 1) -> StageRecord:
        with self.lock:
            stage = self.current_stage + 1
            plan = StagePlan.default(stage, self.settings.n)
            if crossover_counts or mutation_counts:
                plan = StagePlan(stage,
                                 {**plan.crossover_count, **_algo_counts(crossover_counts)},
                                 {**plan.mutation_count, **_algo_counts(mutation_counts)})
            plan.validate_bounds(self.settings.n)
            pool = self.unselected_pool()
            bucket_before = list(self.bucket)
            start_number = self.next_number
        record, evaluated, next_number = run_stage(
            plan, pool, self.dataset, self.folds,
            self.settings.selected, self.settings.seed, self.explored,
            start_number, n_jobs=n_jobs, progress=progress)
        with self.lock:
            self.actions.append({"op": "stage", "plan": _plan_doc(plan),
                                 "bucket_before": bucket_before})
            self.next_number = next_number
            for m in evaluated:
                self.models[m.id] = m
            self.failures.update(record.failures)
            self.stage_records.append(record)
        return record

    def update_bucket(self, add=(), remove=()) -> list[str]:
        for i in add:
            if i not in self.models:
                raise UnknownModelId(f"no evaluated model with id {i!r}")
            if i not in self.bucket:
                self.bucket.append(i)
        removal = set(remove)
        self.bucket = [i for i in self.bucket if i not in removal]
        return self.bucket

    def evaluate_ensemble(self, ids) -> tuple[ens.EnsembleSpec, ens.BestEnsembleRecord]:
        spec = ens.evaluate_ensemble(ids, self.models, self.dataset, self.settings.selected)
        self.ensemble_history.append(spec)
        self.best = ens.update_best(spec, self.best, len(self.ensemble_history) - 1)
        return spec, self.best

    def auto_compose(self, max_size: int) -> tuple[ens.EnsembleSpec, ens.BestEnsembleRecord]:
        spec = ens.greedy_auto_compose(self.models.values(), max_size,
                                       self.dataset, self.settings.selected)
        self.ensemble_history.append(spec)
        self.best = ens.update_best(spec, self.best, len(self.ensemble_history) - 1)
        return spec, self.best

    # ----- analytics passthroughs -----

    def resolve(self, ids) -> list[EvaluatedModel]:
        out = []
        for i in ids:
            if i not in self.models:
                raise UnknownModelId(f"no evaluated model with id {i!r}")
            out.append(self.models[i])
        return out

    def projection(self, method: str, ids=None, perplexity: float = 10.0,
                   iterations: int = 500) -> analytics.Projection:
        models = self.resolve(ids) if ids else list(self.models.values())
        if method == "mds":
            return analytics.project_mds(models, self.settings.selected)
        if method == "tsne":
            return analytics.project_tsne(models, self.settings.selected, perplexity,
                                          iterations, derive_seed(self.settings.seed, "tsne"))
        raise ValueError(f"unknown projection method {method!r}")

    def grid(self, selected_ids=()) -> analytics.InstanceGrid:
        return analytics.build_grid(self.dataset, self.models.values(),
                                    self.resolve(selected_ids),
                                    seed=derive_seed(self.settings.seed, "grid"))

    def panels(self, selected_ids=()) -> analytics.PanelAggregates:
        return analytics.aggregate_panels(self.models.values(), self.resolve(selected_ids))

    # ----- persistence -----

    def to_document(self) -> dict:
        d = self.dataset
        return {
            "schema": SCHEMA,
            "id": self.id,
            "settings": {
                "metric_group": self.settings.metric_group,
                "selected": [m.value for m in self.settings.selected],
                "n": self.settings.n,
                "k": self.settings.k,
                "seed": self.settings.seed,
            },
            "dataset": {
                "features": [[float(v) for v in row] for row in d.features],
                "labels": [int(v) for v in d.labels],
                "class_names": list(d.class_names),
                "feature_names": list(d.feature_names),
            },
            "fold_assignment": [int(v) for v in self.folds.assignment],
            "models": [_model_doc(self.models[i]) for i in self.models],
            "failures": dict(sorted(self.failures.items())),
            "explored": {a.value: [_encode_value(v) for v in sorted(self.explored.of(a))]
                         for a in ALGORITHM_ORDER},
            "stages": [_stage_doc(r) for r in self.stage_records],
            "bucket": list(self.bucket),
            "ensembles": [_ensemble_doc(e) for e in self.ensemble_history],
            "best": ({"ordinal": self.best.ordinal, "spec": _ensemble_doc(self.best.spec)}
                     if self.best else None),
            "next_number": self.next_number,
            "actions": self.actions,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.canonical_json())

    @classmethod
    def from_document(cls, doc: dict) -> "Session":
        if doc.get("schema") != SCHEMA:
            raise VersionMismatch(f"expected schema {SCHEMA}, got {doc.get('schema')!r}")
        ds = doc["dataset"]
        dataset = Dataset(np.array(ds["features"], dtype=np.float64),
                          np.array(ds["labels"], dtype=np.int64),
                          tuple(ds["class_names"]), tuple(ds["feature_names"]))
        s = doc["settings"]
        settings = Settings(s["metric_group"], tuple(MetricId(m) for m in s["selected"]),
                            s["n"], s["k"], s["seed"])
        session = cls(dataset, settings, session_id=doc["id"])
        session.folds = Folds(settings.k, np.array(doc["fold_assignment"], dtype=np.int64))
        for md in doc["models"]:
            m = _model_from_doc(md)
            session.models[m.id] = m
        session.failures = dict(doc["failures"])
        for name, values in doc["explored"].items():
            a = Algorithm(name)
            for v in values:
                session.explored.add(a, _decode_value(v))
        session.stage_records = [_stage_from_doc(sd) for sd in doc["stages"]]
        session.bucket = list(doc["bucket"])
        session.ensemble_history = [_ensemble_from_doc(ed) for ed in doc["ensembles"]]
        if doc["best"] is not None:
            session.best = ens.BestEnsembleRecord(_ensemble_from_doc(doc["best"]["spec"]),
                                                  doc["best"]["ordinal"])
        session.next_number = doc["next_number"]
        session.actions = list(doc["actions"])
        return session

    @classmethod
    def load(cls, path) -> "Session":
        with open(path) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise VersionMismatch(f"unreadable session document: {exc}") from exc
        return cls.from_document(doc)


def replay(doc: dict) -> Session:
    """Rerun a saved session's recorded actions from its seeds."""
    source = Session.from_document(doc)
    fresh = Session(source.dataset, source.settings, session_id=source.id)
    for action in source.actions:
        if action["op"] == "search":
            fresh.run_search()
        elif action["op"] == "stage":
            fresh.bucket = list(action["bucket_before"])
            plan = action["plan"]
            fresh.launch_stage(plan["crossover"], plan["mutation"])
    return fresh


# ----- document helpers -----

def _algo_counts(counts: dict | None) -> dict[Algorithm, int]:
    if not counts:
        return {}
    out = {}
    for key, v in counts.items():
        a = key if isinstance(key, Algorithm) else Algorithm(key)
        out[a] = int(v)
    return out


def _encode_value(v):
    if isinstance(v, tuple):
        return list(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    return v


def _decode_value(v):
    if isinstance(v, list):
        return tuple(int(x) for x in v)
    return v


def _model_doc(m: EvaluatedModel) -> dict:
    return {
        "id": m.config.id,
        "algorithm": m.config.algorithm.value,
        "params": encode_params(m.config.params),
        "stage": m.config.stage,
        "origin": m.config.origin.value,
        "metrics": {k.value: float(v) for k, v in m.metric_scores.items()},
        "overall": float(m.overall),
        "oof": [[float(a), float(b)] for a, b in m.oof_proba],
    }


def _model_from_doc(md: dict) -> EvaluatedModel:
    algorithm = Algorithm(md["algorithm"])
    config = ModelConfig(md["id"], algorithm, decode_params(algorithm, md["params"]),
                         md["stage"], Origin(md["origin"]))
    scores = {MetricId(k): v for k, v in md["metrics"].items()}
    return EvaluatedModel(config, scores, np.array(md["oof"], dtype=np.float64),
                          md["overall"])


def _plan_doc(plan: StagePlan) -> dict:
    return {"stage": plan.stage,
            "crossover": {a.value: plan.crossover_count.get(a, 0) for a in ALGORITHM_ORDER},
            "mutation": {a.value: plan.mutation_count.get(a, 0) for a in ALGORITHM_ORDER}}


def _plan_from_doc(pd: dict) -> StagePlan:
    return StagePlan(pd["stage"],
                     {Algorithm(k): v for k, v in pd["crossover"].items()},
                     {Algorithm(k): v for k, v in pd["mutation"].items()})


def _stage_doc(r: StageRecord) -> dict:
    stats = []
    for a in ALGORITHM_ORDER:
        for origin in (Origin.CROSSOVER, Origin.MUTATION):
            st = r.path_stats.get((a, origin))
            if st is not None:
                stats.append({"algorithm": a.value, "origin": origin.value,
                              "better": st.better, "total": st.total,
                              "direction": st.direction.value})
    return {
        "plan": _plan_doc(r.plan),
        "parent_ids": {a.value: list(r.parent_ids.get(a, [])) for a in ALGORITHM_ORDER},
        "child_ids": {a.value: {o.value: list(r.child_ids[a][o])
                                for o in (Origin.CROSSOVER, Origin.MUTATION)}
                      for a in ALGORITHM_ORDER},
        "path_stats": stats,
        "failures": dict(sorted(r.failures.items())),
    }


def _stage_from_doc(sd: dict) -> StageRecord:
    parent_ids = {Algorithm(k): list(v) for k, v in sd["parent_ids"].items()}
    child_ids = {Algorithm(k): {Origin(o): list(ids) for o, ids in v.items()}
                 for k, v in sd["child_ids"].items()}
    stats = {}
    for st in sd["path_stats"]:
        key = (Algorithm(st["algorithm"]), Origin(st["origin"]))
        stats[key] = PathStat(st["better"], st["total"], Direction(st["direction"]))
    return StageRecord(_plan_from_doc(sd["plan"]), parent_ids, child_ids, stats,
                       dict(sd["failures"]))


def _ensemble_doc(e: ens.EnsembleSpec) -> dict:
    return {
        "model_ids": list(e.model_ids),
        "pooled": {m.value: float(v) for m, v in e.pooled_scores.items()},
        "per_class": {f"{m.value}/{cls}": float(v)
                      for (m, cls), v in e.per_class_scores.items()},
        "overall": float(e.overall),
    }


def _ensemble_from_doc(ed: dict) -> ens.EnsembleSpec:
    per_class = {}
    for key, v in ed["per_class"].items():
        name, cls = key.rsplit("/", 1)
        per_class[(MetricId(name), int(cls))] = v
    return ens.EnsembleSpec(tuple(ed["model_ids"]),
                            {MetricId(k): v for k, v in ed["pooled"].items()},
                            per_class, ed["overall"])
