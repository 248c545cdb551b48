"""Random search (S0) and crossover/mutation stages over the unselected pool."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .dataset import Dataset, Folds
from .errors import AlgorithmMismatch, InsufficientParents, SpaceExhausted
from .evaluator import EvaluatedModel, derive_seed, run_evaluations
from .space import (
    ALGORITHM_ORDER,
    SPACES,
    Algorithm,
    Categorical,
    IntRange,
    ModelConfig,
    Origin,
    model_id,
    primary_dimension,
    sample_random_config,
)

MIN_RANDOM_SEARCH = 50
MAX_RANDOM_SEARCH = 300

REAL_MUTATION_ATTEMPTS = 100
REAL_MUTATION_TOL = 1e-6


class Direction(str, Enum):
    OVER = "over"
    UNDER = "under"


@dataclass(frozen=True)
class PathStat:
    """better/total children on one (algorithm, origin) path.

    With direction=UNDER, `better` counts children below the pre-stage minimum.
    """

    better: int
    total: int
    direction: Direction

    def __post_init__(self):
        if not 0 <= self.better <= max(self.total, 0):
            raise ValueError("better must lie in [0, total]")


@dataclass(frozen=True)
class StagePlan:
    stage: int
    crossover_count: dict[Algorithm, int]
    mutation_count: dict[Algorithm, int]

    def __post_init__(self):
        if self.stage < 1:
            raise ValueError("stage index starts at 1")
        for counts in (self.crossover_count, self.mutation_count):
            for a in ALGORITHM_ORDER:
                if counts.get(a, 0) < 0:
                    raise ValueError(f"negative count for {a.value}")

    @classmethod
    def default(cls, stage: int, n: int) -> "StagePlan":
        half = n // 2
        return cls(stage,
                   {a: half for a in ALGORITHM_ORDER},
                   {a: half for a in ALGORITHM_ORDER})

    def validate_bounds(self, n: int) -> None:
        # counts may not exceed n/2 per the plan contract
        limit = n // 2
        for counts in (self.crossover_count, self.mutation_count):
            for a, c in counts.items():
                if c > limit:
                    raise ValueError(f"{a.value} count {c} exceeds n/2 = {limit}")


@dataclass
class ExploredValues:
    """Primary-hyperparameter values already used, per algorithm."""

    values: dict[Algorithm, set] = field(default_factory=lambda: {a: set() for a in ALGORITHM_ORDER})

    def add(self, a: Algorithm, value) -> None:
        self.values[a].add(value)

    def add_config(self, c: ModelConfig) -> None:
        self.add(c.algorithm, c.primary_value)

    def of(self, a: Algorithm) -> set:
        return self.values[a]


@dataclass
class StageRecord:
    plan: StagePlan
    parent_ids: dict[Algorithm, list[str]]
    child_ids: dict[Algorithm, dict[Origin, list[str]]]
    path_stats: dict[tuple[Algorithm, Origin], PathStat]
    failures: dict[str, str] = field(default_factory=dict)


def run_random_search(n: int, d: Dataset, folds: Folds, selected, seed: int,
                      explored: ExploredValues | None = None, start_number: int = 0,
                      n_jobs: int = 1, progress=None):
    """Stage S0: n random configs per algorithm, all evaluated.

    Ids carry a global counter: KNN0..KNN{n-1}, LR{n}.., and so on.
    Returns (evaluated models, failures by id).
    """
    if not MIN_RANDOM_SEARCH <= n <= MAX_RANDOM_SEARCH:
        raise ValueError(f"n must lie in [{MIN_RANDOM_SEARCH}, {MAX_RANDOM_SEARCH}], got {n}")
    rng = np.random.default_rng(derive_seed(seed, "s0/sampling"))
    configs = []
    number = start_number
    for a in ALGORITHM_ORDER:
        for _ in range(n):
            c = sample_random_config(a, rng, number=number, stage=0)
            configs.append(c)
            number += 1
    if explored is not None:
        for c in configs:
            explored.add_config(c)
    return run_evaluations(configs, d, folds, selected, seed, n_jobs=n_jobs, progress=progress)


def crossover(a: ModelConfig, b: ModelConfig, rng, number: int = 0, stage: int = 1) -> ModelConfig:
    """Blend two same-algorithm parents dimension by dimension."""
    if a.algorithm is not b.algorithm:
        raise AlgorithmMismatch(f"cannot cross {a.algorithm.value} with {b.algorithm.value}")
    if a.id == b.id:
        raise ValueError("crossover parents must be distinct models")
    params = {}
    for dim in SPACES[a.algorithm]:
        av, bv = a.params[dim.name], b.params[dim.name]
        if dim.numeric:
            lam = rng.random()
            params[dim.name] = dim.domain.clamp_round(lam * av + (1.0 - lam) * bv)
        else:
            params[dim.name] = av if rng.random() < 0.5 else bv
    return ModelConfig(model_id(a.algorithm, number), a.algorithm, params,
                       stage=stage, origin=Origin.CROSSOVER)


def mutate(p: ModelConfig, explored: ExploredValues, rng, number: int = 0,
           stage: int = 1) -> ModelConfig:
    """Replace the primary hyperparameter with a previously unexplored value."""
    dim = primary_dimension(p.algorithm)
    seen = explored.of(p.algorithm)
    if isinstance(dim.domain, IntRange):
        remaining = sorted(set(dim.domain.all_values()) - seen)
        if not remaining:
            raise SpaceExhausted(f"{p.algorithm.value} primary domain fully explored")
        value = remaining[int(rng.integers(len(remaining)))]
    elif isinstance(dim.domain, Categorical):
        remaining = [o for o in dim.domain.options if o not in seen]
        if not remaining:
            raise SpaceExhausted(f"{p.algorithm.value} primary domain fully explored")
        value = remaining[int(rng.integers(len(remaining)))]
    else:
        value = None
        for _ in range(REAL_MUTATION_ATTEMPTS):
            candidate = dim.domain.sample(rng)
            if all(abs(candidate - e) > REAL_MUTATION_TOL for e in seen):
                value = candidate
                break
        if value is None:
            raise SpaceExhausted(
                f"{p.algorithm.value} primary domain exhausted after "
                f"{REAL_MUTATION_ATTEMPTS} attempts")
    explored.add(p.algorithm, value)
    params = dict(p.params)
    params[dim.name] = value
    return ModelConfig(model_id(p.algorithm, number), p.algorithm, params,
                       stage=stage, origin=Origin.MUTATION)


def _path_stat(children: list[EvaluatedModel], pre_max: float, pre_min: float) -> PathStat:
    total = len(children)
    over = sum(1 for c in children if c.overall > pre_max)
    if over > 0:
        return PathStat(over, total, Direction.OVER)
    under = sum(1 for c in children if c.overall < pre_min)
    return PathStat(under, total, Direction.UNDER)


def run_stage(plan: StagePlan, pool: list[EvaluatedModel], d: Dataset, folds: Folds,
              selected, seed: int, explored: ExploredValues, start_number: int,
              n_jobs: int = 1, progress=None):
    """Generate, evaluate and score one crossover/mutation stage.

    `pool` is the unselected model pool the stage draws parents from and the
    baseline PathStats compare against. Returns (StageRecord, new models,
    next id number).
    """
    by_algo: dict[Algorithm, list[EvaluatedModel]] = {a: [] for a in ALGORITHM_ORDER}
    for m in pool:
        by_algo[m.config.algorithm].append(m)

    for a in ALGORITHM_ORDER:
        if plan.crossover_count.get(a, 0) > 0 and len(by_algo[a]) < 2:
            raise InsufficientParents(f"{a.value}: crossover needs 2 pool models, "
                                      f"have {len(by_algo[a])}")
        if plan.mutation_count.get(a, 0) > 0 and not by_algo[a]:
            raise InsufficientParents(f"{a.value}: mutation needs a pool model")

    rng = np.random.default_rng(derive_seed(seed, f"stage{plan.stage}/ops"))
    number = start_number
    children: list[ModelConfig] = []
    parent_ids = {a: [] for a in ALGORITHM_ORDER}
    child_ids = {a: {Origin.CROSSOVER: [], Origin.MUTATION: []} for a in ALGORITHM_ORDER}

    def note_parent(a, pid):
        if pid not in parent_ids[a]:
            parent_ids[a].append(pid)

    for a in ALGORITHM_ORDER:
        members = by_algo[a]
        for _ in range(plan.crossover_count.get(a, 0)):
            i, j = rng.choice(len(members), size=2, replace=False)
            pa, pb = members[int(i)], members[int(j)]
            child = crossover(pa.config, pb.config, rng, number=number, stage=plan.stage)
            explored.add_config(child)
            note_parent(a, pa.id)
            note_parent(a, pb.id)
            child_ids[a][Origin.CROSSOVER].append(child.id)
            children.append(child)
            number += 1
        for _ in range(plan.mutation_count.get(a, 0)):
            parent = members[int(rng.integers(len(members)))]
            try:
                child = mutate(parent.config, explored, rng, number=number, stage=plan.stage)
            except SpaceExhausted as exc:
                warnings.warn(f"stage {plan.stage}: {exc}; generated "
                              f"{len(child_ids[a][Origin.MUTATION])} of "
                              f"{plan.mutation_count[a]} mutation children", stacklevel=2)
                break
            note_parent(a, parent.id)
            child_ids[a][Origin.MUTATION].append(child.id)
            children.append(child)
            number += 1

    evaluated, failures = run_evaluations(children, d, folds, selected, seed,
                                          n_jobs=n_jobs, progress=progress)
    by_id = {m.id: m for m in evaluated}

    path_stats: dict[tuple[Algorithm, Origin], PathStat] = {}
    for a in ALGORITHM_ORDER:
        overalls = [m.overall for m in by_algo[a]]
        pre_max = max(overalls) if overalls else float("-inf")
        pre_min = min(overalls) if overalls else float("inf")
        for origin in (Origin.CROSSOVER, Origin.MUTATION):
            kids = [by_id[i] for i in child_ids[a][origin] if i in by_id]
            if child_ids[a][origin] or kids:
                path_stats[(a, origin)] = _path_stat(kids, pre_max, pre_min)

    record = StageRecord(plan, parent_ids, child_ids, path_stats, failures)
    return record, evaluated, number
