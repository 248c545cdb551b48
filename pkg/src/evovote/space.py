"""Five classifier families, their hyperparameter domains, and config sampling.

Each algorithm has exactly one primary dimension (targeted by mutation):
KNN neighbors, LR inverse regularization strength, MLP hidden layer sizes,
RF tree count, GradB boosting stage count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np


class Algorithm(str, Enum):
    KNN = "KNN"
    LR = "LR"
    MLP = "MLP"
    RF = "RF"
    GRADB = "GradB"


ALGORITHM_ORDER = (Algorithm.KNN, Algorithm.LR, Algorithm.MLP, Algorithm.RF, Algorithm.GRADB)


class Origin(str, Enum):
    RANDOM = "random"
    CROSSOVER = "crossover"
    MUTATION = "mutation"


@dataclass(frozen=True)
class IntRange:
    lo: int
    hi: int  # inclusive

    kind = "int"

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.lo, self.hi + 1))

    def contains(self, v) -> bool:
        return isinstance(v, int) and self.lo <= v <= self.hi

    def clamp_round(self, x: float) -> int:
        return int(min(self.hi, max(self.lo, round(x))))

    def all_values(self) -> list[int]:
        return list(range(self.lo, self.hi + 1))

    def describe(self) -> dict:
        return {"kind": "int", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class RealRange:
    lo: float
    hi: float
    log: bool = False

    kind = "real"

    def sample(self, rng: np.random.Generator) -> float:
        if self.log:
            return float(math.exp(rng.uniform(math.log(self.lo), math.log(self.hi))))
        return float(rng.uniform(self.lo, self.hi))

    def contains(self, v) -> bool:
        return isinstance(v, float) and self.lo <= v <= self.hi

    def clamp_round(self, x: float) -> float:
        return float(min(self.hi, max(self.lo, x)))

    def describe(self) -> dict:
        return {"kind": "real", "lo": self.lo, "hi": self.hi, "scale": "log" if self.log else "linear"}


@dataclass(frozen=True)
class Categorical:
    options: tuple

    kind = "categorical"

    def sample(self, rng: np.random.Generator):
        return self.options[int(rng.integers(0, len(self.options)))]

    def contains(self, v) -> bool:
        return v in self.options

    def all_values(self) -> list:
        return list(self.options)

    def describe(self) -> dict:
        return {"kind": "categorical", "options": [_encode_value(o) for o in self.options]}


@dataclass(frozen=True)
class Dimension:
    name: str
    domain: Any  # IntRange | RealRange | Categorical
    primary: bool = False

    @property
    def numeric(self) -> bool:
        return self.domain.kind in ("int", "real")


_MLP_HIDDEN_OPTIONS = tuple(
    layout for h in (4, 8, 16, 32, 64) for layout in ((h,), (h, h))
)

SPACES: dict[Algorithm, tuple[Dimension, ...]] = {
    Algorithm.KNN: (
        Dimension("n_neighbors", IntRange(1, 50), primary=True),
        Dimension("weights", Categorical(("uniform", "distance"))),
        Dimension("metric", Categorical(("euclidean", "manhattan", "chebyshev"))),
    ),
    Algorithm.LR: (
        Dimension("c", RealRange(1e-3, 1e3, log=True), primary=True),
        Dimension("max_iter", Categorical((100, 200, 500))),
    ),
    Algorithm.MLP: (
        Dimension("hidden_layers", Categorical(_MLP_HIDDEN_OPTIONS), primary=True),
        Dimension("activation", Categorical(("relu", "tanh", "logistic"))),
        Dimension("learning_rate", RealRange(1e-4, 1e-1, log=True)),
        Dimension("epochs", IntRange(50, 300)),
    ),
    Algorithm.RF: (
        Dimension("n_trees", IntRange(10, 200), primary=True),
        Dimension("max_depth", IntRange(2, 12)),
        Dimension("min_samples_split", IntRange(2, 10)),
        Dimension("max_features", Categorical(("sqrt", "all"))),
    ),
    Algorithm.GRADB: (
        Dimension("n_stages", IntRange(10, 200), primary=True),
        Dimension("learning_rate", RealRange(0.01, 0.3, log=True)),
        Dimension("max_depth", IntRange(1, 5)),
        Dimension("subsample", RealRange(0.5, 1.0)),
    ),
}


def primary_dimension(a: Algorithm) -> Dimension:
    for dim in SPACES[a]:
        if dim.primary:
            return dim
    raise AssertionError(f"no primary dimension for {a}")


@dataclass(frozen=True)
class ModelConfig:
    """One hyperparameter tuple with its provenance in the session."""

    id: str
    algorithm: Algorithm
    params: dict[str, Any] = field(hash=False)
    stage: int = 0
    origin: Origin = Origin.RANDOM

    def __post_init__(self):
        known = set()
        for dim in SPACES[self.algorithm]:
            known.add(dim.name)
            if dim.name not in self.params:
                raise ValueError(f"{self.id}: missing dimension {dim.name!r}")
            if not dim.domain.contains(self.params[dim.name]):
                raise ValueError(
                    f"{self.id}: {dim.name}={self.params[dim.name]!r} outside its domain"
                )
        stray = set(self.params) - known
        if stray:
            raise ValueError(f"{self.id}: unknown dimension(s) {sorted(stray)}")

    @property
    def primary_value(self):
        return self.params[primary_dimension(self.algorithm).name]


def model_id(a: Algorithm, number: int) -> str:
    return f"{a.value}{number}"


def sample_random_config(a: Algorithm, rng: np.random.Generator, number: int = 0,
                         stage: int = 0) -> ModelConfig:
    """Sample every dimension independently and uniformly over its domain."""
    params = {dim.name: dim.domain.sample(rng) for dim in SPACES[a]}
    return ModelConfig(model_id(a, number), a, params, stage=stage, origin=Origin.RANDOM)


def space_document() -> dict:
    """Machine-readable description of all hyperparameter domains,
    keyed by algorithm name."""
    return {
        a.value: [
            {"name": dim.name, "primary": dim.primary, **dim.domain.describe()}
            for dim in SPACES[a]
        ]
        for a in ALGORITHM_ORDER
    }


def _encode_value(v):
    if isinstance(v, tuple):
        return list(v)
    return v


def encode_params(params: dict[str, Any]) -> dict[str, Any]:
    """JSON-safe view of a params map (tuples become lists)."""
    return {k: _encode_value(v) for k, v in params.items()}


def decode_params(a: Algorithm, raw: dict[str, Any]) -> dict[str, Any]:
    """Inverse of encode_params, restoring per-dimension value types."""
    params = {}
    for dim in SPACES[a]:
        v = raw[dim.name]
        if isinstance(v, list):
            v = tuple(v)
        if isinstance(dim.domain, IntRange):
            v = int(v)
        elif isinstance(dim.domain, RealRange):
            v = float(v)
        params[dim.name] = v
    return params
