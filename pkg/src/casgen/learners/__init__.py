"""Base learning algorithms behind one train/predict-distribution interface.

Three algorithms are provided: gaussian/multinomial naive bayes, a
C4.5-style decision tree, and a RIPPER-style rule inducer.  All of them
train deterministically from ``(spec, table, seed)`` and predict a
two-class probability distribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..dataset import DataTable

__all__ = [
    "LearnerSpec",
    "Model",
    "SchemaMismatch",
    "train",
    "DEFAULT_PARAMS",
]


class SchemaMismatch(ValueError):
    """Instance or table does not match the schema a model was trained on."""


DEFAULT_PARAMS: dict[str, dict[str, float]] = {
    "naive_bayes": {
        # gaussian variance floor, as a fraction of squared attribute range
        "variance_floor_scale": 1e-6,
    },
    "c45": {
        "confidence_factor": 0.25,   # pessimistic-error pruning confidence
        "min_split": 2,              # minimum instances for >= 2 branches
        "prune": 1,                  # 0 disables pruning
    },
    "ripper": {
        "prune_fraction": 1.0 / 3.0,   # held-out share for rule pruning
        "optimization_rounds": 2,
        "mdl_stop_bits": 64.0,         # stop when DL exceeds best by this
    },
}


@dataclass(frozen=True)
class LearnerSpec:
    """Algorithm name plus hyperparameters (unset ones take defaults)."""

    algorithm: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in DEFAULT_PARAMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        unknown = set(self.params) - set(DEFAULT_PARAMS[self.algorithm])
        if unknown:
            raise ValueError(f"unknown {self.algorithm} parameters: {sorted(unknown)}")
        object.__setattr__(self, "params", dict(self.params))

    def resolved(self) -> dict[str, float]:
        merged = dict(DEFAULT_PARAMS[self.algorithm])
        merged.update(self.params)
        _validate_params(self.algorithm, merged)
        return merged


def _validate_params(algorithm: str, params: dict[str, float]) -> None:
    def require(name, ok):
        if not ok:
            raise ValueError(f"{algorithm} parameter {name}={params[name]} out of range")

    if algorithm == "naive_bayes":
        require("variance_floor_scale", params["variance_floor_scale"] >= 0)
    elif algorithm == "c45":
        require("confidence_factor", 0 < params["confidence_factor"] <= 0.5)
        require("min_split", params["min_split"] >= 1)
    elif algorithm == "ripper":
        require("prune_fraction", 0 <= params["prune_fraction"] < 1)
        require("optimization_rounds", params["optimization_rounds"] >= 0)
        require("mdl_stop_bits", params["mdl_stop_bits"] >= 0)


class Model:
    """Common behaviour of trained models: schema checks and the
    per-instance distribution convenience on top of batch prediction."""

    kind: str = "?"

    def __init__(self, schema, class_labels):
        self.schema = tuple(schema)
        self.class_labels = tuple(class_labels)

    @property
    def n_attrs(self) -> int:
        return len(self.schema)

    def _check_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_attrs:
            raise SchemaMismatch(f"expected {self.n_attrs} attributes, got {X.shape[1]}")
        if np.isnan(X).any():
            raise ValueError("missing cells are not accepted at prediction time")
        return X

    def predict_proba(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict_distribution(self, x) -> tuple[float, float]:
        dist = self.predict_proba(np.asarray(x, dtype=np.float64)[None, :])[0]
        return float(dist[0]), float(dist[1])

    def predict_table(self, table: DataTable) -> np.ndarray:
        from ..dataset import schema_fingerprint
        if schema_fingerprint(self.schema, self.class_labels) != table.fingerprint:
            raise SchemaMismatch("table schema does not match the model's training schema")
        return self.predict_proba(table.X)


def _check_training_table(table: DataTable) -> None:
    if table.n_rows == 0:
        raise ValueError("cannot train on an empty table")
    if table.n_attrs == 0:
        raise ValueError("cannot train with zero attributes")
    if np.isnan(table.X).any():
        raise ValueError("training table contains missing cells; impute first")


def train(spec: LearnerSpec, table: DataTable, seed: int = 0) -> Model:
    """Train a model of the requested kind (only 'ripper' consumes the seed)."""
    from . import naive_bayes, rules, tree

    params = spec.resolved()
    _check_training_table(table)
    if spec.algorithm == "naive_bayes":
        return naive_bayes.train_naive_bayes(table, **params)
    if spec.algorithm == "c45":
        return tree.train_c45(table, **params)
    return rules.train_ripper(table, seed=seed, **params)
