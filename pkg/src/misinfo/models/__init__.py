"""The five classifiers and their shared config/persistence plumbing."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ContractError
from .base import BINARY_LABELS, LABEL_M, LABEL_T, Prediction
from .forest import RandomForest, rf_vote
from .maxent import MaxEnt, maxent_gradient, maxent_objective
from .naive_bayes import NaiveBayes, nb_log_posterior
from .svm import LinearSVM, svm_objective, svm_update
from .tree import DecisionTree, SplitDecision, best_split

from . import forest, maxent, naive_bayes, svm, tree

MODEL_CLASSES = {
    "nb": NaiveBayes,
    "dt": DecisionTree,
    "rf": RandomForest,
    "svm": LinearSVM,
    "mem": MaxEnt,
}

MODEL_TYPES = tuple(MODEL_CLASSES)

DEFAULT_HYPERPARAMETERS = {
    "nb": naive_bayes.DEFAULTS,
    "dt": tree.DEFAULTS,
    "rf": forest.DEFAULTS,
    "svm": svm.DEFAULTS,
    "mem": maxent.DEFAULTS,
}

# these constructors take the config seed; the rest are deterministic
_SEEDED = ("rf", "svm")


@dataclass(frozen=True)
class ModelConfig:
    """A model type plus hyperparameter overrides and a seed."""

    model_type: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.model_type not in MODEL_CLASSES:
            raise ValueError(
                f"unknown model type {self.model_type!r}, expected one of "
                f"{MODEL_TYPES}")
        allowed = set(DEFAULT_HYPERPARAMETERS[self.model_type])
        unknown = set(self.hyperparameters) - allowed
        if unknown:
            raise ValueError(
                f"unknown hyperparameters for {self.model_type}: "
                f"{sorted(unknown)}")

    def resolved(self) -> dict:
        merged = dict(DEFAULT_HYPERPARAMETERS[self.model_type])
        merged.update(self.hyperparameters)
        return merged


def train(config: ModelConfig, data):
    """Fit the configured model on (FeatureVector, label) pairs."""
    kwargs = config.resolved()
    if config.model_type in _SEEDED:
        kwargs["seed"] = config.seed
    model = MODEL_CLASSES[config.model_type](**kwargs)
    return model.fit(data)


def predict(model, vec) -> Prediction:
    return model.predict(vec)


__all__ = [
    "BINARY_LABELS", "LABEL_M", "LABEL_T", "Prediction", "ModelConfig",
    "MODEL_TYPES", "MODEL_CLASSES", "DEFAULT_HYPERPARAMETERS", "train",
    "predict", "NaiveBayes", "DecisionTree", "RandomForest", "LinearSVM",
    "MaxEnt", "SplitDecision", "best_split", "nb_log_posterior",
    "maxent_gradient", "maxent_objective", "svm_update", "svm_objective",
    "rf_vote",
]
