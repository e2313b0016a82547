"""Linear SVM trained with the Pegasos primal subgradient method.

Hinge loss plus L2 on the weights (bias unregularized), learning rate
1/(lambda * t), final model is the last iterate. Labels map T -> +1,
M -> -1, so a positive margin means T.
"""

from __future__ import annotations

import random

import numpy as np

from ..errors import NumericError
from .base import (LABEL_M, LABEL_T, Prediction, as_sign, check_space,
                   check_training_data)
from ..features import dense_matrix

DEFAULTS = {"lam": 1e-3, "epochs": 50}


def svm_update(weights, bias, example, step_index: int, lam: float):
    """One Pegasos step on (FeatureVector, label); returns (weights, bias).

    The regularization shrinkage (1 - 1/t) always applies; the hinge
    term is added only when the example's margin is below 1.
    """
    vec, label = example
    x = vec.dense()
    y = as_sign(label)
    return _update(np.array(weights, dtype=float), float(bias), x, y,
                   step_index, lam)


def _update(w, b, x, y, t, lam):
    eta = 1.0 / (lam * t)
    margin = y * (w @ x + b)
    w *= 1.0 - 1.0 / t
    if margin < 1.0:
        w += eta * y * x
        b += eta * y
    return w, b


def svm_objective(w, b, X, y, lam: float) -> float:
    """lambda/2 ||w||^2 + mean hinge loss."""
    margins = y * (X @ w + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return float(lam / 2 * (w @ w) + hinge.mean())


class LinearSVM:

    model_type = "svm"

    def __init__(self, lam: float = 1e-3, epochs: int = 50, seed: int = 0):
        if lam <= 0 or epochs < 1:
            raise ValueError("lam must be positive and epochs >= 1")
        self.lam = lam
        self.epochs = epochs
        self.seed = seed
        self.space = None
        self.weights = None
        self.bias = 0.0
        self.training_meta = {}

    def fit(self, data):
        self.space = check_training_data(data)
        X = dense_matrix([vec for vec, _ in data])
        y = np.fromiter((as_sign(label) for _, label in data),
                        dtype=float, count=len(data))
        n, dim = X.shape

        rng = random.Random(f"{self.seed}:svm")
        w = np.zeros(dim)
        b = 0.0
        t = 0
        objectives = []
        order = list(range(n))
        for epoch in range(self.epochs):
            rng.shuffle(order)
            for i in order:
                t += 1
                w, b = _update(w, b, X[i], y[i], t, self.lam)
            if not (np.isfinite(w).all() and np.isfinite(b)):
                raise NumericError("non-finite SVM weights", epoch=epoch)
            objectives.append(svm_objective(w, b, X, y, self.lam))

        self.weights = w
        self.bias = b
        self.training_meta = {"steps": t, "objectives": objectives,
                              "final_objective": objectives[-1]}
        return self

    def decision(self, vec) -> float:
        check_space(self.space, vec)
        score = self.bias
        for pos, value in vec.entries.items():
            score += self.weights[pos] * value
        return float(score)

    def predict(self, vec) -> Prediction:
        score = self.decision(vec)
        label = LABEL_T if score >= 0 else LABEL_M
        return Prediction(label=label, score=score,
                          per_class={LABEL_M: -score, LABEL_T: score})

    def to_payload(self) -> dict:
        return {"lam": self.lam, "epochs": self.epochs, "seed": self.seed,
                "weights": self.weights.tolist(), "bias": self.bias,
                "training_meta": self.training_meta}

    @classmethod
    def from_payload(cls, payload, space):
        model = cls(lam=payload["lam"], epochs=payload["epochs"],
                    seed=payload["seed"])
        model.space = space
        model.weights = np.asarray(payload["weights"], dtype=float)
        model.bias = float(payload["bias"])
        model.training_meta = payload.get("training_meta", {})
        return model
