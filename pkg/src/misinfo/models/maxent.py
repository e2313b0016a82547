"""Maximum entropy classifier: for two classes, binary logistic
regression on the mean negative log-likelihood with an L2 penalty on
the weights (bias unregularized). Trained by full-batch gradient
descent with a fixed step, stopping on gradient norm or max epochs.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericError
from .base import (LABEL_M, LABEL_T, Prediction, check_space,
                   check_training_data)
from ..features import dense_matrix

DEFAULTS = {"step": 0.1, "l2": 1e-3, "tol": 1e-6, "max_epochs": 2000}


def _sigmoid(z):
    # tanh form stays finite for any z
    return 0.5 * (1.0 + np.tanh(z / 2.0))


def _gradient(w, b, X, y, l2):
    n = X.shape[0]
    p = _sigmoid(X @ w + b)
    residual = p - y
    gw = X.T @ residual / n + l2 * w
    gb = float(residual.mean())
    return gw, gb


def _objective(w, b, X, y, l2):
    z = X @ w + b
    # per-sample NLL: log(1 + e^z) - y*z, computed without overflow
    nll = np.logaddexp(0.0, z) - y * z
    return float(nll.mean() + l2 / 2 * (w @ w))


def _arrays(batch):
    X = dense_matrix([vec for vec, _ in batch])
    y = np.fromiter((1.0 if label == LABEL_T else 0.0
                     for _, label in batch), dtype=float, count=len(batch))
    return X, y


def maxent_gradient(weights, bias, batch, l2: float):
    """Gradient of the regularized mean NLL over (FeatureVector, label)
    pairs; returns (weight gradient, bias gradient)."""
    X, y = _arrays(batch)
    return _gradient(np.asarray(weights, dtype=float), float(bias), X, y, l2)


def maxent_objective(weights, bias, batch, l2: float) -> float:
    X, y = _arrays(batch)
    return _objective(np.asarray(weights, dtype=float), float(bias), X, y, l2)


class MaxEnt:

    model_type = "mem"

    def __init__(self, step: float = 0.1, l2: float = 1e-3,
                 tol: float = 1e-6, max_epochs: int = 2000):
        if step <= 0 or l2 < 0 or tol < 0 or max_epochs < 1:
            raise ValueError("invalid maxent hyperparameters")
        self.step = step
        self.l2 = l2
        self.tol = tol
        self.max_epochs = max_epochs
        self.space = None
        self.weights = None
        self.bias = 0.0
        self.training_meta = {}

    def fit(self, data):
        self.space = check_training_data(data)
        X, y = _arrays(data)
        dim = X.shape[1]

        w = np.zeros(dim)
        b = 0.0
        converged = False
        grad_norm = float("inf")
        epoch = 0
        for epoch in range(self.max_epochs):
            gw, gb = _gradient(w, b, X, y, self.l2)
            if not (np.isfinite(gw).all() and np.isfinite(gb)):
                raise NumericError("non-finite maxent gradient", epoch=epoch)
            grad_norm = float(np.sqrt(gw @ gw + gb * gb))
            if grad_norm < self.tol:
                converged = True
                break
            w -= self.step * gw
            b -= self.step * gb

        self.weights = w
        self.bias = b
        self.training_meta = {"epochs": epoch + (0 if converged else 1),
                              "converged": converged,
                              "grad_norm": grad_norm,
                              "final_objective": _objective(w, b, X, y,
                                                            self.l2)}
        return self

    def decision(self, vec) -> float:
        """Log-odds of T."""
        check_space(self.space, vec)
        z = self.bias
        for pos, value in vec.entries.items():
            z += self.weights[pos] * value
        return float(z)

    def predict(self, vec) -> Prediction:
        z = self.decision(vec)
        label = LABEL_T if z >= 0 else LABEL_M
        return Prediction(label=label, score=z,
                          per_class={LABEL_M: -z, LABEL_T: z})

    def to_payload(self) -> dict:
        return {"step": self.step, "l2": self.l2, "tol": self.tol,
                "max_epochs": self.max_epochs,
                "weights": self.weights.tolist(), "bias": self.bias,
                "training_meta": self.training_meta}

    @classmethod
    def from_payload(cls, payload, space):
        model = cls(step=payload["step"], l2=payload["l2"],
                    tol=payload["tol"], max_epochs=payload["max_epochs"])
        model.space = space
        model.weights = np.asarray(payload["weights"], dtype=float)
        model.bias = float(payload["bias"])
        model.training_meta = payload.get("training_meta", {})
        return model
