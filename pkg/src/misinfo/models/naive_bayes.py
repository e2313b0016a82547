"""Naive Bayes with Laplace smoothing.

The event model follows the feature method: multinomial over BoW
counts, Bernoulli over the vocabulary for binary n-gram vectors (so
absent features count as evidence too).
"""

from __future__ import annotations

import math

import numpy as np

from .base import (BINARY_LABELS, LABEL_M, LABEL_T, Prediction,
                   check_space, check_training_data)

EVENT_MODELS = ("auto", "multinomial", "bernoulli")

DEFAULTS = {"alpha": 1.0, "event_model": "auto"}


class NaiveBayes:

    model_type = "nb"

    def __init__(self, alpha: float = 1.0, event_model: str = "auto"):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        if event_model not in EVENT_MODELS:
            raise ValueError(f"event_model must be one of {EVENT_MODELS}")
        self.alpha = alpha
        self.event_model = event_model
        self.space = None
        self.training_meta = {}

    def fit(self, data):
        """data: list of (FeatureVector, label) pairs."""
        self.space = check_training_data(data)
        if self.event_model == "auto":
            self.event_model = ("multinomial"
                                if self.space.method.kind == "bow"
                                else "bernoulli")
        dim = len(self.space)
        a = self.alpha

        self.log_prior = {}
        # per class: token count totals (multinomial) or document
        # frequencies (bernoulli), one slot per vocabulary position
        self.stats = {c: np.zeros(dim) for c in BINARY_LABELS}
        n_docs = {c: 0 for c in BINARY_LABELS}
        for vec, label in data:
            n_docs[label] += 1
            row = self.stats[label]
            for pos, value in vec.entries.items():
                if self.event_model == "multinomial":
                    row[pos] += value
                elif value:
                    row[pos] += 1

        total = len(data)
        self.log_theta = {}
        self.log_one_minus_theta = {}
        self.absent_base = {}
        for c in BINARY_LABELS:
            self.log_prior[c] = math.log(n_docs[c] / total)
            if self.event_model == "multinomial":
                theta = (self.stats[c] + a) / (self.stats[c].sum() + a * dim)
                self.log_theta[c] = np.log(theta)
            else:
                # doc-frequency smoothing: (df + a) / (n_c + 2a)
                theta = (self.stats[c] + a) / (n_docs[c] + 2 * a)
                self.log_theta[c] = np.log(theta)
                self.log_one_minus_theta[c] = np.log1p(-theta)
                self.absent_base[c] = float(
                    self.log_one_minus_theta[c].sum())
        self.class_docs = n_docs
        self.training_meta = {"event_model": self.event_model,
                              "n_train": total}
        return self

    def log_posterior(self, vec) -> dict[str, float]:
        """Unnormalized log P(c) + log P(features | c) per class."""
        check_space(self.space, vec)
        out = {}
        for c in BINARY_LABELS:
            lp = self.log_prior[c]
            if self.event_model == "multinomial":
                for pos, value in vec.entries.items():
                    lp += value * self.log_theta[c][pos]
            else:
                lp += self.absent_base[c]
                for pos, value in vec.entries.items():
                    if value:
                        lp += (self.log_theta[c][pos]
                               - self.log_one_minus_theta[c][pos])
            out[c] = float(lp)
        return out

    def predict(self, vec) -> Prediction:
        post = self.log_posterior(vec)
        score = post[LABEL_T] - post[LABEL_M]
        label = LABEL_T if score >= 0 else LABEL_M
        return Prediction(label=label, score=score, per_class=post)

    def to_payload(self) -> dict:
        return {
            "alpha": self.alpha,
            "event_model": self.event_model,
            "class_docs": self.class_docs,
            "stats": {c: self.stats[c].tolist() for c in BINARY_LABELS},
            "training_meta": self.training_meta,
        }

    @classmethod
    def from_payload(cls, payload, space):
        model = cls(alpha=payload["alpha"],
                    event_model=payload["event_model"])
        model.space = space
        dim = len(space)
        a = model.alpha
        model.stats = {c: np.asarray(payload["stats"][c], dtype=float)
                       for c in BINARY_LABELS}
        model.class_docs = {c: payload["class_docs"][c]
                            for c in BINARY_LABELS}
        total = sum(model.class_docs.values())
        model.log_prior = {}
        model.log_theta = {}
        model.log_one_minus_theta = {}
        model.absent_base = {}
        for c in BINARY_LABELS:
            model.log_prior[c] = math.log(model.class_docs[c] / total)
            if model.event_model == "multinomial":
                theta = (model.stats[c] + a) / (model.stats[c].sum()
                                                + a * dim)
                model.log_theta[c] = np.log(theta)
            else:
                theta = (model.stats[c] + a) / (model.class_docs[c] + 2 * a)
                model.log_theta[c] = np.log(theta)
                model.log_one_minus_theta[c] = np.log1p(-theta)
                model.absent_base[c] = float(
                    model.log_one_minus_theta[c].sum())
        model.training_meta = payload.get("training_meta", {})
        return model


def nb_log_posterior(model: NaiveBayes, vec) -> dict[str, float]:
    return model.log_posterior(vec)
