"""Shared model-facing types.

Binary task orientation is fixed everywhere: T is the positive class
(+1 margins, higher scores), M the negative. Score ties resolve to T,
the majority class of the corpus these defaults mirror.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractError, DegenerateDataError

LABEL_T = "T"
LABEL_M = "M"
BINARY_LABELS = (LABEL_M, LABEL_T)


@dataclass(frozen=True)
class Prediction:
    """A binary decision with its score (margin or log-odds, T-positive)."""

    label: str
    score: float
    per_class: dict[str, float] | None = None


def check_training_data(data):
    """Common fit() preconditions: non-empty, binary labels, both present."""
    if not data:
        raise DegenerateDataError("empty training set")
    labels = {label for _, label in data}
    bad = labels - set(BINARY_LABELS)
    if bad:
        raise ContractError(f"non-binary labels in training data: {bad}")
    if len(labels) < 2:
        raise DegenerateDataError(
            f"training set contains only class {labels.pop()!r}")
    space = data[0][0].space
    for vec, _ in data:
        if vec.space is not space:
            raise ContractError("training vectors span different spaces")
    return space


def check_space(model_space, vector) -> None:
    if vector.space is not model_space:
        raise ContractError("vector built over a different feature space")


def as_sign(label: str) -> int:
    """T -> +1, M -> -1."""
    return 1 if label == LABEL_T else -1


def int_matrix(vectors) -> np.ndarray:
    """Dense integer design matrix for the exact-arithmetic tree code."""
    space = vectors[0].space
    out = np.zeros((len(vectors), len(space)), dtype=np.int64)
    for i, vec in enumerate(vectors):
        for pos, value in vec.entries.items():
            if value != int(value):
                raise ContractError(
                    f"non-integer feature value {value!r} at position {pos}")
            out[i, pos] = int(value)
    return out
