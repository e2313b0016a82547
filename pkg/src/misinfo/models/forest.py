"""Random forest: bagged Gini trees with per-node feature subsampling.

Per-tree PRNG streams are derived from the seed by string, so forests
are reproducible across processes. A forest of one tree with bootstrap
off and all features degenerates to the plain decision tree.
"""

from __future__ import annotations

import math
import random
from collections import Counter

import numpy as np

from .base import (LABEL_M, LABEL_T, Prediction, check_space,
                   check_training_data, int_matrix)
from .tree import Node, grow_tree, node_from_dict, node_to_dict

DEFAULTS = {"num_trees": 100, "bootstrap": True, "max_features": "sqrt",
            "max_depth": 20, "min_samples_leaf": 1}


def resolve_max_features(max_features, dim: int) -> int:
    if max_features == "sqrt":
        return min(dim, math.ceil(math.sqrt(dim)))
    if max_features == "all" or max_features is None:
        return dim
    k = int(max_features)
    if not 1 <= k <= dim:
        raise ValueError(f"max_features {k} outside 1..{dim}")
    return k


def rf_vote(labels) -> str:
    """Plurality over tree labels; ties break toward T."""
    tally = Counter(labels)
    return LABEL_M if tally[LABEL_M] > tally[LABEL_T] else LABEL_T


class RandomForest:

    model_type = "rf"

    def __init__(self, num_trees: int = 100, bootstrap: bool = True,
                 max_features="sqrt", max_depth: int = 20,
                 min_samples_leaf: int = 1, seed: int = 0):
        if num_trees < 1:
            raise ValueError("num_trees must be >= 1")
        self.num_trees = num_trees
        self.bootstrap = bootstrap
        self.max_features = max_features
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.seed = seed
        self.space = None
        self.trees: list[Node] = []
        self.training_meta = {}

    def fit(self, data):
        self.space = check_training_data(data)
        X = int_matrix([vec for vec, _ in data])
        y = np.fromiter((1 if label == LABEL_M else 0 for _, label in data),
                        dtype=np.int64, count=len(data))
        n, dim = X.shape
        k = resolve_max_features(self.max_features, dim)

        self.trees = []
        for i in range(self.num_trees):
            rng = random.Random(f"{self.seed}:tree:{i}")
            if self.bootstrap:
                rows = np.fromiter((rng.randrange(n) for _ in range(n)),
                                   dtype=np.int64, count=n)
            else:
                rows = np.arange(n)
            if k >= dim:
                # all features: identical growth to a plain tree, and
                # the rng is left untouched
                sampler = None
            else:
                sampler = lambda rng=rng: sorted(rng.sample(range(dim), k))
            self.trees.append(grow_tree(X, y, rows, self.max_depth,
                                        self.min_samples_leaf, sampler))
        self.training_meta = {"n_train": n, "max_features": k}
        return self

    def _tree_label(self, node: Node, vec) -> str:
        while not node.is_leaf:
            value = vec.entries.get(node.feature, 0)
            node = node.left if value <= node.threshold else node.right
        return node.label

    def predict(self, vec) -> Prediction:
        check_space(self.space, vec)
        labels = [self._tree_label(root, vec) for root in self.trees]
        tally = Counter(labels)
        label = rf_vote(labels)
        # signed vote share, T-positive
        score = (tally[LABEL_T] - tally[LABEL_M]) / len(self.trees)
        return Prediction(label=label, score=score,
                          per_class={LABEL_M: tally[LABEL_M] / len(self.trees),
                                     LABEL_T: tally[LABEL_T] / len(self.trees)})

    def to_payload(self) -> dict:
        return {"num_trees": self.num_trees, "bootstrap": self.bootstrap,
                "max_features": self.max_features,
                "max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf,
                "seed": self.seed,
                "trees": [node_to_dict(t) for t in self.trees],
                "training_meta": self.training_meta}

    @classmethod
    def from_payload(cls, payload, space):
        model = cls(num_trees=payload["num_trees"],
                    bootstrap=payload["bootstrap"],
                    max_features=payload["max_features"],
                    max_depth=payload["max_depth"],
                    min_samples_leaf=payload["min_samples_leaf"],
                    seed=payload["seed"])
        model.space = space
        model.trees = [node_from_dict(t) for t in payload["trees"]]
        model.training_meta = payload.get("training_meta", {})
        return model
