"""CART-style decision tree: binary splits on Gini impurity.

Split selection is exact. Weighted child impurity for a node of m rows
is the rational A / (n_l * n_r * m) with integer A, so candidates are
compared by integer cross-multiplication, never by float subtraction.
Ties go to the lowest feature index, then the lowest threshold, which
makes the search reproducible against an exhaustive reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import (LABEL_M, LABEL_T, Prediction, check_space,
                   check_training_data, int_matrix)

DEFAULTS = {"max_depth": 20, "min_samples_leaf": 1}

# int64 cross-multiplication is overflow-safe while n_l*n_r*m < 2^31;
# larger nodes take the plain-int path
_EXACT_VECTOR_LIMIT = 1200


@dataclass(frozen=True)
class SplitDecision:
    feature: int
    threshold: float
    # impurity decrease as an exact fraction: parent minus weighted child
    gain_num: int
    gain_den: int

    @property
    def gain(self) -> float:
        return self.gain_num / self.gain_den


def _weighted_gini_terms(m, n_l, a_l, a):
    """Integer numerator/denominator arrays of the weighted child Gini.

    m rows in the node, a of them class M; n_l, a_l are per-threshold
    left-side totals. Value = A/B with B = n_l * n_r * m.
    """
    n_r = m - n_l
    b_l = n_l - a_l
    a_r = a - a_l
    b_r = n_r - a_r
    A = (m * n_l * n_r
         - n_r * (a_l * a_l + b_l * b_l)
         - n_l * (a_r * a_r + b_r * b_r))
    B = n_l * n_r * m
    return A, B


def _argmin_fraction(A, B):
    """Index of the smallest A[i]/B[i]; lowest index on exact ties."""
    j = int(np.argmin(A / B))
    # everything at or below the float minimum, compared exactly
    candidates = np.nonzero(A * int(B[j]) <= int(A[j]) * B)[0]
    best = int(candidates[0])
    for i in map(int, candidates[1:]):
        if int(A[i]) * int(B[best]) < int(A[best]) * int(B[i]):
            best = i
    return best


def best_split(X, y, rows, features, min_samples_leaf=1):
    """The (feature, threshold) minimizing weighted child Gini, or None.

    X: int64 design matrix; y: 1 where the label is M; rows: node row
    indices; features: candidate feature indices in ascending order.
    Thresholds are midpoints of consecutive distinct observed values;
    a row goes right when value > threshold. Returns None when no
    candidate strictly reduces impurity.
    """
    m = int(rows.size)
    a = int(y[rows].sum())
    parent_num = m * m - a * a - (m - a) * (m - a)  # parent gini * m^2
    parent_den = m * m
    vector_ok = m <= _EXACT_VECTOR_LIMIT

    best = None  # (A, B, feature, threshold)
    y_rows = y[rows]
    for f in features:
        x = X[rows, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        cuts = np.nonzero(xs[1:] != xs[:-1])[0]
        if cuts.size == 0:
            continue
        n_l = cuts + 1
        if min_samples_leaf > 1:
            keep = ((n_l >= min_samples_leaf)
                    & (m - n_l >= min_samples_leaf))
            cuts, n_l = cuts[keep], n_l[keep]
            if cuts.size == 0:
                continue
        a_l = np.cumsum(y_rows[order])[cuts]
        thresholds = (xs[cuts] + xs[cuts + 1]) / 2.0

        if vector_ok:
            A, B = _weighted_gini_terms(m, n_l, a_l, a)
            k = _argmin_fraction(A, B)
            cand = (int(A[k]), int(B[k]), int(f), float(thresholds[k]))
        else:
            cand = None
            for i in range(cuts.size):
                A, B = _weighted_gini_terms(m, int(n_l[i]), int(a_l[i]), a)
                if cand is None or A * cand[1] < cand[0] * B:
                    cand = (A, B, int(f), float(thresholds[i]))
        if best is None or cand[0] * best[1] < best[0] * cand[1]:
            best = cand

    if best is None:
        return None
    A, B, f, t = best
    # require a strict impurity decrease: A/B < parent
    gain_num = parent_num * B - A * parent_den
    if gain_num <= 0:
        return None
    return SplitDecision(feature=f, threshold=t, gain_num=gain_num,
                         gain_den=parent_den * B)


@dataclass
class Node:
    """Internal node (feature/threshold set) or leaf (label set)."""

    counts: tuple[int, int]  # (M rows, T rows) reaching this node
    label: str | None = None
    feature: int | None = None
    threshold: float | None = None
    left: "Node | None" = None   # value <= threshold
    right: "Node | None" = None  # value > threshold

    @property
    def is_leaf(self) -> bool:
        return self.label is not None


def _leaf(counts) -> Node:
    m_count, t_count = counts
    return Node(counts=counts,
                label=LABEL_M if m_count > t_count else LABEL_T)


def grow_tree(X, y, rows, max_depth, min_samples_leaf,
              feature_sampler=None, depth=0) -> Node:
    """Recursive CART growth; feature_sampler picks candidate features
    per node (None means all features)."""
    m = int(rows.size)
    a = int(y[rows].sum())
    counts = (a, m - a)
    if depth >= max_depth or a == 0 or a == m:
        return _leaf(counts)
    if feature_sampler is None:
        features = range(X.shape[1])
    else:
        features = feature_sampler()
    split = best_split(X, y, rows, features, min_samples_leaf)
    if split is None:
        return _leaf(counts)
    go_left = X[rows, split.feature] <= split.threshold
    left = grow_tree(X, y, rows[go_left], max_depth, min_samples_leaf,
                     feature_sampler, depth + 1)
    right = grow_tree(X, y, rows[~go_left], max_depth, min_samples_leaf,
                      feature_sampler, depth + 1)
    return Node(counts=counts, feature=split.feature,
                threshold=split.threshold, left=left, right=right)


class DecisionTree:

    model_type = "dt"

    def __init__(self, max_depth: int = 20, min_samples_leaf: int = 1):
        if max_depth < 1 or min_samples_leaf < 1:
            raise ValueError("max_depth and min_samples_leaf must be >= 1")
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.space = None
        self.root = None
        self.training_meta = {}

    def fit(self, data):
        self.space = check_training_data(data)
        X = int_matrix([vec for vec, _ in data])
        y = np.fromiter((1 if label == LABEL_M else 0 for _, label in data),
                        dtype=np.int64, count=len(data))
        self.root = grow_tree(X, y, np.arange(len(data)), self.max_depth,
                              self.min_samples_leaf)
        self.training_meta = {"n_train": len(data),
                              "depth": tree_depth(self.root)}
        return self

    def predict(self, vec) -> Prediction:
        check_space(self.space, vec)
        node = self.root
        while not node.is_leaf:
            value = vec.entries.get(node.feature, 0)
            node = node.left if value <= node.threshold else node.right
        m_count, t_count = node.counts
        total = m_count + t_count
        # signed leaf purity, T-positive
        score = (t_count - m_count) / total
        return Prediction(label=node.label, score=score,
                          per_class={LABEL_M: m_count / total,
                                     LABEL_T: t_count / total})

    def to_payload(self) -> dict:
        return {"max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf,
                "root": node_to_dict(self.root),
                "training_meta": self.training_meta}

    @classmethod
    def from_payload(cls, payload, space):
        model = cls(max_depth=payload["max_depth"],
                    min_samples_leaf=payload["min_samples_leaf"])
        model.space = space
        model.root = node_from_dict(payload["root"])
        model.training_meta = payload.get("training_meta", {})
        return model


def tree_depth(node: Node) -> int:
    if node.is_leaf:
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def node_to_dict(node: Node) -> dict:
    if node.is_leaf:
        return {"counts": list(node.counts), "label": node.label}
    return {"counts": list(node.counts), "feature": node.feature,
            "threshold": node.threshold,
            "left": node_to_dict(node.left),
            "right": node_to_dict(node.right)}


def node_from_dict(obj: dict) -> Node:
    counts = (obj["counts"][0], obj["counts"][1])
    if "label" in obj:
        return Node(counts=counts, label=obj["label"])
    return Node(counts=counts, feature=obj["feature"],
                threshold=obj["threshold"],
                left=node_from_dict(obj["left"]),
                right=node_from_dict(obj["right"]))
