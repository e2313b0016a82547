"""Feature extraction: BoW counts, binary n-grams, and the train/test split.

Vocabularies are built from training documents only, in first-occurrence
order. Out-of-vocabulary tokens in later documents are ignored; smoothing
in the classifiers carries the unseen mass.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DegenerateDataError
from .preprocess import TokenSequence

NGRAM_SIZES = (1, 2, 3)


@dataclass(frozen=True)
class FeatureMethod:
    """Either "bow" (token counts) or "ngram" with n in {1,2,3} (binary)."""

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind == "bow":
            if self.n is not None:
                raise ValueError("bow takes no n")
        elif self.kind == "ngram":
            if self.n not in NGRAM_SIZES:
                raise ValueError(f"ngram n must be one of {NGRAM_SIZES}")
        else:
            raise ValueError(f"unknown feature kind {self.kind!r}")

    @property
    def name(self) -> str:
        if self.kind == "bow":
            return "bow"
        return {1: "unigram", 2: "bigram", 3: "trigram"}[self.n]


BOW = FeatureMethod("bow")
UNIGRAM = FeatureMethod("ngram", 1)
BIGRAM = FeatureMethod("ngram", 2)
TRIGRAM = FeatureMethod("ngram", 3)

METHODS = (BOW, UNIGRAM, BIGRAM, TRIGRAM)

_METHOD_NAMES = {m.name: m for m in METHODS}


def method_from_name(name: str) -> FeatureMethod:
    try:
        return _METHOD_NAMES[name.replace("-", "").lower()]
    except KeyError:
        raise ValueError(
            f"unknown method {name!r}, expected one of "
            f"{sorted(_METHOD_NAMES)}") from None


def extract_ngrams(tokens, n: int) -> list[tuple[str, ...]]:
    """The J - n + 1 contiguous n-token windows, in order ([] if J < n)."""
    if n not in NGRAM_SIZES:
        raise ValueError(f"n must be one of {NGRAM_SIZES}")
    tokens = list(tokens)
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def _doc_keys(tokens, method: FeatureMethod):
    """Vocabulary keys a document contributes under the method."""
    if method.kind == "bow":
        return list(tokens)
    return [" ".join(gram) for gram in extract_ngrams(tokens, method.n)]


@dataclass(frozen=True)
class FeatureSpace:
    """An ordered vocabulary with its inverse index."""

    method: FeatureMethod
    vocabulary: tuple[str, ...]
    index: dict[str, int] = field(repr=False)

    def __post_init__(self):
        if len(self.index) != len(self.vocabulary):
            raise ContractError("index and vocabulary sizes differ")

    def __len__(self) -> int:
        return len(self.vocabulary)


def build_feature_space(train_docs,
                        method: FeatureMethod) -> FeatureSpace:
    """Collect the unique keys of the training docs, first occurrence first."""
    vocabulary = []
    index = {}
    for doc in train_docs:
        for key in _doc_keys(doc.tokens, method):
            if key not in index:
                index[key] = len(vocabulary)
                vocabulary.append(key)
    if not vocabulary:
        raise DegenerateDataError(
            "no usable tokens in any training document")
    return FeatureSpace(method=method, vocabulary=tuple(vocabulary),
                        index=index)


@dataclass(frozen=True)
class FeatureVector:
    """Sparse vector over a FeatureSpace; missing positions are zero."""

    space: FeatureSpace = field(repr=False)
    entries: dict[int, int]

    def dense(self) -> np.ndarray:
        out = np.zeros(len(self.space))
        for pos, value in self.entries.items():
            out[pos] = value
        return out


def vectorize(doc: TokenSequence, space: FeatureSpace) -> FeatureVector:
    """BoW: in-vocabulary token counts. n-gram: presence flags (0/1)."""
    entries: dict[int, int] = {}
    if space.method.kind == "bow":
        for token, count in Counter(doc.tokens).items():
            pos = space.index.get(token)
            if pos is not None:
                entries[pos] = count
    else:
        for gram in extract_ngrams(doc.tokens, space.method.n):
            pos = space.index.get(" ".join(gram))
            if pos is not None:
                entries[pos] = 1
    return FeatureVector(space=space, entries=entries)


def dense_matrix(vectors) -> np.ndarray:
    """Stack sparse vectors into a dense (n, |vocabulary|) float array."""
    if not vectors:
        raise DegenerateDataError("no vectors to stack")
    space = vectors[0].space
    out = np.zeros((len(vectors), len(space)))
    for i, vec in enumerate(vectors):
        if vec.space is not space:
            raise ContractError("vectors span different feature spaces")
        for pos, value in vec.entries.items():
            out[i, pos] = value
    return out


@dataclass(frozen=True)
class SplitResult:
    """A seeded partition of labeled items into train and test."""

    train: tuple
    test: tuple
    seed: int


def label_counts(items) -> dict[str, int]:
    counts: dict[str, int] = {}
    for item in items:
        counts[item.label] = counts.get(item.label, 0) + 1
    return counts


def split_train_test(data, ratio: float, seed: int) -> SplitResult:
    """Shuffle under the seed and cut at floor(ratio * N)."""
    if not 0 < ratio < 1:
        raise ValueError(f"ratio must be in (0,1), got {ratio}")
    data = list(data)
    if len(data) < 2:
        raise DegenerateDataError("need at least 2 items to split")
    indices = list(range(len(data)))
    random.Random(seed).shuffle(indices)
    cut = math.floor(ratio * len(data))
    if cut == 0 or cut == len(data):
        raise DegenerateDataError(
            f"ratio {ratio} leaves an empty side for {len(data)} items")
    return SplitResult(
        train=tuple(data[i] for i in indices[:cut]),
        test=tuple(data[i] for i in indices[cut:]),
        seed=seed,
    )
