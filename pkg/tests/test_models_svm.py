from __future__ import annotations

import numpy as np
import pytest

from misinfo.features import UNIGRAM, FeatureVector, build_feature_space, \
    vectorize
from misinfo.models.svm import LinearSVM, svm_objective, svm_update
from misinfo.preprocess import load_token_sequences
from misinfo.resources import separable_fixture_path
from conftest import seq, token_data


def fixture_data():
    docs = load_token_sequences(separable_fixture_path())
    space = build_feature_space(docs, UNIGRAM)
    return space, [(vectorize(d, space), d.label) for d in docs]


def test_update_margin_met_only_shrinks():
    space, data = token_data([(("a",), "T"), (("b",), "M")], UNIGRAM)
    big = FeatureVector(space=space, entries={0: 3})  # margin 3 with w below
    w, b = svm_update([1.0, 0.0], 0.0, (big, "T"), step_index=4, lam=0.5)
    assert w.tolist() == [0.75, 0.0]  # times (1 - 1/4), no hinge term
    assert b == 0.0


def test_update_violation_adds_scaled_example():
    space, data = token_data([(("a", "b"), "T")], UNIGRAM)
    x = FeatureVector(space=space, entries={0: 1, 1: 2})
    t, lam = 2, 0.5
    w, b = svm_update([0.0, 0.0], 0.0, (x, "M"), step_index=t, lam=lam)
    eta = 1 / (lam * t)
    assert w.tolist() == [-eta * 1, -eta * 2]  # y = -1 for M
    assert b == -eta


def test_margin_checked_before_shrinkage():
    # pre-shrink margin is exactly 1; shrinking first would push it
    # under 1 and wrongly trigger the hinge term
    space, _ = token_data([(("a",), "T")], UNIGRAM)
    x = FeatureVector(space=space, entries={0: 1})
    w, b = svm_update([1.0], 0.0, (x, "T"), step_index=2, lam=1.0)
    assert w.tolist() == [0.5]
    assert b == 0.0


def test_objective_formula():
    w = np.array([1.0, -1.0])
    X = np.array([[1.0, 0.0], [0.0, 1.0]])
    y = np.array([1.0, 1.0])
    # margins 1 and -1, hinges 0 and 2, mean 1; reg = 0.1/2 * 2
    assert svm_objective(w, 0.0, X, y, 0.1) == pytest.approx(1.1)


def test_separable_fixture_reaches_perfect_training_accuracy():
    space, data = fixture_data()
    model = LinearSVM(seed=42).fit(data)
    assert all(model.predict(v).label == lab for v, lab in data)
    objectives = model.training_meta["objectives"]
    assert objectives[-1] < objectives[0]


def test_positive_margin_means_t():
    space, data = fixture_data()
    model = LinearSVM(seed=0).fit(data)
    for v, lab in data:
        score = model.decision(v)
        assert (score >= 0) == (lab == "T")


def test_seeded_determinism_and_round_trip():
    space, data = fixture_data()
    a = LinearSVM(seed=9).fit(data)
    b = LinearSVM(seed=9).fit(data)
    assert a.weights.tolist() == b.weights.tolist()
    assert a.bias == b.bias
    clone = LinearSVM.from_payload(a.to_payload(), space)
    for v, _ in data:
        assert clone.predict(v) == a.predict(v)


def test_hyperparameter_validation():
    with pytest.raises(ValueError):
        LinearSVM(lam=0)
    with pytest.raises(ValueError):
        LinearSVM(epochs=0)
