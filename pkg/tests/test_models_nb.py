"""Naive Bayes against a brute-force smoothed-posterior oracle."""

from __future__ import annotations

import math
import random

import pytest

from misinfo.errors import DegenerateDataError
from misinfo.features import BOW, UNIGRAM, FeatureVector, vectorize
from misinfo.models.naive_bayes import NaiveBayes, nb_log_posterior
from conftest import seq, token_data


def oracle_posterior(rows, labels, alpha, event_model, query):
    """Hand enumeration: rows are dense count lists, query a dense list."""
    dim = len(rows[0])
    out = {}
    for c in ("M", "T"):
        idx = [i for i, lab in enumerate(labels) if lab == c]
        lp = math.log(len(idx) / len(labels))
        if event_model == "multinomial":
            counts = [sum(rows[i][f] for i in idx) for f in range(dim)]
            total = sum(counts)
            for f in range(dim):
                if query[f]:
                    theta = (counts[f] + alpha) / (total + alpha * dim)
                    lp += query[f] * math.log(theta)
        else:
            n_c = len(idx)
            for f in range(dim):
                df = sum(1 for i in idx if rows[i][f] > 0)
                theta = (df + alpha) / (n_c + 2 * alpha)
                lp += math.log(theta if query[f] else 1 - theta)
        out[c] = lp
    return out


def fit_on_rows(rows, labels, event_model):
    docs = [(tuple(f"w{f}" for f in range(len(row)) for _ in range(row[f])),
             lab) for row, lab in zip(rows, labels)]
    # force every feature into the vocabulary via a probe doc pair
    vocab_doc = tuple(f"w{f}" for f in range(len(rows[0])))
    space_docs = [(vocab_doc, labels[0])] + docs
    method = BOW if event_model == "multinomial" else UNIGRAM
    space, _ = token_data(space_docs, method)
    data = []
    for row, lab in zip(rows, labels):
        entries = {f: v for f, v in enumerate(row) if v}
        data.append((FeatureVector(space=space, entries=entries), lab))
    model = NaiveBayes(event_model=event_model).fit(data)
    return model, space


@pytest.mark.parametrize("event_model", ["multinomial", "bernoulli"])
def test_matches_enumeration_oracle(event_model):
    rng = random.Random(2024)
    for trial in range(150):
        dim = rng.randint(1, 3)
        n = rng.randint(2, 6)
        while True:
            labels = [rng.choice("MT") for _ in range(n)]
            if len(set(labels)) == 2:
                break
        rows = [[rng.randint(0, 3) for _ in range(dim)] for _ in range(n)]
        model, space = fit_on_rows(rows, labels, event_model)
        for _ in range(4):
            query = [rng.randint(0, 3) for _ in range(dim)]
            if event_model == "bernoulli":
                query = [min(q, 1) for q in query]
            vec = FeatureVector(space=space,
                                entries={f: v for f, v in enumerate(query)
                                         if v})
            got = nb_log_posterior(model, vec)
            want = oracle_posterior(rows, labels, 1.0, event_model, query)
            for c in ("M", "T"):
                assert got[c] == pytest.approx(want[c], abs=1e-9), \
                    (trial, event_model, rows, labels, query)


def test_single_token_doc_frequency_smoothing():
    # one M doc containing x, one T doc without it:
    # P(x|M) = (1+1)/(1+2), P(x|T) = (0+1)/(1+2)
    space, data = token_data([(("x",), "M"), (("y",), "T")], UNIGRAM)
    model = NaiveBayes().fit(data)
    pos = space.index["x"]
    assert math.exp(model.log_theta["M"][pos]) == pytest.approx(2 / 3)
    assert math.exp(model.log_theta["T"][pos]) == pytest.approx(1 / 3)
    assert model.event_model == "bernoulli"


def test_priors_are_class_frequencies():
    space, data = token_data(
        [(("a",), "M"), (("b",), "M"), (("a",), "T"), (("c",), "T")], BOW)
    model = NaiveBayes().fit(data)
    assert math.exp(model.log_prior["M"]) == pytest.approx(0.5)
    assert math.exp(model.log_prior["T"]) == pytest.approx(0.5)
    assert model.event_model == "multinomial"


def test_class_exclusive_token_dominates():
    space, data = token_data(
        [(("bad", "x"), "M"), (("bad", "y"), "M"),
         (("good", "x"), "T"), (("good", "y"), "T")], BOW)
    model = NaiveBayes().fit(data)
    assert model.predict(vectorize(seq(["bad"]), space)).label == "M"
    assert model.predict(vectorize(seq(["good"]), space)).label == "T"


def test_symmetric_stats_tie_goes_to_t():
    space, data = token_data([(("a",), "M"), (("a",), "T")], BOW)
    model = NaiveBayes().fit(data)
    pred = model.predict(vectorize(seq(["a"]), space))
    post = nb_log_posterior(model, vectorize(seq(["a"]), space))
    assert post["M"] == pytest.approx(post["T"])
    assert pred.label == "T"


def test_multinomial_counts_weight_multiplicatively():
    space, data = token_data([(("a", "a", "b"), "M"), (("b",), "T")], BOW)
    model = NaiveBayes().fit(data)
    one = nb_log_posterior(
        model, FeatureVector(space=space, entries={space.index["a"]: 1}))
    two = nb_log_posterior(
        model, FeatureVector(space=space, entries={space.index["a"]: 2}))
    base = nb_log_posterior(model, FeatureVector(space=space, entries={}))
    for c in ("M", "T"):
        step = one[c] - base[c]
        assert two[c] - base[c] == pytest.approx(2 * step)


def test_bernoulli_theta_pairs_sum_to_one():
    space, data = token_data(
        [(("a", "b"), "M"), (("b",), "T"), (("a",), "T")], UNIGRAM)
    model = NaiveBayes().fit(data)
    for c in ("M", "T"):
        for pos in range(len(space)):
            theta = math.exp(model.log_theta[c][pos])
            comp = math.exp(model.log_one_minus_theta[c][pos])
            assert 0 < theta < 1
            assert theta + comp == pytest.approx(1.0)


def test_single_class_training_rejected():
    _, data = token_data([(("a",), "M"), (("b",), "M")], BOW)
    with pytest.raises(DegenerateDataError):
        NaiveBayes().fit(data)


def test_payload_round_trip():
    space, data = token_data(
        [(("a", "b"), "M"), (("b", "c"), "T"), (("a",), "M")], BOW)
    model = NaiveBayes().fit(data)
    clone = NaiveBayes.from_payload(model.to_payload(), space)
    for probe in (["a"], ["b", "c"], ["c", "c", "a"], []):
        v = vectorize(seq(probe), space)
        assert nb_log_posterior(clone, v) == nb_log_posterior(model, v)


def test_hyperparameter_validation():
    with pytest.raises(ValueError):
        NaiveBayes(alpha=0)
    with pytest.raises(ValueError):
        NaiveBayes(event_model="gaussian")
