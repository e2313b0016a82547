from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from misinfo.errors import ContractError, DegenerateDataError
from misinfo.features import (BIGRAM, BOW, TRIGRAM, UNIGRAM, FeatureMethod,
                              build_feature_space, dense_matrix, extract_ngrams,
                              label_counts, method_from_name, split_train_test,
                              vectorize)
from conftest import seq, seqs

words = st.text(alphabet="abcdef", min_size=1, max_size=4)


@given(st.lists(words, max_size=40), st.sampled_from([1, 2, 3]))
def test_ngram_count_law(tokens, n):
    grams = extract_ngrams(tokens, n)
    assert len(grams) == max(0, len(tokens) - n + 1)


def test_ngram_windows_in_order():
    assert extract_ngrams(["a", "b", "c"], 2) == [("a", "b"), ("b", "c")]
    assert extract_ngrams(["a"], 3) == []
    with pytest.raises(ValueError):
        extract_ngrams(["a"], 4)


def test_method_names():
    assert method_from_name("bow") is BOW
    assert method_from_name("Uni-Gram") is UNIGRAM
    assert method_from_name("bigram") is BIGRAM
    assert method_from_name("trigram") is TRIGRAM
    with pytest.raises(ValueError):
        method_from_name("tfidf")
    with pytest.raises(ValueError):
        FeatureMethod("ngram", 4)
    with pytest.raises(ValueError):
        FeatureMethod("bow", 2)


def test_vocabulary_first_occurrence_order():
    docs = seqs([(("b", "a", "b"), None), (("c", "a"), None)])
    space = build_feature_space(docs, BOW)
    assert space.vocabulary == ("b", "a", "c")
    space2 = build_feature_space(docs, BIGRAM)
    assert space2.vocabulary == ("b a", "a b", "c a")


def test_empty_training_vocabulary_is_degenerate():
    with pytest.raises(DegenerateDataError):
        build_feature_space(seqs([((), None)]), BOW)


@given(st.lists(words, min_size=1, max_size=30),
       st.lists(words, max_size=30))
def test_bow_counts_match_counter_oracle(train_tokens, doc_tokens):
    space = build_feature_space([seq(train_tokens)], BOW)
    v = vectorize(seq(doc_tokens), space)
    expected = Counter(t for t in doc_tokens if t in space.index)
    assert {space.vocabulary[p]: c for p, c in v.entries.items()} == \
        dict(expected)


def test_ngram_vectors_are_binary():
    space = build_feature_space([seq(["a", "b", "a", "b"])], BIGRAM)
    v = vectorize(seq(["a", "b", "a", "b", "a"]), space)
    assert set(v.entries.values()) == {1}  # repeated gram stays 1


def test_out_of_vocabulary_ignored():
    space = build_feature_space([seq(["a", "b"])], BOW)
    v = vectorize(seq(["a", "zzz"]), space)
    assert v.entries == {space.index["a"]: 1}


def test_dense_and_matrix():
    space = build_feature_space([seq(["a", "b", "c"])], BOW)
    v1 = vectorize(seq(["a", "a", "c"]), space)
    v2 = vectorize(seq(["b"]), space)
    assert v1.dense().tolist() == [2.0, 0.0, 1.0]
    assert dense_matrix([v1, v2]).tolist() == [[2, 0, 1], [0, 1, 0]]


def test_matrix_rejects_mixed_spaces():
    s1 = build_feature_space([seq(["a"])], BOW)
    s2 = build_feature_space([seq(["a"])], BOW)
    with pytest.raises(ContractError):
        dense_matrix([vectorize(seq(["a"]), s1), vectorize(seq(["a"]), s2)])


def test_split_uses_floor_cut():
    data = seqs([(("w",), "T")] * 524)
    out = split_train_test(data, 0.8, seed=42)
    assert (len(out.train), len(out.test)) == (419, 105)


def test_split_is_seeded_partition():
    data = seqs([((f"w{i}",), "T") for i in range(50)])
    a = split_train_test(data, 0.8, seed=7)
    b = split_train_test(data, 0.8, seed=7)
    c = split_train_test(data, 0.8, seed=8)
    assert a.train == b.train and a.test == b.test
    assert a.train != c.train
    assert sorted(d.tweet_id for d in a.train + a.test) == \
        sorted(d.tweet_id for d in data)


def test_split_degenerate_inputs():
    data = seqs([(("w",), "T")] * 3)
    with pytest.raises(ValueError):
        split_train_test(data, 1.0, seed=1)
    with pytest.raises(DegenerateDataError):
        split_train_test(data[:1], 0.8, seed=1)
    with pytest.raises(DegenerateDataError):
        split_train_test(data, 0.1, seed=1)  # floor(0.3) empties train


def test_label_counts():
    data = seqs([(("w",), "T"), (("w",), "M"), (("w",), "T")])
    assert label_counts(data) == {"T": 2, "M": 1}
