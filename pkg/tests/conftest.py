"""Shared builders for the test suite."""

from __future__ import annotations

from misinfo.corpus import Dataset, TweetRecord
from misinfo.features import build_feature_space, vectorize
from misinfo.preprocess import TokenSequence


def seq(tokens, label=None, doc_id="d0") -> TokenSequence:
    return TokenSequence(tweet_id=doc_id, tokens=tuple(tokens), label=label)


def seqs(docs):
    """docs: list of (tokens, label) -> TokenSequence list with ids d0.."""
    return [seq(tokens, label, f"d{i}")
            for i, (tokens, label) in enumerate(docs)]


def token_data(docs, method):
    """Build (space, [(vector, label)]) straight from (tokens, label) pairs."""
    documents = seqs(docs)
    space = build_feature_space(documents, method)
    return space, [(vectorize(s, space), s.label) for s in documents]


def tweets(texts, prefix="t"):
    return Dataset(records=tuple(
        TweetRecord(id=f"{prefix}{i}", text=text)
        for i, text in enumerate(texts)))
