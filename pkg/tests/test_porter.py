"""Stemmer checks against a frozen word/stem fixture table."""

from __future__ import annotations

import string
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from misinfo.porter import stem

FIXTURE = Path(__file__).parent / "data" / "stems.tsv"


def fixture_pairs():
    pairs = []
    for line in FIXTURE.read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        word, expected = line.split("\t")
        pairs.append((word, expected))
    return pairs


@pytest.mark.parametrize("word,expected", fixture_pairs())
def test_fixture_table(word, expected):
    assert stem(word) == expected


def test_plural_and_suffix_families():
    assert stem("caresses") == "caress"
    assert stem("ponies") == "poni"
    assert stem("cats") == "cat"
    assert stem("feed") == "feed"
    assert stem("plastered") == "plaster"
    assert stem("motoring") == "motor"
    assert stem("relational") == "relat"
    assert stem("conflated") == "conflat"
    assert stem("troubled") == "troubl"
    assert stem("vietnamization") == "vietnam"


def test_domain_words():
    # the shapes the rest of the pipeline leans on
    assert stem("vaccines") == "vaccin"
    assert stem("vaccination") == "vaccin"
    assert stem("lives") == "live"
    assert stem("masks") == "mask"


def test_y_as_vowel_rules():
    assert stem("sky") == "sky"
    assert stem("happy") == "happi"
    assert stem("crying") == "cry"


def test_short_words_pass_mostly_unchanged():
    assert stem("be") == "be"
    assert stem("ox") == "ox"
    assert stem("a") == "a"


@given(st.text(alphabet=string.ascii_lowercase, min_size=1, max_size=20))
def test_never_grows_and_stays_lowercase(word):
    out = stem(word)
    assert len(out) <= len(word)
    assert out == out.lower()


@given(st.text(alphabet=string.ascii_lowercase, min_size=1, max_size=12))
def test_deterministic(word):
    assert stem(word) == stem(word)
