"""Glossary keyword filtering.

A tweet is kept when any glossary keyword occurs in it. Matching is on
token boundaries over the raw lowercased text: tokens are maximal runs
of alphanumerics, so "mask" does not match inside "unmasked" but does
match "#mask", and "covid-19" matches the token pair ("covid", "19").
Multi-word keywords match as contiguous token subsequences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import Dataset, Glossary

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


def match_tokens(text: str) -> tuple[str, ...]:
    """Tokenize for keyword matching: lowercase alphanumeric runs."""
    return tuple(_TOKEN.findall(text.lower()))


@dataclass(frozen=True)
class MatchResult:
    """Keywords found in one tweet; origin is a theme name or "health"."""

    tweet_id: str
    matched_keywords: tuple[tuple[str, str], ...]

    @property
    def matched(self) -> bool:
        return bool(self.matched_keywords)


class KeywordMatcher:
    """Pre-tokenized glossary matcher, reusable across a corpus."""

    def __init__(self, glossary: Glossary):
        # (keyword tokens, keyword, origin), in glossary order
        self._entries = []
        for keyword, origin in glossary.keyword_origins():
            tokens = match_tokens(keyword)
            if tokens:
                self._entries.append((tokens, keyword, origin))

    def match(self, text: str) -> tuple[tuple[str, str], ...]:
        tokens = match_tokens(text)
        found = []
        for needle, keyword, origin in self._entries:
            n = len(needle)
            if n == 0 or n > len(tokens):
                continue
            if any(tokens[i:i + n] == needle
                   for i in range(len(tokens) - n + 1)):
                found.append((keyword, origin))
        return tuple(found)


def match_keywords(text: str, glossary: Glossary,
                   tweet_id: str = "") -> MatchResult:
    """Report every glossary keyword occurring in the text."""
    return MatchResult(tweet_id=tweet_id,
                       matched_keywords=KeywordMatcher(glossary).match(text))


@dataclass
class FilterReport:
    """Per-keyword tweet hit counts, in glossary order."""

    hits: dict[str, int] = field(default_factory=dict)
    origins: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, keyword: str) -> int:
        return self.hits[keyword]

    def rows(self):
        """(keyword, origin, hits) rows for the report CSV."""
        for keyword, count in self.hits.items():
            yield keyword, self.origins[keyword], count


def filter_corpus(dataset: Dataset,
                  glossary: Glossary) -> tuple[Dataset, FilterReport]:
    """Keep the records that match any glossary keyword, in order.

    The report counts each keyword once per matching tweet; every
    glossary keyword appears, zero-hit ones included.
    """
    report = FilterReport()
    for keyword, origin in glossary.keyword_origins():
        report.hits.setdefault(keyword, 0)
        report.origins.setdefault(keyword, origin)

    matcher = KeywordMatcher(glossary)
    kept = []
    for record in dataset.records:
        found = matcher.match(record.text)
        if not found:
            continue
        kept.append(record)
        for keyword in {kw for kw, _ in found}:
            report.hits[keyword] += 1
    return Dataset(records=tuple(kept),
                   provenance=dataset.provenance), report
