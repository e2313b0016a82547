"""Seeded synthetic labeled corpora.

Documents are nonsense-word sequences: each slot draws from the
document's class pool with probability `signal`, else from the shared
pool, so signal 0 is unlearnable and signal 1 is separable by
construction. Every text also embeds one glossary keyword, chosen
independently of the class, so keyword filtering keeps the corpus
without leaking labels. Pool words are built so their stems never
collide across pools, with each other's, or with keyword stems.
"""

from __future__ import annotations

import datetime
import json
import random
from dataclasses import dataclass

from . import porter
from .annotation import LabeledDataset
from .corpus import TweetRecord, atomic_write, load_glossary
from .filtering import match_tokens
from .preprocess import load_stopwords
from .resources import default_glossary_path

# the corpus window the defaults imitate
_DATE_START = datetime.date(2020, 2, 1)
_DATE_DAYS = 112  # through 2020-05-22

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"

MAX_TOKENS = 32  # keeps every text under the 280-char record limit


@dataclass(frozen=True)
class SynthSpec:
    seed: int = 42
    n_m: int = 210
    n_t: int = 314
    vocab_shared: int = 200
    vocab_m: int = 80
    vocab_t: int = 80
    signal: float = 0.7
    length_range: tuple[int, int] = (2, 32)

    def __post_init__(self):
        if min(self.n_m, self.n_t, self.vocab_shared, self.vocab_m,
               self.vocab_t) <= 0:
            raise ValueError("counts and pool sizes must be positive")
        if not 0.0 <= self.signal <= 1.0:
            raise ValueError("signal must be in [0, 1]")
        lo, hi = self.length_range
        if not 1 <= lo <= hi <= MAX_TOKENS:
            raise ValueError(
                f"length_range must satisfy 1 <= min <= max <= {MAX_TOKENS}")

    def to_json(self) -> dict:
        return {"seed": self.seed, "n_m": self.n_m, "n_t": self.n_t,
                "vocab_shared": self.vocab_shared, "vocab_m": self.vocab_m,
                "vocab_t": self.vocab_t, "signal": self.signal,
                "length_range": list(self.length_range)}


def _nonsense_word(rng: random.Random) -> str:
    return "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS)
                   for _ in range(rng.randint(2, 3)))


def _build_pools(spec: SynthSpec, keywords, stopwords):
    """Three stem-disjoint word pools, deterministic under the seed."""
    rng = random.Random(f"{spec.seed}:pools")
    used_stems = {porter.stem(tok)
                  for kw in keywords for tok in match_tokens(kw)}
    pools = []
    for size in (spec.vocab_shared, spec.vocab_m, spec.vocab_t):
        pool = []
        while len(pool) < size:
            word = _nonsense_word(rng)
            stem = porter.stem(word)
            if word in stopwords or stem in used_stems:
                continue
            used_stems.add(stem)
            pool.append(word)
        pools.append(pool)
    return pools


def generate(spec: SynthSpec) -> LabeledDataset:
    """Deterministic corpus of spec.n_m M-docs followed by spec.n_t T-docs."""
    glossary = load_glossary(default_glossary_path())
    keywords = list(dict.fromkeys(
        kw for kw, _ in glossary.keyword_origins()))
    stopwords = load_stopwords().combined
    shared, pool_m, pool_t = _build_pools(spec, keywords, stopwords)

    lo, hi = spec.length_range
    entries = []
    total = spec.n_m + spec.n_t
    for i in range(total):
        label = "M" if i < spec.n_m else "T"
        class_pool = pool_m if label == "M" else pool_t
        rng = random.Random(f"{spec.seed}:doc:{i}")
        length = rng.randint(lo, hi)
        tokens = [rng.choice(class_pool) if rng.random() < spec.signal
                  else rng.choice(shared)
                  for _ in range(length)]
        tokens.insert(rng.randrange(length + 1), rng.choice(keywords))
        date = _DATE_START + datetime.timedelta(
            days=rng.randrange(_DATE_DAYS))
        record = TweetRecord(id=f"synth-{i:04d}", text=" ".join(tokens),
                             date=date.isoformat())
        entries.append((record, label))
    return LabeledDataset.from_entries(entries)


def save_spec(spec: SynthSpec, path) -> None:
    atomic_write(path, lambda f: json.dump(spec.to_json(), f, indent=2))
