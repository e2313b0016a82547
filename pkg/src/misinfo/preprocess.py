"""Text cleanup, tokenization, stopword removal and stemming.

Stage order is fixed: clean -> tokenize -> remove stopwords -> stem.
Stopwords are matched against unstemmed tokens so that stems like
"veri" cannot dodge the list.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from . import porter
from .corpus import TweetRecord, atomic_write
from .errors import FormatError
from .resources import default_stopword_paths

# URLs, including bare t.co paths and links truncated at end of tweet
_URL = re.compile(r"https?://\S*|\bt\.co/\S*|\bhtt\S*$")
_MENTION = re.compile(r"@\w+")
# punctuation and symbols; underscore counts as a separator too
_NON_WORD = re.compile(r"[^\w\s]|_")
_SPACES = re.compile(r"\s+")


def clean_text(raw: str) -> str:
    """Lowercase, drop URLs and @-mentions, turn punctuation to spaces."""
    s = raw.lower()
    s = _URL.sub(" ", s)
    s = _MENTION.sub(" ", s)
    s = _NON_WORD.sub(" ", s)
    return _SPACES.sub(" ", s).strip()


def tokenize(cleaned: str) -> list[str]:
    """Whitespace split, dropping single characters and digits-only tokens."""
    return [t for t in cleaned.split()
            if len(t) > 1 and not t.isdigit()]


@dataclass(frozen=True)
class StopwordSet:
    """English stopwords plus the corpus-specific trivial words."""

    english: frozenset[str]
    trivial: frozenset[str]

    @property
    def combined(self) -> frozenset[str]:
        return self.english | self.trivial


def _read_word_file(path) -> frozenset[str]:
    words = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            word = line.strip()
            if not word:
                continue
            if word != word.lower():
                raise FormatError(
                    f"{path} line {line_no}: stopword {word!r} not lowercase")
            words.append(word)
    if len(set(words)) != len(words):
        raise FormatError(f"{path}: duplicate stopwords")
    return frozenset(words)


def load_stopwords(english_path=None, trivial_path=None) -> StopwordSet:
    """Load stopword files (one word per line); bundled lists by default."""
    default_english, default_trivial = default_stopword_paths()
    return StopwordSet(
        english=_read_word_file(english_path or default_english),
        trivial=_read_word_file(trivial_path or default_trivial),
    )


def remove_stopwords(tokens: list[str], sw: StopwordSet) -> list[str]:
    combined = sw.combined
    return [t for t in tokens if t not in combined]


def stem_token(word: str) -> str:
    """Root form of one token."""
    return porter.stem(word)


@dataclass(frozen=True)
class TokenSequence:
    """A tweet reduced to its pipeline tokens, with an optional label."""

    tweet_id: str
    tokens: tuple[str, ...]
    label: str | None = None


def preprocess_tweet(t: TweetRecord, sw: StopwordSet,
                     label: str | None = None) -> TokenSequence:
    """Run the full clean/tokenize/stopword/stem pipeline on one tweet."""
    tokens = remove_stopwords(tokenize(clean_text(t.text)), sw)
    return TokenSequence(tweet_id=t.id,
                         tokens=tuple(stem_token(t) for t in tokens),
                         label=label)


def save_token_sequences(seqs, path) -> None:
    """Cache preprocessed tweets as JSONL {id, tokens, label?}."""
    def write(f):
        for seq in seqs:
            obj = {"id": seq.tweet_id, "tokens": list(seq.tokens)}
            if seq.label is not None:
                obj["label"] = seq.label
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")

    atomic_write(path, write)


def load_token_sequences(path) -> list[TokenSequence]:
    seqs = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(
                    f"{path} line {line_no}: bad json: {exc.msg}") from exc
            seqs.append(TokenSequence(tweet_id=obj["id"],
                                      tokens=tuple(obj["tokens"]),
                                      label=obj.get("label")))
    return seqs
