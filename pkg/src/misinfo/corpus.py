"""Tweet datasets and the theme/keyword glossary.

Loading is forgiving: rows that violate record invariants are dropped and
counted in a LoadReport instead of aborting, so large dirty dumps still
load. Saving is atomic (write-temp-then-rename).
"""

from __future__ import annotations

import csv
import datetime
import json
import logging
import os
import tempfile
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError, SchemaError

log = logging.getLogger(__name__)

MAX_TWEET_CHARS = 280

FORMATS = ("jsonl", "csv")


@dataclass(frozen=True)
class TweetRecord:
    """One tweet: opaque id, raw text (<= 280 chars), optional ISO date."""

    id: str
    text: str
    date: str | None = None


@dataclass(frozen=True)
class Dataset:
    """Ordered, id-unique collection of tweets."""

    records: tuple[TweetRecord, ...]
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass
class LoadReport:
    """Outcome of a load: how many rows parsed, how many were rejected."""

    total_rows: int = 0
    loaded: int = 0
    rejected: int = 0
    diagnostics: list[str] = field(default_factory=list)

    def reject(self, line_no: int, reason: str) -> None:
        self.rejected += 1
        self.diagnostics.append(f"line {line_no}: {reason}")


@dataclass(frozen=True)
class Glossary:
    """Theme keyword lists plus the flat health-keyword list (all lowercase)."""

    themes: tuple[tuple[str, tuple[str, ...]], ...]
    health_keywords: tuple[str, ...]

    def keyword_origins(self):
        """Yield every (keyword, origin) pair; origin is the theme name or
        "health" for the flat list."""
        for name, keywords in self.themes:
            for kw in keywords:
                yield kw, name
        for kw in self.health_keywords:
            yield kw, "health"


def _validate_row(tweet_id, text, date):
    """Return a rejection reason, or None if the row is a valid record."""
    if not isinstance(tweet_id, str) or not tweet_id:
        return "missing or empty id"
    if not isinstance(text, str):
        return "text is not a string"
    if not text.strip():
        return "text empty after trimming"
    if len(text) > MAX_TWEET_CHARS:
        return f"text length {len(text)} exceeds {MAX_TWEET_CHARS}"
    if date is not None:
        try:
            datetime.date.fromisoformat(date)
        except (TypeError, ValueError):
            return f"date {date!r} is not YYYY-MM-DD"
    return None


def _coerce_id(value):
    if isinstance(value, int):
        return str(value)
    return value


def load_tweets(path, fmt: str) -> tuple[Dataset, LoadReport]:
    """Load a tweet dataset from a jsonl or csv file.

    Invalid rows are skipped with a line-number diagnostic; if more than
    half the rows are malformed the whole file is rejected.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    path = Path(path)
    report = LoadReport()
    records = []
    seen_ids = set()

    def consider(line_no, tweet_id, text, date):
        report.total_rows += 1
        tweet_id = _coerce_id(tweet_id)
        reason = _validate_row(tweet_id, text, date)
        if reason is None and tweet_id in seen_ids:
            reason = f"duplicate id {tweet_id!r}"
        if reason is not None:
            report.reject(line_no, reason)
            return
        seen_ids.add(tweet_id)
        records.append(TweetRecord(id=tweet_id, text=text, date=date))
        report.loaded += 1

    try:
        if fmt == "jsonl":
            with open(path, encoding="utf-8") as f:
                for line_no, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        obj = json.loads(line)
                    except json.JSONDecodeError as exc:
                        report.total_rows += 1
                        report.reject(line_no, f"bad json: {exc.msg}")
                        continue
                    if not isinstance(obj, dict):
                        report.total_rows += 1
                        report.reject(line_no, "row is not an object")
                        continue
                    consider(line_no, obj.get("id"), obj.get("text"),
                             obj.get("date"))
        else:
            with open(path, encoding="utf-8", newline="") as f:
                reader = csv.DictReader(f)
                if reader.fieldnames is None or not {"id", "text"} <= set(
                        reader.fieldnames):
                    raise FormatError(
                        f"{path}: csv header must include id,text")
                for line_no, row in enumerate(reader, start=2):
                    date = row.get("date") or None
                    consider(line_no, row.get("id"), row.get("text"), date)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc

    if report.total_rows and report.rejected * 2 > report.total_rows:
        raise FormatError(
            f"{path}: {report.rejected} of {report.total_rows} rows malformed")
    if report.rejected:
        log.warning("%s: dropped %d of %d rows", path, report.rejected,
                    report.total_rows)
    return Dataset(records=tuple(records), provenance=str(path)), report


def normalize_text_key(text: str) -> str:
    """Dedup key: Unicode NFC normalization plus whitespace trim."""
    return unicodedata.normalize("NFC", text).strip()


def dedup(dataset: Dataset) -> Dataset:
    """Keep the first record for each distinct (normalized) text."""
    seen = set()
    kept = []
    for record in dataset.records:
        key = normalize_text_key(record.text)
        if key in seen:
            continue
        seen.add(key)
        kept.append(record)
    return Dataset(records=tuple(kept), provenance=dataset.provenance)


def load_glossary(path) -> Glossary:
    """Load and validate a glossary file (JSON with themes + health_keywords)."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as exc:
        raise SchemaError(f"cannot read glossary {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"glossary {path} is not valid JSON: {exc}") from exc

    if not isinstance(doc, dict) or "themes" not in doc or (
            "health_keywords" not in doc):
        raise SchemaError(
            f"glossary {path} must define 'themes' and 'health_keywords'")

    def clean_keyword(kw, where):
        if not isinstance(kw, str) or not kw.strip():
            raise SchemaError(f"glossary {path}: empty keyword in {where}")
        return kw.strip().lower()

    themes = []
    for theme in doc["themes"]:
        if not isinstance(theme, dict) or "name" not in theme or (
                "keywords" not in theme):
            raise SchemaError(
                f"glossary {path}: each theme needs 'name' and 'keywords'")
        name = theme["name"]
        keywords = [clean_keyword(kw, f"theme {name!r}")
                    for kw in theme["keywords"]]
        if len(set(keywords)) != len(keywords):
            raise SchemaError(
                f"glossary {path}: duplicate keyword in theme {name!r}")
        themes.append((name, tuple(keywords)))

    health = [clean_keyword(kw, "health_keywords")
              for kw in doc["health_keywords"]]
    return Glossary(themes=tuple(themes), health_keywords=tuple(health))


def atomic_write(path, write_fn) -> None:
    """Write a file atomically: write_fn(file) runs on a temp file which is
    then renamed over the destination."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            write_fn(f)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save_dataset(dataset: Dataset, path, fmt: str) -> None:
    """Persist a dataset so load_tweets reproduces it record-for-record."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")

    if fmt == "jsonl":
        def write(f):
            for r in dataset.records:
                obj = {"id": r.id, "text": r.text}
                if r.date is not None:
                    obj["date"] = r.date
                f.write(json.dumps(obj, ensure_ascii=False) + "\n")
    else:
        def write(f):
            writer = csv.writer(f)
            writer.writerow(["id", "text", "date"])
            for r in dataset.records:
                writer.writerow([r.id, r.text, r.date or ""])

    atomic_write(path, write)
