"""Annotator labels, majority voting, and finalization.

Labels live in an append-only CSV journal (tweet_id, annotator_id,
label, timestamp); the effective state is the latest record per
(tweet, annotator) pair, so an annotator can revise freely and a crash
loses at most the unflushed write (there are none: every append is
flushed and fsynced). Adjudications get their own sidecar journal.
"""

from __future__ import annotations

import csv
import datetime
import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Dataset, TweetRecord, atomic_write
from .errors import (AdjudicationError, FormatError, NotFoundError,
                     ValidationError)

log = logging.getLogger(__name__)

# T/M feed classification; I = incomplete, N = not health-related,
# U = unsure (an annotator state, never a finalized corpus label)
LABELS = ("T", "M", "I", "N", "U")

JOURNAL_FIELDS = ("tweet_id", "annotator_id", "label", "timestamp")
ADJUDICATION_FIELDS = ("tweet_id", "label", "timestamp")

STATUS_DECIDED = "decided"
STATUS_TIE = "tie"
STATUS_UNLABELED = "unlabeled"


def utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _parse_ts(ts: str) -> datetime.datetime:
    try:
        return datetime.datetime.fromisoformat(ts)
    except ValueError as exc:
        raise FormatError(f"bad timestamp {ts!r}") from exc


def check_label(label: str) -> str:
    if label not in LABELS:
        raise ValidationError(
            f"label must be one of {'/'.join(LABELS)}, got {label!r}")
    return label


@dataclass(frozen=True)
class VoteOutcome:
    """Majority-vote result for one tweet."""

    tweet_id: str
    decided: str | None
    tally: dict[str, int]
    status: str

    def to_json(self) -> dict:
        return {"tweet_id": self.tweet_id, "decided": self.decided,
                "tally": self.tally, "status": self.status}


def majority_vote(tally, tweet_id: str = "") -> VoteOutcome:
    """Strict plurality decides; equal top counts are a tie."""
    counts: dict[str, int] = {}
    for label in tally:
        counts[label] = counts.get(label, 0) + 1
    if not counts:
        return VoteOutcome(tweet_id=tweet_id, decided=None, tally={},
                           status=STATUS_UNLABELED)
    top = max(counts.values())
    leaders = [label for label, c in counts.items() if c == top]
    if len(leaders) == 1:
        return VoteOutcome(tweet_id=tweet_id, decided=leaders[0],
                           tally=counts, status=STATUS_DECIDED)
    return VoteOutcome(tweet_id=tweet_id, decided=None, tally=counts,
                       status=STATUS_TIE)


@dataclass(frozen=True)
class LabeledDataset:
    """Finalized tweets with one label each."""

    entries: tuple[tuple[TweetRecord, str], ...]
    class_counts: dict[str, int]

    @classmethod
    def from_entries(cls, entries) -> "LabeledDataset":
        entries = tuple(entries)
        counts = {label: 0 for label in LABELS}
        for _, label in entries:
            counts[label] += 1
        return cls(entries=entries, class_counts=counts)


@dataclass(frozen=True)
class AgreementReport:
    unanimous: dict[str, bool]
    strict_majority_rate: float
    pairwise: dict[tuple[str, str], float]

    def to_json(self) -> dict:
        return {
            "unanimous": self.unanimous,
            "strict_majority_rate": self.strict_majority_rate,
            "pairwise": [{"annotators": list(pair), "agreement": value}
                         for pair, value in sorted(self.pairwise.items())],
        }


class AnnotationStore:
    """Durable label store over one dataset.

    Thread-safe: writes serialize on a lock, reads take the lock long
    enough to snapshot. Replays existing journals on construction.
    """

    def __init__(self, dataset: Dataset, journal_path,
                 adjudication_path=None):
        self.dataset = dataset
        self._order = {r.id: i for i, r in enumerate(dataset.records)}
        self._records = {r.id: r for r in dataset.records}
        self.journal_path = Path(journal_path)
        self.adjudication_path = (
            Path(adjudication_path) if adjudication_path is not None
            else self.journal_path.with_suffix(
                self.journal_path.suffix + ".adjudications"))
        self._lock = threading.Lock()
        # (tweet_id, annotator_id) -> (label, timestamp)
        self._labels: dict[tuple[str, str], tuple[str, str]] = {}
        self._adjudications: dict[str, str] = {}
        self._journal_file = None
        self._adj_file = None
        self._replay()
        self._open_journals()

    # -- journal handling ------------------------------------------------

    def _replay(self) -> None:
        if self.journal_path.exists():
            with open(self.journal_path, encoding="utf-8", newline="") as f:
                for row_no, row in enumerate(csv.DictReader(f), start=2):
                    if None in row or any(row[k] is None
                                          for k in JOURNAL_FIELDS):
                        raise FormatError(
                            f"{self.journal_path} row {row_no}: bad shape")
                    self._apply(row["tweet_id"], row["annotator_id"],
                                check_label(row["label"]), row["timestamp"])
        if self.adjudication_path.exists():
            with open(self.adjudication_path, encoding="utf-8",
                      newline="") as f:
                for row in csv.DictReader(f):
                    self._adjudications[row["tweet_id"]] = check_label(
                        row["label"])

    def _open_journals(self) -> None:
        self.journal_path.parent.mkdir(parents=True, exist_ok=True)
        new = not self.journal_path.exists()
        self._journal_file = open(self.journal_path, "a", encoding="utf-8",
                                  newline="")
        self._journal_writer = csv.writer(self._journal_file)
        if new:
            self._journal_writer.writerow(JOURNAL_FIELDS)
            self._flush(self._journal_file)
        new_adj = not self.adjudication_path.exists()
        self._adj_file = open(self.adjudication_path, "a", encoding="utf-8",
                              newline="")
        self._adj_writer = csv.writer(self._adj_file)
        if new_adj:
            self._adj_writer.writerow(ADJUDICATION_FIELDS)
            self._flush(self._adj_file)

    @staticmethod
    def _flush(f) -> None:
        f.flush()
        os.fsync(f.fileno())

    def close(self) -> None:
        with self._lock:
            for f in (self._journal_file, self._adj_file):
                if f and not f.closed:
                    f.close()

    def _apply(self, tweet_id, annotator_id, label, timestamp) -> None:
        key = (tweet_id, annotator_id)
        current = self._labels.get(key)
        # later timestamp wins; equal timestamps favor the later write
        if current is None or _parse_ts(timestamp) >= _parse_ts(current[1]):
            self._labels[key] = (label, timestamp)

    # -- writes ------------------------------------------------------------

    def record_label(self, tweet_id: str, annotator_id: str, label: str,
                     timestamp: str | None = None) -> VoteOutcome:
        """Durably record one label and return the tweet's new outcome."""
        label = check_label(label)
        if not annotator_id:
            raise ValidationError("annotator_id must be non-empty")
        if tweet_id not in self._records:
            raise NotFoundError(f"unknown tweet id {tweet_id!r}")
        timestamp = timestamp or utc_now()
        with self._lock:
            self._journal_writer.writerow(
                [tweet_id, annotator_id, label, timestamp])
            self._flush(self._journal_file)
            self._apply(tweet_id, annotator_id, label, timestamp)
            return self._vote_locked(tweet_id)

    def record_adjudication(self, tweet_id: str, label: str,
                            timestamp: str | None = None) -> None:
        """Durably record a tie resolution (U cannot resolve a tie)."""
        label = check_label(label)
        if label == "U":
            raise ValidationError("adjudication must pick a definite label")
        if tweet_id not in self._records:
            raise NotFoundError(f"unknown tweet id {tweet_id!r}")
        timestamp = timestamp or utc_now()
        with self._lock:
            self._adj_writer.writerow([tweet_id, label, timestamp])
            self._flush(self._adj_file)
            self._adjudications[tweet_id] = label

    # -- reads -------------------------------------------------------------

    def labels_for(self, tweet_id: str) -> dict[str, str]:
        """annotator -> current label."""
        with self._lock:
            return {ann: lab for (tid, ann), (lab, _)
                    in self._labels.items() if tid == tweet_id}

    def _vote_locked(self, tweet_id: str) -> VoteOutcome:
        labels = [lab for (tid, _), (lab, _) in self._labels.items()
                  if tid == tweet_id]
        return majority_vote(labels, tweet_id=tweet_id)

    def vote(self, tweet_id: str) -> VoteOutcome:
        if tweet_id not in self._records:
            raise NotFoundError(f"unknown tweet id {tweet_id!r}")
        with self._lock:
            return self._vote_locked(tweet_id)

    def outcomes(self) -> dict[str, VoteOutcome]:
        """Outcome per dataset tweet, in dataset order."""
        with self._lock:
            per_tweet: dict[str, list[str]] = {
                r.id: [] for r in self.dataset.records}
            for (tid, _), (lab, _) in self._labels.items():
                per_tweet[tid].append(lab)
        return {tid: majority_vote(labs, tweet_id=tid)
                for tid, labs in per_tweet.items()}

    def adjudication_queue(self) -> list[VoteOutcome]:
        """Outcomes needing adjudication: ties, plus U pluralities
        (U never finalizes, so a U win still needs a human call)."""
        return [o for o in self.outcomes().values()
                if o.status == STATUS_TIE
                or (o.status == STATUS_DECIDED and o.decided == "U")]

    def next_for(self, annotator_id: str) -> TweetRecord | None:
        """First dataset tweet this annotator has not labeled yet."""
        if not annotator_id:
            raise ValidationError("annotator_id must be non-empty")
        with self._lock:
            done = {tid for (tid, ann) in self._labels
                    if ann == annotator_id}
        for record in self.dataset.records:
            if record.id not in done:
                return record
        return None

    def agreement(self) -> AgreementReport:
        with self._lock:
            snapshot = dict(self._labels)
        per_tweet: dict[str, dict[str, str]] = {}
        for (tid, ann), (lab, _) in snapshot.items():
            per_tweet.setdefault(tid, {})[ann] = lab

        unanimous = {}
        strict = 0
        for tid, by_ann in per_tweet.items():
            labels = list(by_ann.values())
            unanimous[tid] = len(set(labels)) == 1
            if majority_vote(labels).status == STATUS_DECIDED:
                strict += 1
        rate = strict / len(per_tweet) if per_tweet else 0.0

        annotators = sorted({ann for _, ann in snapshot})
        pairwise = {}
        for i, a in enumerate(annotators):
            for b in annotators[i + 1:]:
                both = [tid for tid, by_ann in per_tweet.items()
                        if a in by_ann and b in by_ann]
                if not both:
                    continue
                same = sum(1 for tid in both
                           if per_tweet[tid][a] == per_tweet[tid][b])
                pairwise[(a, b)] = same / len(both)
        return AgreementReport(unanimous=unanimous,
                               strict_majority_rate=rate,
                               pairwise=pairwise)

    # -- finalization --------------------------------------------------

    def unannotated_ids(self) -> list[str]:
        with self._lock:
            labeled = {tid for tid, _ in self._labels}
        return [r.id for r in self.dataset.records if r.id not in labeled]

    def finalize(self, adjudications: dict[str, str] | None = None
                 ) -> LabeledDataset:
        """Resolve every tweet to one label.

        Majority label where one exists; adjudicated label for ties and
        U pluralities. Unresolved ties raise; unannotated tweets are
        skipped with a warning.
        """
        merged = dict(self._adjudications)
        for tid, label in (adjudications or {}).items():
            if tid not in self._records:
                raise NotFoundError(f"unknown tweet id {tid!r}")
            if check_label(label) == "U":
                raise ValidationError(
                    "adjudication must pick a definite label")
            merged[tid] = label

        entries = []
        unresolved = []
        skipped = 0
        outcomes = self.outcomes()
        for record in self.dataset.records:
            outcome = outcomes[record.id]
            if outcome.status == STATUS_UNLABELED:
                skipped += 1
                continue
            needs_call = (outcome.status == STATUS_TIE
                          or outcome.decided == "U")
            if needs_call:
                if record.id not in merged:
                    unresolved.append(record.id)
                    continue
                entries.append((record, merged[record.id]))
            else:
                entries.append((record, outcome.decided))
        if unresolved:
            raise AdjudicationError(unresolved)
        if skipped:
            log.warning("finalize skipped %d tweets with no annotations",
                        skipped)
        return LabeledDataset.from_entries(entries)


def extract_binary(ld: LabeledDataset) -> tuple[Dataset, Dataset]:
    """(D_M, D_T): the M- and T-labeled tweets, order preserved."""
    d_m = tuple(rec for rec, label in ld.entries if label == "M")
    d_t = tuple(rec for rec, label in ld.entries if label == "T")
    return Dataset(records=d_m), Dataset(records=d_t)


def save_labeled(ld: LabeledDataset, path) -> None:
    """Labeled corpus as JSONL {id, text, date?, label}."""
    def write(f):
        for record, label in ld.entries:
            obj = {"id": record.id, "text": record.text}
            if record.date is not None:
                obj["date"] = record.date
            obj["label"] = label
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")

    atomic_write(path, write)


def load_labeled(path) -> LabeledDataset:
    entries = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(
                    f"{path} line {line_no}: bad json: {exc.msg}") from exc
            try:
                record = TweetRecord(id=str(obj["id"]), text=obj["text"],
                                     date=obj.get("date"))
                label = check_label(obj["label"])
            except KeyError as exc:
                raise FormatError(
                    f"{path} line {line_no}: missing field {exc}") from exc
            entries.append((record, label))
    return LabeledDataset.from_entries(entries)
