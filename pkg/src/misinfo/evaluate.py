"""Binary classification metrics and the model-by-method results grid.

Metrics follow the per-class formulation: precision, recall and F1 are
computed for M and for T separately; accuracy is the mean of the two
per-class accuracies (which coincide in the binary case) and Macro-F1
is the mean of the two F1 values.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

from .errors import ContractError
from .models.base import BINARY_LABELS, LABEL_M, LABEL_T

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts in the class-M view; the class-T view is its mirror."""

    tp_m: int
    fp_m: int
    fn_m: int
    tn_m: int

    @property
    def total(self) -> int:
        return self.tp_m + self.fp_m + self.fn_m + self.tn_m

    def class_counts(self, c: str) -> tuple[int, int, int, int]:
        """(tp, fp, fn, tn) with class c as positive."""
        if c == LABEL_M:
            return self.tp_m, self.fp_m, self.fn_m, self.tn_m
        if c == LABEL_T:
            return self.tn_m, self.fn_m, self.fp_m, self.tp_m
        raise ValueError(f"unknown class {c!r}")


@dataclass(frozen=True)
class EvalReport:
    per_class: dict[str, tuple[float, float, float]]  # c -> (p, r, f1)
    accuracy: float
    macro_f1: float
    support: dict[str, int]


def confusion(preds, golds) -> ConfusionMatrix:
    """Tally predictions against gold labels (M stored as positive)."""
    if len(preds) != len(golds):
        raise ContractError(
            f"{len(preds)} predictions for {len(golds)} gold labels")
    if not preds:
        raise ContractError("empty prediction list")
    tp = fp = fn = tn = 0
    for pred, gold in zip(preds, golds):
        if pred not in BINARY_LABELS or gold not in BINARY_LABELS:
            raise ContractError(f"non-binary label pair ({pred!r}, {gold!r})")
        if gold == LABEL_M:
            if pred == LABEL_M:
                tp += 1
            else:
                fn += 1
        else:
            if pred == LABEL_M:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp_m=tp, fp_m=fp, fn_m=fn, tn_m=tn)


def _ratio(num: float, den: float, what: str) -> float:
    if den == 0:
        log.warning("%s has zero denominator, reporting 0", what)
        return 0.0
    return num / den


def class_metrics(cm: ConfusionMatrix, c: str) -> tuple[float, float, float]:
    """(precision, recall, f1) for class c; 0 on zero denominators."""
    tp, fp, fn, _ = cm.class_counts(c)
    precision = _ratio(tp, tp + fp, f"precision[{c}]")
    recall = _ratio(tp, tp + fn, f"recall[{c}]")
    f1 = _ratio(2 * precision * recall, precision + recall, f"f1[{c}]")
    return precision, recall, f1


def macro_average(values) -> float:
    """Unweighted mean over per-class metric values."""
    values = list(values)
    return sum(values) / len(values)


def aggregate(cm: ConfusionMatrix) -> tuple[float, float]:
    """(accuracy, macro_f1): both are means over the two class views."""
    accs = []
    f1s = []
    for c in BINARY_LABELS:
        tp, _, _, tn = cm.class_counts(c)
        accs.append(_ratio(tp + tn, cm.total, f"accuracy[{c}]"))
        f1s.append(class_metrics(cm, c)[2])
    return macro_average(accs), macro_average(f1s)


def report_from_confusion(cm: ConfusionMatrix) -> EvalReport:
    accuracy, macro_f1 = aggregate(cm)
    return EvalReport(
        per_class={c: class_metrics(cm, c) for c in BINARY_LABELS},
        accuracy=accuracy,
        macro_f1=macro_f1,
        support={LABEL_M: cm.tp_m + cm.fn_m, LABEL_T: cm.fp_m + cm.tn_m},
    )


GRID_COLUMNS = ("model", "method", "p_m", "r_m", "f1_m", "p_t", "r_t",
                "f1_t", "accuracy", "macro_f1")


def _row_values(report: EvalReport | None) -> list[str]:
    if report is None:
        return ["error"] * 8
    p_m, r_m, f1_m = report.per_class[LABEL_M]
    p_t, r_t, f1_t = report.per_class[LABEL_T]
    three = [f"{v:.3f}" for v in (p_m, r_m, f1_m, p_t, r_t, f1_t)]
    return three + [f"{report.accuracy:.2f}", f"{report.macro_f1:.3f}"]


def render_grid(results) -> tuple[str, str]:
    """(aligned text table, CSV text) for {(model, method) -> EvalReport}.

    Failed cells (report None) render as "error". The text table drops
    the leading zero of 3-decimal metrics; the CSV keeps plain floats.
    """
    rows = []
    for (model, method), report in results.items():
        rows.append([model, method] + _row_values(report))

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(GRID_COLUMNS)
    writer.writerows(rows)
    csv_text = buf.getvalue()

    display = [list(GRID_COLUMNS)]
    for row in rows:
        # paper-style cells: 3-decimal metrics drop the leading zero,
        # the 2-decimal accuracy column keeps it
        styled = [v[1:] if v.startswith("0.") and len(v) == 5 else v
                  for v in row[2:]]
        display.append(row[:2] + styled)
    widths = [max(len(r[i]) for r in display) for i in range(len(GRID_COLUMNS))]
    lines = []
    for i, row in enumerate(display):
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n", csv_text
