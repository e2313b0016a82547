/**
 * View-free annotation logic: keyboard map, tally arithmetic, and the
 * majority rule. The vote here mirrors the service rule exactly so tests
 * can use it as an oracle and the dashboard can explain an outcome
 * without another round trip.
 */

import type { Label, SessionSummary, VoteStatus } from "./api.js";

export const KEY_LABELS: Record<string, Label> = {
  "1": "T",
  "2": "M",
  "3": "I",
  "4": "N",
  "5": "U",
};

export const LABEL_NAMES: Record<Label, string> = {
  T: "true",
  M: "misinformation",
  I: "irrelevant",
  N: "news mention",
  U: "unclear",
};

export interface Vote {
  status: VoteStatus;
  decided: Label | null;
  tally: Record<string, number>;
}

/** Strict majority of the submitted labels; any top-count tie is a tie. */
export function majorityVote(labels: Label[]): Vote {
  const tally: Record<string, number> = {};
  for (const label of labels) {
    tally[label] = (tally[label] ?? 0) + 1;
  }
  const entries = Object.entries(tally);
  if (entries.length === 0) {
    return { status: "unlabeled", decided: null, tally };
  }
  const top = Math.max(...entries.map(([, count]) => count));
  const leaders = entries.filter(([, count]) => count === top);
  if (leaders.length === 1) {
    return { status: "decided", decided: leaders[0][0] as Label, tally };
  }
  return { status: "tie", decided: null, tally };
}

/** Ties and "unclear" winners both need a human call before finalize. */
export function needsAdjudication(vote: Vote): boolean {
  return vote.status === "tie" || vote.decided === "U";
}

export interface Progress {
  resolved: number;
  total: number;
  percent: number;
}

export function sessionProgress(summary: SessionSummary): Progress {
  const decided = Object.values(summary.decided).reduce((a, b) => a + b, 0);
  const resolved = decided + summary.ties;
  const total = summary.dataset_size;
  const percent = total === 0 ? 100 : Math.floor((resolved / total) * 100);
  return { resolved, total, percent };
}

/** Stable "M:2 T:1" rendering, highest count first, label as tie-break. */
export function formatTally(tally: Record<string, number>): string {
  return Object.entries(tally)
    .sort(([la, ca], [lb, cb]) => cb - ca || la.localeCompare(lb))
    .map(([label, count]) => `${label}:${count}`)
    .join(" ");
}
