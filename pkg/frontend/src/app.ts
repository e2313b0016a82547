/**
 * Annotation UI. Three screens over one state object: sign-in, the
 * labeling loop, and a dashboard with the adjudication queue and the
 * finalize gate. Served by the annotation service itself, so the API
 * base is same-origin.
 */

import { AnnotationApi, ApiError, LABELS } from "./api.js";
import type { Label, Tweet, VoteOutcome } from "./api.js";
import { KEY_LABELS, LABEL_NAMES, formatTally, sessionProgress } from "./model.js";

const api = new AnnotationApi("");

const POLL_MS = 2000;

interface State {
  annotator: string | null;
  tweet: Tweet | null;
  lastOutcome: VoteOutcome | null;
  poll: number | null;
}

const state: State = {
  annotator: localStorage.getItem("annotator"),
  tweet: null,
  lastOutcome: null,
  poll: null,
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function root(): HTMLElement {
  const node = document.getElementById("app");
  if (!node) throw new Error("missing #app mount point");
  return node;
}

function swap(...children: HTMLElement[]): void {
  if (state.poll !== null) {
    clearInterval(state.poll);
    state.poll = null;
  }
  root().replaceChildren(...children);
}

function banner(message: string, kind: "ok" | "err"): HTMLElement {
  return el("div", `banner ${kind}`, message);
}

// -- sign-in ----------------------------------------------------------------

function showLogin(): void {
  const box = el("div", "card");
  box.append(el("h1", undefined, "tweet annotation"));
  const input = el("input");
  input.placeholder = "annotator id";
  input.value = state.annotator ?? "";
  const go = el("button", "primary", "start");
  const start = () => {
    const name = input.value.trim();
    if (!name) return;
    state.annotator = name;
    localStorage.setItem("annotator", name);
    void showAnnotate();
  };
  go.addEventListener("click", start);
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") start();
  });
  box.append(input, go);
  swap(box);
  input.focus();
}

// -- labeling loop ----------------------------------------------------------

async function showAnnotate(): Promise<void> {
  if (!state.annotator) return showLogin();
  const next = await api.next(state.annotator);
  if (next.done || !next.tweet) {
    state.tweet = null;
    return showDashboard("queue empty, nothing left for you to label");
  }
  state.tweet = next.tweet;

  const card = el("div", "card");
  card.append(el("h2", undefined, `labeling as ${state.annotator}`));
  if (state.lastOutcome) {
    card.append(banner(
      `${state.lastOutcome.tweet_id}: ${state.lastOutcome.status}` +
        ` (${formatTally(state.lastOutcome.tally)})`,
      "ok",
    ));
  }
  card.append(el("p", "tweet-id", next.tweet.id));
  card.append(el("p", "tweet-text", next.tweet.text));

  const row = el("div", "label-row");
  for (const label of LABELS) {
    const key = Object.keys(KEY_LABELS).find((k) => KEY_LABELS[k] === label);
    const btn = el("button", "label", `${key} ${LABEL_NAMES[label]}`);
    btn.addEventListener("click", () => void submit(label));
    row.append(btn);
  }
  card.append(row);

  const nav = el("div", "nav");
  const dash = el("button", undefined, "dashboard");
  dash.addEventListener("click", () => void showDashboard());
  nav.append(dash);
  card.append(nav);
  swap(card);
}

async function submit(label: Label): Promise<void> {
  if (!state.annotator || !state.tweet) return;
  try {
    state.lastOutcome = await api.label(state.tweet.id, state.annotator, label);
  } catch (err) {
    return showError(err);
  }
  void showAnnotate();
}

function onKey(ev: KeyboardEvent): void {
  if (!state.tweet) return;
  if (ev.target instanceof HTMLInputElement) return;
  const label = KEY_LABELS[ev.key];
  if (label) void submit(label);
}

// -- dashboard + adjudication + finalize -------------------------------------

async function showDashboard(note?: string): Promise<void> {
  state.tweet = null;
  const card = el("div", "card");
  card.append(el("h2", undefined, "session"));
  if (note) card.append(banner(note, "ok"));

  const summaryBox = el("div", "summary");
  const tiesBox = el("div", "ties");
  const controls = el("div", "nav");
  const result = el("div");

  const back = el("button", undefined, "keep labeling");
  back.addEventListener("click", () => void showAnnotate());
  const finalize = el("button", "primary", "finalize");
  finalize.addEventListener("click", async () => {
    try {
      const out = await api.finalize();
      result.replaceChildren(banner(
        `wrote ${out.entries} labeled tweets to ${out.written}`,
        "ok",
      ));
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        result.replaceChildren(banner(
          `finalize blocked, unresolved: ${err.tweetIds.join(", ")}`,
          "err",
        ));
      } else {
        showError(err);
      }
    }
  });
  controls.append(back, finalize);
  card.append(summaryBox, tiesBox, controls, result);
  swap(card);

  const refresh = async () => {
    const summary = await api.session();
    const progress = sessionProgress(summary);
    const lines = [
      `tweets: ${summary.dataset_size}`,
      `resolved: ${progress.resolved} (${progress.percent}%)`,
      `ties: ${summary.ties}`,
      `unlabeled: ${summary.unlabeled}`,
    ];
    const decided = Object.entries(summary.decided)
      .map(([label, count]) => `${label}:${count}`)
      .join(" ");
    if (decided) lines.push(`decided ${decided}`);
    summaryBox.replaceChildren(
      ...lines.map((line) => el("p", undefined, line)),
    );
    await refreshTies();
  };

  const refreshTies = async () => {
    const { ties } = await api.ties();
    tiesBox.replaceChildren(el("h3", undefined, `needs adjudication (${ties.length})`));
    for (const outcome of ties) {
      const row = el("div", "tie-row");
      row.append(el("span", "tweet-id", outcome.tweet_id));
      row.append(el("span", undefined, formatTally(outcome.tally)));
      const pick = el("select");
      for (const label of LABELS) {
        if (label === "U") continue;
        const opt = el("option", undefined, `${label} ${LABEL_NAMES[label]}`);
        opt.value = label;
        pick.append(opt);
      }
      const apply = el("button", undefined, "adjudicate");
      apply.addEventListener("click", async () => {
        try {
          await api.adjudicate(outcome.tweet_id, pick.value as Label);
          await refresh();
        } catch (err) {
          showError(err);
        }
      });
      row.append(pick, apply);
      tiesBox.append(row);
    }
  };

  await refresh();
  state.poll = window.setInterval(() => void refresh(), POLL_MS);
}

// -- errors -------------------------------------------------------------

function showError(err: unknown): void {
  const message = err instanceof Error ? err.message : String(err);
  const card = el("div", "card");
  card.append(el("h2", undefined, "error"), banner(message, "err"));
  const back = el("button", undefined, "back");
  back.addEventListener("click", () => void showAnnotate());
  card.append(back);
  swap(card);
}

document.addEventListener("keydown", onKey);
if (state.annotator) {
  void showAnnotate();
} else {
  showLogin();
}
