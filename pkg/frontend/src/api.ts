/**
 * Typed client for the annotation service.
 *
 * Every /api response is JSON; errors carry {error} and finalize conflicts
 * additionally carry {tweet_ids}. The client surfaces both through ApiError
 * so views can render the blocking tweets without re-parsing anything.
 */

export type Label = "T" | "M" | "I" | "N" | "U";

export const LABELS: readonly Label[] = ["T", "M", "I", "N", "U"];

export type VoteStatus = "decided" | "tie" | "unlabeled";

export interface VoteOutcome {
  tweet_id: string;
  decided: Label | null;
  tally: Record<string, number>;
  status: VoteStatus;
}

export interface SessionSummary {
  dataset_size: number;
  provenance: string | null;
  decided: Record<string, number>;
  ties: number;
  unlabeled: number;
}

export interface Tweet {
  id: string;
  text: string;
  date: string | null;
}

export interface NextResponse {
  done: boolean;
  tweet: Tweet | null;
}

export interface PairAgreement {
  annotators: string[];
  agreement: number;
}

export interface AgreementReport {
  unanimous: Record<string, boolean>;
  strict_majority_rate: number;
  pairwise: PairAgreement[];
}

export interface FinalizeResult {
  written: string;
  entries: number;
  class_counts: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly tweetIds: string[] = [],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

interface ErrorBody {
  error?: string;
  tweet_ids?: string[];
}

export class AnnotationApi {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.baseUrl + path, init);
    let body: unknown = null;
    try {
      body = await res.json();
    } catch {
      // non-JSON bodies only ever accompany transport-level failures
    }
    if (!res.ok) {
      const err = (body ?? {}) as ErrorBody;
      throw new ApiError(
        res.status,
        err.error ?? `request failed with status ${res.status}`,
        err.tweet_ids ?? [],
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  session(): Promise<SessionSummary> {
    return this.request("/api/session");
  }

  next(annotatorId: string): Promise<NextResponse> {
    const q = encodeURIComponent(annotatorId);
    return this.request(`/api/next?annotator=${q}`);
  }

  label(tweetId: string, annotatorId: string, label: Label): Promise<VoteOutcome> {
    return this.post("/api/labels", {
      tweet_id: tweetId,
      annotator_id: annotatorId,
      label,
    });
  }

  ties(): Promise<{ ties: VoteOutcome[] }> {
    return this.request("/api/ties");
  }

  adjudicate(tweetId: string, label: Label): Promise<{ ok: boolean }> {
    return this.post("/api/adjudications", { tweet_id: tweetId, label });
  }

  agreement(): Promise<AgreementReport> {
    return this.request("/api/agreement");
  }

  finalize(adjudications?: Record<string, Label>): Promise<FinalizeResult> {
    return this.post("/api/finalize", adjudications ? { adjudications } : {});
  }
}
