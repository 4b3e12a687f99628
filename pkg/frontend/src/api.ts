/** Typed client for the review service JSON routes. */

export interface ReviewItem {
  id_a: string;
  id_b: string;
  msg_a: string;
  msg_b: string;
  diff_a: string;
  diff_b: string;
  rm: number;
  rd: number;
  r: number;
}

export type VerdictToken = "similar" | "dissimilar";

/** Submission outcomes the queue has to handle distinctly. */
export type SubmitOutcome = "accepted" | "conflict";

/** Structural subset of Response so tests can stub fetch without DOM types. */
export interface ResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<ResponseLike>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ReviewApi {
  constructor(
    private readonly fetchImpl: FetchLike,
    private readonly base: string = "",
  ) {}

  async pending(): Promise<ReviewItem[]> {
    const response = await this.fetchImpl(`${this.base}/api/pending`);
    if (!response.ok) {
      throw new ApiError(response.status, `pending queue unavailable (${response.status})`);
    }
    return (await response.json()) as ReviewItem[];
  }

  /**
   * Post one verdict. 204 resolves to "accepted", 409 to "conflict" (someone
   * already decided the pair, the queue must refresh); anything else throws.
   */
  async submitVerdict(item: ReviewItem, verdict: VerdictToken): Promise<SubmitOutcome> {
    const response = await this.fetchImpl(`${this.base}/api/verdict`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ id_a: item.id_a, id_b: item.id_b, verdict }),
    });
    if (response.status === 204) return "accepted";
    if (response.status === 409) return "conflict";
    throw new ApiError(response.status, `verdict rejected (${response.status})`);
  }

  async healthy(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.base}/api/health`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
