// Thin client over the evaluation service. The UI never computes scores:
// every number it shows comes out of these calls verbatim.

import type {
  AnswerValue,
  ProgressDocument,
  ReportDocument,
  SessionDocument,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

async function throwApiError(response: Response): Promise<never> {
  let code = "http_error";
  let detail = `${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    if (body.error) code = body.error;
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body: keep the status text
  }
  throw new ApiError(response.status, code, detail);
}

export interface EvaluationApi {
  createSession(image: Blob, filename: string): Promise<SessionDocument>;
  getSession(sessionId: string): Promise<SessionDocument>;
  putAnswer(
    sessionId: string,
    questionId: string,
    answer: AnswerValue,
  ): Promise<ProgressDocument>;
  getReport(sessionId: string): Promise<ReportDocument>;
  getReportBytes(sessionId: string): Promise<ArrayBuffer>;
  getReportCsvBytes(sessionId: string): Promise<ArrayBuffer>;
  reportUrl(sessionId: string): string;
  reportCsvUrl(sessionId: string): string;
  exampleUrl(questionId: string, kind: "good" | "bad"): string;
}

export class ApiClient implements EvaluationApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) await throwApiError(response);
    return (await response.json()) as T;
  }

  createSession(image: Blob, filename: string): Promise<SessionDocument> {
    const form = new FormData();
    form.append("image", image, filename);
    return this.json("/api/sessions", { method: "POST", body: form });
  }

  getSession(sessionId: string): Promise<SessionDocument> {
    return this.json(`/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  putAnswer(
    sessionId: string,
    questionId: string,
    answer: AnswerValue,
  ): Promise<ProgressDocument> {
    return this.json(
      `/api/sessions/${encodeURIComponent(sessionId)}/answers/${encodeURIComponent(questionId)}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ answer }),
      },
    );
  }

  getReport(sessionId: string): Promise<ReportDocument> {
    return this.json(this.reportUrl(sessionId));
  }

  // Raw bytes, for download handling: passes the endpoint body through
  // without re-serializing.
  async getReportBytes(sessionId: string): Promise<ArrayBuffer> {
    const response = await this.fetchImpl(this.base + this.reportUrl(sessionId));
    if (!response.ok) await throwApiError(response);
    return response.arrayBuffer();
  }

  async getReportCsvBytes(sessionId: string): Promise<ArrayBuffer> {
    const response = await this.fetchImpl(this.base + this.reportCsvUrl(sessionId));
    if (!response.ok) await throwApiError(response);
    return response.arrayBuffer();
  }

  reportUrl(sessionId: string): string {
    return `/api/sessions/${encodeURIComponent(sessionId)}/report`;
  }

  reportCsvUrl(sessionId: string): string {
    return `/api/sessions/${encodeURIComponent(sessionId)}/report.csv`;
  }

  exampleUrl(questionId: string, kind: "good" | "bad"): string {
    return `${this.base}/api/questions/${encodeURIComponent(questionId)}/examples/${kind}`;
  }
}
