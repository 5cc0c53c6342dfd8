// Shared document builders for frontend tests.

import type {
  AnswerValue,
  CatalogDocument,
  ProgressDocument,
  QuestionRecord,
  ReportDocument,
  SessionDocument,
} from "../src/types.js";

export function question(
  id: string,
  category: string,
  extra: Partial<QuestionRecord> = {},
): QuestionRecord {
  return { id, category, text: `Is ${id} fine?`, ...extra };
}

// Deliberately interleaved categories to exercise wizard grouping.
export const SMALL_CATALOG: CatalogDocument = {
  version: "t1",
  questions: [
    question("Q-DAT-001", "Data"),
    question("Q-THE-001", "Theme", { contested: true }),
    question("Q-SUB-001", "Subjective"),
    question("Q-THE-002", "Theme", { example_good: "g.png", example_bad: "b.png" }),
    question("Q-PER-001", "Perception"),
  ],
};

export function sessionDocument(
  catalog: CatalogDocument = SMALL_CATALOG,
): SessionDocument {
  const states: SessionDocument["states"] = {};
  for (const q of catalog.questions) states[q.id] = null;
  return {
    schema_version: "1",
    session_id: "s-frontend",
    image: { filename: "chart.png", sha256: "0".repeat(64), media_type: "image/png" },
    created_at: "2026-08-09T00:00:00Z",
    updated_at: "2026-08-09T00:00:00Z",
    catalog,
    states,
  };
}

export function progressDocument(answered: number, total: number): ProgressDocument {
  return { answered, total, per_category: {} };
}

export const SAMPLE_REPORT: ReportDocument = {
  schema_version: "1",
  session_id: "s-frontend",
  image: { filename: "chart.png", sha256: "0".repeat(64) },
  catalog_version: "t1",
  generated_at: "2026-08-09T00:00:00Z",
  categories: [
    { name: "Subjective", yes: 1, no: 0, na: 0, unanswered: 0, percent: 100.0 },
    { name: "Theme", yes: 1, no: 1, na: 0, unanswered: 0, percent: 50.0 },
    { name: "Coordinates", yes: 0, no: 0, na: 0, unanswered: 0, percent: null },
    { name: "Geometry", yes: 0, no: 0, na: 0, unanswered: 0, percent: null },
    { name: "Guides", yes: 0, no: 0, na: 0, unanswered: 0, percent: null },
    { name: "Perception", yes: 2, no: 1, na: 0, unanswered: 0, percent: 66.67 },
    { name: "Data", yes: 0, no: 0, na: 1, unanswered: 0, percent: null },
  ],
  failed: [
    { id: "Q-THE-001", category: "Theme", text: "Is Q-THE-001 fine?", contested: true },
    { id: "Q-PER-003", category: "Perception", text: "Is Q-PER-003 fine?", contested: false },
  ],
  na: ["Q-DAT-001"],
  answers: [
    { id: "Q-SUB-001", category: "Subjective", answer: "yes", source: "manual" },
    { id: "Q-THE-001", category: "Theme", answer: "no", source: "manual" },
    { id: "Q-THE-002", category: "Theme", answer: "yes", source: "manual" },
    { id: "Q-PER-001", category: "Perception", answer: "unanswered", source: null },
    { id: "Q-DAT-001", category: "Data", answer: "na", source: "manual" },
  ],
  overall: { yes: 4, no: 2, na: 1, unanswered: 0, percent: 66.67 },
};

export interface RecordedCall {
  method: string;
  args: unknown[];
}

// In-memory EvaluationApi double: acknowledges writes against a session
// document exactly like the server would, and can be told to fail.
export class FakeApi {
  calls: RecordedCall[] = [];
  failNextPut: Error | null = null;
  readonly answers: Record<string, AnswerValue> = {};
  private readonly session: SessionDocument;
  readonly report: ReportDocument;

  constructor(
    catalog: CatalogDocument = SMALL_CATALOG,
    report: ReportDocument = SAMPLE_REPORT,
  ) {
    this.session = sessionDocument(catalog);
    this.report = report;
  }

  async createSession(_image: Blob, filename: string): Promise<SessionDocument> {
    this.calls.push({ method: "createSession", args: [filename] });
    return structuredClone(this.session);
  }

  async getSession(): Promise<SessionDocument> {
    return structuredClone(this.session);
  }

  async putAnswer(
    sessionId: string,
    questionId: string,
    answer: AnswerValue,
  ): Promise<ProgressDocument> {
    this.calls.push({ method: "putAnswer", args: [sessionId, questionId, answer] });
    if (this.failNextPut) {
      const failure = this.failNextPut;
      this.failNextPut = null;
      throw failure;
    }
    this.answers[questionId] = answer;
    return progressDocument(Object.keys(this.answers).length,
                            this.session.catalog.questions.length);
  }

  async getReport(): Promise<ReportDocument> {
    this.calls.push({ method: "getReport", args: [] });
    return structuredClone(this.report);
  }

  async getReportBytes(): Promise<ArrayBuffer> {
    return new TextEncoder().encode(JSON.stringify(this.report)).buffer;
  }

  async getReportCsvBytes(): Promise<ArrayBuffer> {
    return new TextEncoder().encode("record_type\n").buffer;
  }

  reportUrl(sessionId: string): string {
    return `/api/sessions/${sessionId}/report`;
  }

  reportCsvUrl(sessionId: string): string {
    return `/api/sessions/${sessionId}/report.csv`;
  }

  exampleUrl(questionId: string, kind: "good" | "bad"): string {
    return `/api/questions/${questionId}/examples/${kind}`;
  }
}
