// Server document shapes, mirrored from the HTTP API.

export type AnswerValue = "yes" | "no" | "na";

export interface QuestionRecord {
  id: string;
  category: string;
  text: string;
  rationale?: string;
  pillar?: number;
  contested?: boolean;
  automatable?: boolean;
  example_good?: string;
  example_bad?: string;
  references?: string[];
}

export interface CatalogDocument {
  version: string;
  questions: QuestionRecord[];
}

export interface RecordedState {
  answer: AnswerValue;
  answered_at: string;
  source: "manual" | "auto";
}

export interface SessionDocument {
  schema_version: string;
  session_id: string;
  image: { filename: string; sha256: string; media_type: string };
  created_at: string;
  updated_at: string;
  catalog: CatalogDocument;
  states: Record<string, RecordedState | null>;
}

export interface ProgressDocument {
  answered: number;
  total: number;
  per_category: Record<string, { answered: number; total: number }>;
}

export interface CategoryReport {
  name: string;
  yes: number;
  no: number;
  na: number;
  unanswered: number;
  percent: number | null;
}

export interface FailedEntry {
  id: string;
  category: string;
  text: string;
  contested: boolean;
}

export interface ReportDocument {
  schema_version: string;
  session_id: string;
  image: { filename: string; sha256: string };
  catalog_version: string;
  generated_at: string;
  categories: CategoryReport[];
  failed: FailedEntry[];
  na: string[];
  answers: { id: string; category: string; answer: string; source: string | null }[];
  overall: { yes: number; no: number; na: number; unanswered: number; percent: number | null };
}
