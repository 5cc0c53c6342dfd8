// Wizard state and transitions. The server is authoritative: the local
// answer cache only ever holds values the server has acknowledged, and a
// failed write is kept as a pending retry instead of being applied locally.

import { ApiError } from "./api.js";
import type { EvaluationApi } from "./api.js";
import type {
  AnswerValue,
  CatalogDocument,
  ProgressDocument,
  QuestionRecord,
  ReportDocument,
  SessionDocument,
} from "./types.js";

export const CATEGORY_ORDER = [
  "Subjective",
  "Theme",
  "Coordinates",
  "Geometry",
  "Guides",
  "Perception",
  "Data",
] as const;

// Wizard order: grouped by category in the fixed order, preserving
// catalog order within each category. Every question appears exactly once.
export function orderQuestions(catalog: CatalogDocument): QuestionRecord[] {
  const ordered: QuestionRecord[] = [];
  for (const category of CATEGORY_ORDER) {
    for (const question of catalog.questions) {
      if (question.category === category) ordered.push(question);
    }
  }
  for (const question of catalog.questions) {
    if (!CATEGORY_ORDER.includes(question.category as never)) {
      ordered.push(question);
    }
  }
  return ordered;
}

export type Screen = "upload" | "wizard" | "report";

export interface PendingWrite {
  questionId: string;
  value: AnswerValue;
  advance: boolean;
}

export interface WizardState {
  screen: Screen;
  busy: boolean;
  session: SessionDocument | null;
  questions: QuestionRecord[];
  index: number;
  answers: Record<string, AnswerValue | null>;
  progress: ProgressDocument | null;
  report: ReportDocument | null;
  error: string | null;
  pending: PendingWrite | null;
}

export function initialState(): WizardState {
  return {
    screen: "upload",
    busy: false,
    session: null,
    questions: [],
    index: 0,
    answers: {},
    progress: null,
    report: null,
    error: null,
    pending: null,
  };
}

type Listener = () => void;

export class Store {
  private state: WizardState = initialState();
  private listeners: Listener[] = [];

  get(): WizardState {
    return this.state;
  }

  set(partial: Partial<WizardState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener();
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  if (error instanceof Error) return error.message;
  return String(error);
}

export class WizardController {
  constructor(
    private readonly store: Store,
    private readonly api: EvaluationApi,
  ) {}

  async startSession(image: Blob, filename: string): Promise<void> {
    this.store.set({ busy: true, error: null });
    try {
      const session = await this.api.createSession(image, filename);
      const questions = orderQuestions(session.catalog);
      const answers: Record<string, AnswerValue | null> = {};
      for (const [questionId, state] of Object.entries(session.states)) {
        answers[questionId] = state ? state.answer : null;
      }
      this.store.set({
        screen: "wizard",
        busy: false,
        session,
        questions,
        index: 0,
        answers,
        progress: null,
        report: null,
      });
    } catch (error) {
      this.store.set({ busy: false, error: describeError(error) });
    }
  }

  currentQuestion(): QuestionRecord | null {
    const { questions, index } = this.store.get();
    return questions[index] ?? null;
  }

  // Yes / No buttons.
  async answerCurrent(value: "yes" | "no"): Promise<void> {
    await this.submit(value);
  }

  // Skip records Not Applicable; this is the only place skip maps to "na".
  async skipCurrent(): Promise<void> {
    await this.submit("na");
  }

  private async submit(value: AnswerValue, advance = true): Promise<void> {
    const question = this.currentQuestion();
    const { session } = this.store.get();
    if (!question || !session) return;
    await this.send({ questionId: question.id, value, advance });
  }

  private async send(write: PendingWrite): Promise<void> {
    const { session } = this.store.get();
    if (!session) return;
    this.store.set({ busy: true });
    try {
      const progress = await this.api.putAnswer(
        session.session_id,
        write.questionId,
        write.value,
      );
      // Acknowledged: now, and only now, mirror it locally.
      const answers = {
        ...this.store.get().answers,
        [write.questionId]: write.value,
      };
      this.store.set({
        busy: false,
        answers,
        progress,
        error: null,
        pending: null,
      });
      if (write.advance) this.next();
    } catch (error) {
      // Keep the write for an idempotent retry; the cache stays at the
      // last server-acknowledged value.
      this.store.set({
        busy: false,
        error: describeError(error),
        pending: write,
      });
    }
  }

  async retry(): Promise<void> {
    const { pending } = this.store.get();
    if (pending) await this.send(pending);
  }

  dismissError(): void {
    this.store.set({ error: null, pending: null });
  }

  next(): void {
    const { index, questions } = this.store.get();
    if (index + 1 < questions.length) {
      this.store.set({ index: index + 1 });
    }
  }

  back(): void {
    const { index } = this.store.get();
    if (index > 0) this.store.set({ index: index - 1 });
  }

  goTo(index: number): void {
    const { questions } = this.store.get();
    if (index >= 0 && index < questions.length) {
      this.store.set({ index });
    }
  }

  isLastQuestion(): boolean {
    const { index, questions } = this.store.get();
    return index === questions.length - 1;
  }

  async showReport(): Promise<void> {
    const { session } = this.store.get();
    if (!session) return;
    this.store.set({ busy: true });
    try {
      const report = await this.api.getReport(session.session_id);
      this.store.set({ screen: "report", busy: false, report, error: null });
    } catch (error) {
      this.store.set({ busy: false, error: describeError(error) });
    }
  }

  backToWizard(): void {
    this.store.set({ screen: "wizard" });
  }
}
