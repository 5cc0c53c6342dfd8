// DOM rendering. Screens are re-rendered wholesale from the store on every
// change: the page itself never reloads. All displayed numbers are taken
// verbatim from server documents.

import type { EvaluationApi } from "./api.js";
import { Store, WizardController } from "./state.js";
import type { QuestionRecord, ReportDocument } from "./types.js";

const ACCEPTED_TYPES = "image/png,image/jpeg,image/gif,image/webp,image/svg+xml";

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

export function formatPercent(percent: number | null): string {
  return percent === null ? "n/a" : `${percent}%`;
}

function renderErrorBanner(
  root: HTMLElement,
  store: Store,
  controller: WizardController,
): void {
  const { error, pending } = store.get();
  if (!error) return;
  const banner = el("div", "banner", error);
  banner.setAttribute("role", "alert");
  if (pending) {
    const retry = el("button", "retry", "Retry");
    retry.addEventListener("click", () => void controller.retry());
    banner.appendChild(retry);
  }
  const dismiss = el("button", "dismiss", "Dismiss");
  dismiss.addEventListener("click", () => controller.dismissError());
  banner.appendChild(dismiss);
  root.appendChild(banner);
}

function renderUpload(root: HTMLElement, controller: WizardController): void {
  const panel = el("section", "upload-panel");
  panel.appendChild(el("h2", undefined, "Evaluate a visualization"));
  panel.appendChild(el(
    "p",
    "hint",
    "Upload a chart image (PNG, JPEG, GIF, WebP or SVG) and answer the "
      + "catalog questions. Skip anything that does not apply.",
  ));
  const input = el("input") as HTMLInputElement;
  input.type = "file";
  input.accept = ACCEPTED_TYPES;
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (file) void controller.startSession(file, file.name);
  });
  panel.appendChild(input);
  root.appendChild(panel);
}

function exampleFigure(
  api: EvaluationApi,
  question: QuestionRecord,
  kind: "good" | "bad",
): HTMLElement | null {
  const reference = kind === "good" ? question.example_good : question.example_bad;
  if (!reference) return null;
  const figure = el("figure", `example example-${kind}`);
  const img = el("img") as HTMLImageElement;
  img.src = api.exampleUrl(question.id, kind);
  img.alt = `${kind} practice example`;
  // The asset may not be installed server-side; hide a broken figure.
  img.addEventListener("error", () => figure.remove());
  figure.appendChild(img);
  figure.appendChild(el("figcaption", undefined,
                        kind === "good" ? "Good practice" : "Bad practice"));
  return figure;
}

function renderWizard(
  root: HTMLElement,
  store: Store,
  controller: WizardController,
  api: EvaluationApi,
): void {
  const { questions, index, answers, busy } = store.get();
  const question = questions[index];
  if (!question) return;

  const panel = el("section", "wizard-panel");

  const header = el("header", "wizard-header");
  const badge = el("span", "badge category-badge", question.category);
  header.appendChild(badge);
  if (question.contested) {
    const contested = el("span", "badge contested-badge", "contested");
    contested.title = "Criterion under active debate";
    header.appendChild(contested);
  }
  header.appendChild(el("span", "position",
                        `${index + 1} / ${questions.length}`));
  panel.appendChild(header);

  panel.appendChild(el("h2", "question-text", question.text));
  if (question.rationale) {
    panel.appendChild(el("p", "rationale", question.rationale));
  }

  const examples = el("div", "examples");
  for (const kind of ["good", "bad"] as const) {
    const figure = exampleFigure(api, question, kind);
    if (figure) examples.appendChild(figure);
  }
  if (examples.childElementCount > 0) panel.appendChild(examples);

  const current = answers[question.id] ?? null;
  if (current) {
    panel.appendChild(el("p", "current-answer",
                         `Current answer: ${current}`));
  }

  const buttons = el("div", "answer-buttons");
  const yes = el("button", "answer answer-yes", "Yes");
  yes.addEventListener("click", () => void controller.answerCurrent("yes"));
  const no = el("button", "answer answer-no", "No");
  no.addEventListener("click", () => void controller.answerCurrent("no"));
  // Skip is deliberately styled apart from No: it records Not Applicable.
  const skip = el("button", "answer answer-skip", "Skip (not applicable)");
  skip.addEventListener("click", () => void controller.skipCurrent());
  for (const button of [yes, no, skip]) {
    button.disabled = busy;
    buttons.appendChild(button);
  }
  panel.appendChild(buttons);

  const nav = el("nav", "wizard-nav");
  const back = el("button", "nav-back", "Back");
  back.disabled = index === 0;
  back.addEventListener("click", () => controller.back());
  const forward = el("button", "nav-forward", "Forward");
  forward.disabled = controller.isLastQuestion();
  forward.addEventListener("click", () => controller.next());
  const finish = el("button", "nav-report", "View report");
  finish.addEventListener("click", () => void controller.showReport());
  nav.appendChild(back);
  nav.appendChild(forward);
  nav.appendChild(finish);
  panel.appendChild(nav);

  root.appendChild(panel);
}

export function renderReportPanel(
  report: ReportDocument,
  api: EvaluationApi,
): HTMLElement {
  const panel = el("section", "report-panel");
  panel.appendChild(el("h2", undefined,
                       `Report for ${report.image.filename}`));

  const bars = el("div", "category-bars");
  for (const category of report.categories) {
    const row = el("div", "category-row");
    row.dataset.category = category.name;
    row.appendChild(el("span", "category-name", category.name));
    const track = el("div", "bar-track");
    const fill = el("div", "bar-fill");
    fill.style.width = category.percent === null ? "0%" : `${category.percent}%`;
    track.appendChild(fill);
    row.appendChild(track);
    row.appendChild(el("span", "category-percent",
                       formatPercent(category.percent)));
    row.appendChild(el(
      "span",
      "category-counts",
      `${category.yes} yes / ${category.no} no / ${category.na} na / `
        + `${category.unanswered} unanswered`,
    ));
    bars.appendChild(row);
  }
  panel.appendChild(bars);

  const overall = el("p", "overall",
                     `Overall: ${formatPercent(report.overall.percent)} `
                       + `(${report.overall.yes} yes, ${report.overall.no} no, `
                       + `${report.overall.na} na, `
                       + `${report.overall.unanswered} unanswered)`);
  panel.appendChild(overall);

  const failedBlock = el("div", "failed-block");
  failedBlock.appendChild(el("h3", undefined,
                             `Failed criteria (${report.failed.length})`));
  const failedList = el("ul", "failed-list");
  for (const failed of report.failed) {
    const item = el("li", "failed-item");
    item.appendChild(el("span", "badge category-badge", failed.category));
    if (failed.contested) {
      item.appendChild(el("span", "badge contested-badge", "contested"));
    }
    item.appendChild(el("span", "failed-text", failed.text));
    failedList.appendChild(item);
  }
  failedBlock.appendChild(failedList);
  panel.appendChild(failedBlock);

  const unansweredIds = report.answers
    .filter((entry) => entry.answer === "unanswered")
    .map((entry) => entry.id);
  const naBlock = el("div", "na-block");
  naBlock.appendChild(el("h3", undefined,
                         `Not applicable (${report.na.length})`));
  naBlock.appendChild(el("p", "na-list", report.na.join(", ") || "none"));
  naBlock.appendChild(el("h3", undefined,
                         `Unanswered (${unansweredIds.length})`));
  naBlock.appendChild(el("p", "unanswered-list",
                         unansweredIds.join(", ") || "none"));
  panel.appendChild(naBlock);

  const downloads = el("div", "downloads");
  const jsonLink = el("a", "download download-json", "Download JSON") as
    HTMLAnchorElement;
  jsonLink.href = api.reportUrl(report.session_id);
  jsonLink.download = `report-${report.session_id}.json`;
  const csvLink = el("a", "download download-csv", "Download CSV") as
    HTMLAnchorElement;
  csvLink.href = api.reportCsvUrl(report.session_id);
  csvLink.download = `report-${report.session_id}.csv`;
  downloads.appendChild(jsonLink);
  downloads.appendChild(csvLink);
  panel.appendChild(downloads);

  return panel;
}

export function mount(
  root: HTMLElement,
  store: Store,
  controller: WizardController,
  api: EvaluationApi,
): void {
  function render(): void {
    root.innerHTML = "";
    renderErrorBanner(root, store, controller);
    const { screen, report } = store.get();
    if (screen === "upload") {
      renderUpload(root, controller);
    } else if (screen === "wizard") {
      renderWizard(root, store, controller, api);
    } else if (screen === "report" && report) {
      const panel = renderReportPanel(report, api);
      const back = el("button", "nav-back", "Back to questions");
      back.addEventListener("click", () => controller.backToWizard());
      panel.appendChild(back);
      root.appendChild(panel);
    }
  }

  store.subscribe(render);
  render();
}
