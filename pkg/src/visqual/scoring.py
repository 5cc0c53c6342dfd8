"""Per-category and overall scores for a session.

Counting is unweighted. A category's percent is 100*yes/(yes+no) kept as an
exact rational; NA and Unanswered stay out of the denominator so that
inapplicable questions never drag a score down. There is deliberately no
single-number verdict: the failed-question list travels with the percents
because one negative answer can matter more than the rest combined.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction

from .catalog import CATEGORY_ORDER, Category
from .session import Answer, AnswerSource, EvaluationSession


@dataclass(frozen=True)
class CategoryScore:
    category: Category
    yes: int
    no: int
    na: int
    unanswered: int
    percent: Fraction | None  # absent when yes+no == 0

    @property
    def total(self) -> int:
        return self.yes + self.no + self.na + self.unanswered


@dataclass(frozen=True)
class OverallScore:
    yes: int
    no: int
    na: int
    unanswered: int
    percent: Fraction | None


@dataclass(frozen=True)
class FailedQuestion:
    question_id: str
    category: Category
    text: str
    contested: bool


@dataclass(frozen=True)
class ReportAnswer:
    question_id: str
    category: Category
    answer: Answer | None  # None means unanswered
    source: AnswerSource | None


@dataclass(frozen=True)
class Report:
    session_id: str
    image_filename: str
    image_sha256: str
    catalog_version: str
    generated_at: datetime
    scores: tuple[CategoryScore, ...]  # all 7 categories, fixed order
    failed: tuple[FailedQuestion, ...]  # every No, in catalog order
    na_ids: tuple[str, ...]
    answers: tuple[ReportAnswer, ...]  # one per question, catalog order
    overall: OverallScore


def _percent(yes: int, no: int) -> Fraction | None:
    if yes + no == 0:
        return None
    return Fraction(100 * yes, yes + no)


def score_category(session: EvaluationSession,
                   category: Category) -> CategoryScore:
    """Tally one category over the session's catalog snapshot."""
    yes = no = na = unanswered = 0
    for question in session.catalog_snapshot.questions:
        if question.category is not category:
            continue
        state = session.states[question.id]
        if state is None:
            unanswered += 1
        elif state.answer is Answer.YES:
            yes += 1
        elif state.answer is Answer.NO:
            no += 1
        else:
            na += 1
    return CategoryScore(category, yes, no, na, unanswered, _percent(yes, no))


def build_report(session: EvaluationSession,
                 generated_at: datetime | None = None) -> Report:
    """Assemble the full report for a session, partial sessions included.

    Defaults ``generated_at`` to the session's last update so identical
    session contents always produce an identical report.
    """
    scores = tuple(score_category(session, c) for c in CATEGORY_ORDER)

    failed: list[FailedQuestion] = []
    na_ids: list[str] = []
    answers: list[ReportAnswer] = []
    for question in session.catalog_snapshot.questions:
        state = session.states[question.id]
        if state is None:
            answers.append(ReportAnswer(question.id, question.category,
                                        None, None))
            continue
        answers.append(ReportAnswer(question.id, question.category,
                                    state.answer, state.source))
        if state.answer is Answer.NO:
            failed.append(FailedQuestion(question.id, question.category,
                                         question.text, question.contested))
        elif state.answer is Answer.NOT_APPLICABLE:
            na_ids.append(question.id)

    overall = OverallScore(
        yes=sum(s.yes for s in scores),
        no=sum(s.no for s in scores),
        na=sum(s.na for s in scores),
        unanswered=sum(s.unanswered for s in scores),
        percent=_percent(sum(s.yes for s in scores), sum(s.no for s in scores)),
    )
    return Report(
        session_id=session.session_id,
        image_filename=session.image.filename,
        image_sha256=session.image.sha256,
        catalog_version=session.catalog_version,
        generated_at=generated_at or session.updated_at,
        scores=scores,
        failed=tuple(failed),
        na_ids=tuple(na_ids),
        answers=tuple(answers),
        overall=overall,
    )
