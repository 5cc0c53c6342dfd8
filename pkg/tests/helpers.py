"""Builders shared across test modules."""

from __future__ import annotations

import random

from visqual.catalog import CATEGORY_ORDER, Category, Question, QuestionCatalog
from visqual.session import (Answer, AnswerSource, EvaluationSession,
                             ImageRef, RecordedAnswer)
from visqual.timestamps import EPOCH

# 1x1 transparent PNG, enough for upload handling (content is never decoded).
TINY_PNG = bytes.fromhex(
    "89504e470d0a1a0a0000000d49484452000000010000000108060000001f15c489"
    "0000000d4944415478da63fcff9fa11e00078501fe9f25668f0000000049454e44"
    "ae426082"
)


def make_questions(sizes: dict[Category, int]) -> list[Question]:
    questions = []
    for category in CATEGORY_ORDER:
        for ordinal in range(sizes.get(category, 0)):
            code = category.value[:3].upper()
            questions.append(Question(
                id=f"Q-{code}-{ordinal + 1:03d}",
                category=category,
                text=f"Does aspect {ordinal + 1} of {category.value} hold?",
            ))
    return questions


def make_catalog(sizes: dict[Category, int],
                 version: str = "test") -> QuestionCatalog:
    return QuestionCatalog(version=version,
                           questions=tuple(make_questions(sizes)))


def random_catalog(rng: random.Random, max_per_category: int = 5
                   ) -> QuestionCatalog:
    sizes = {category: rng.randint(0, max_per_category)
             for category in CATEGORY_ORDER}
    if not any(sizes.values()):
        sizes[rng.choice(CATEGORY_ORDER)] = 1
    return make_catalog(sizes)


def blank_session(catalog: QuestionCatalog,
                  session_id: str = "s-test") -> EvaluationSession:
    return EvaluationSession(
        session_id=session_id,
        image=ImageRef("chart.png", "0" * 64, "image/png"),
        catalog_snapshot=catalog,
        states={q.id: None for q in catalog.questions},
        created_at=EPOCH,
        updated_at=EPOCH,
    )


def random_session(rng: random.Random, catalog: QuestionCatalog,
                   allow_unanswered: bool = True) -> EvaluationSession:
    session = blank_session(catalog, session_id=f"s-{rng.randrange(10**9)}")
    choices: list[Answer | None] = [Answer.YES, Answer.NO,
                                    Answer.NOT_APPLICABLE]
    if allow_unanswered:
        choices.append(None)
    for q in catalog.questions:
        picked = rng.choice(choices)
        if picked is not None:
            session.states[q.id] = RecordedAnswer(
                picked, EPOCH, rng.choice((AnswerSource.MANUAL,
                                           AnswerSource.AUTO)))
    return session
