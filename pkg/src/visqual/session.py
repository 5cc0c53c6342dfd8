"""Evaluation sessions: one uploaded visualization, one catalog snapshot,
and per-question answer states.

Answers are yes/no/NA; skipping a question records NA. A question can never
go back to Unanswered: re-answering overwrites, last write wins. The catalog
snapshot taken at creation isolates the session from hot swaps.
"""

from __future__ import annotations

import hashlib
import uuid
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path

from .catalog import CATEGORY_ORDER, Category, QuestionCatalog
from .timestamps import now_utc


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    NOT_APPLICABLE = "na"


class AnswerSource(str, Enum):
    MANUAL = "manual"
    AUTO = "auto"


class SessionError(Exception):
    """Base class for session failures."""


class UnsupportedMediaType(SessionError):
    def __init__(self, media_type: str):
        self.media_type = media_type
        super().__init__(f"unsupported media type {media_type!r}; accepted: "
                         f"{', '.join(sorted(MEDIA_TYPE_EXTENSIONS))}")


class EmptyUpload(SessionError):
    def __init__(self) -> None:
        super().__init__("uploaded image is empty")


class ImageTooLarge(SessionError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"image is {size} bytes, above the {limit}-byte cap")


class UnknownQuestion(SessionError):
    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"question {question_id!r} is not in this session's "
                         "catalog snapshot")


# Accepted upload formats and their stored-asset extensions.
MEDIA_TYPE_EXTENSIONS = {
    "image/png": "png",
    "image/jpeg": "jpg",
    "image/gif": "gif",
    "image/webp": "webp",
    "image/svg+xml": "svg",
}

DEFAULT_MAX_UPLOAD_BYTES = 20 * 1024 * 1024


@dataclass(frozen=True)
class ImageRef:
    """Content-addressed reference to the uploaded visualization."""

    filename: str
    sha256: str
    media_type: str

    @property
    def asset_name(self) -> str:
        return f"{self.sha256}.{MEDIA_TYPE_EXTENSIONS[self.media_type]}"


@dataclass(frozen=True)
class RecordedAnswer:
    answer: Answer
    answered_at: datetime
    source: AnswerSource


# A state of None means Unanswered; unanswered questions never score.
AnswerState = RecordedAnswer | None


@dataclass
class EvaluationSession:
    session_id: str
    image: ImageRef
    catalog_snapshot: QuestionCatalog
    states: dict[str, AnswerState]
    created_at: datetime
    updated_at: datetime

    @property
    def catalog_version(self) -> str:
        return self.catalog_snapshot.version


@dataclass(frozen=True)
class Progress:
    answered: int
    total: int
    per_category: dict[Category, tuple[int, int]]


def create_session(image_bytes: bytes, media_type: str, filename: str,
                   catalog: QuestionCatalog, *,
                   max_bytes: int = DEFAULT_MAX_UPLOAD_BYTES,
                   asset_dir: Path | None = None,
                   session_id: str | None = None,
                   created_at: datetime | None = None) -> EvaluationSession:
    """Start a new evaluation of one uploaded image.

    The image is stored content-addressably under ``asset_dir`` when given;
    every catalog question starts Unanswered.
    """
    if media_type not in MEDIA_TYPE_EXTENSIONS:
        raise UnsupportedMediaType(media_type)
    if not image_bytes:
        raise EmptyUpload()
    if len(image_bytes) > max_bytes:
        raise ImageTooLarge(len(image_bytes), max_bytes)

    image = ImageRef(
        filename=filename,
        sha256=hashlib.sha256(image_bytes).hexdigest(),
        media_type=media_type,
    )
    if asset_dir is not None:
        asset_dir.mkdir(parents=True, exist_ok=True)
        (asset_dir / image.asset_name).write_bytes(image_bytes)

    moment = created_at or now_utc()
    return EvaluationSession(
        session_id=session_id or uuid.uuid4().hex,
        image=image,
        catalog_snapshot=catalog,
        states={q.id: None for q in catalog.questions},
        created_at=moment,
        updated_at=moment,
    )


def record_answer(session: EvaluationSession, question_id: str,
                  answer: Answer,
                  source: AnswerSource = AnswerSource.MANUAL, *,
                  answered_at: datetime | None = None) -> EvaluationSession:
    """Answer (or re-answer) one question; last write wins."""
    if question_id not in session.states:
        raise UnknownQuestion(question_id)
    moment = answered_at or now_utc()
    session.states[question_id] = RecordedAnswer(answer, moment, source)
    if moment > session.updated_at:
        session.updated_at = moment
    return session


def progress(session: EvaluationSession) -> Progress:
    """Answered/total counts, globally and per category."""
    per_category: dict[Category, tuple[int, int]] = {}
    answered_total = 0
    for category in CATEGORY_ORDER:
        answered = 0
        total = 0
        for q in session.catalog_snapshot.questions:
            if q.category is not category:
                continue
            total += 1
            if session.states[q.id] is not None:
                answered += 1
        per_category[category] = (answered, total)
        answered_total += answered
    return Progress(
        answered=answered_total,
        total=len(session.catalog_snapshot.questions),
        per_category=per_category,
    )
