"""Question catalog: the externally stored, hot-swappable set of criteria.

A catalog is a UTF-8 JSON file ``{"version": str, "questions": [...]}``.
Each question record carries ``id``, ``category`` and ``text`` plus optional
metadata. Categories form a closed seven-value set; there is deliberately no
"Other" bucket. Loading rejects the whole file on any violation, so a catalog
object in memory is always fully valid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import IO, Union

from .diagnostics import SEVERITY_ERROR, SEVERITY_WARNING, Diagnostic
from .timestamps import now_utc


class Category(str, Enum):
    SUBJECTIVE = "Subjective"
    THEME = "Theme"
    COORDINATES = "Coordinates"
    GEOMETRY = "Geometry"
    GUIDES = "Guides"
    PERCEPTION = "Perception"
    DATA = "Data"


# Fixed presentation order used by reports and exports.
CATEGORY_ORDER: tuple[Category, ...] = (
    Category.SUBJECTIVE,
    Category.THEME,
    Category.COORDINATES,
    Category.GEOMETRY,
    Category.GUIDES,
    Category.PERCEPTION,
    Category.DATA,
)

CATEGORY_NAMES = frozenset(c.value for c in Category)

PILLARS = (1, 2, 3, 4)


class CatalogError(Exception):
    """Base class for catalog load failures."""


class ParseError(CatalogError):
    """Malformed catalog file: bad JSON or a schema violation."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, location: str | None = None):
        self.line = line
        self.column = column
        self.location = location
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        elif location:
            where = f" (at {location})"
        super().__init__(f"{message}{where}")


class UnknownCategory(CatalogError):
    def __init__(self, category: object, question_id: str | None = None):
        self.category = category
        self.question_id = question_id
        suffix = f" in question {question_id!r}" if question_id else ""
        super().__init__(f"unknown category {category!r}{suffix}; "
                         f"expected one of {sorted(CATEGORY_NAMES)}")


class DuplicateQuestionId(CatalogError):
    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"duplicate question id {question_id!r}")


class EmptyCatalog(CatalogError):
    def __init__(self) -> None:
        super().__init__("catalog contains no questions")


@dataclass(frozen=True)
class Question:
    id: str
    category: Category
    text: str
    rationale: str | None = None
    pillar: int | None = None
    contested: bool = False
    automatable: bool = False
    example_good: str | None = None
    example_bad: str | None = None
    references: tuple[str, ...] = ()


@dataclass(frozen=True)
class QuestionCatalog:
    """Immutable snapshot of a loaded catalog file.

    ``loaded_at`` is provenance, not content: two loads of the same bytes
    compare equal.
    """

    version: str
    questions: tuple[Question, ...]
    loaded_at: datetime = field(compare=False, default_factory=now_utc)

    def __len__(self) -> int:
        return len(self.questions)

    def question_ids(self) -> tuple[str, ...]:
        return tuple(q.id for q in self.questions)

    def get(self, question_id: str) -> Question | None:
        for q in self.questions:
            if q.id == question_id:
                return q
        return None


_REQUIRED_KEYS = ("id", "category", "text")
_OPTIONAL_KEYS = ("rationale", "pillar", "contested", "automatable",
                  "example_good", "example_bad", "references")
_RECORD_KEYS = frozenset(_REQUIRED_KEYS) | frozenset(_OPTIONAL_KEYS)
_TOP_KEYS = frozenset({"version", "questions"})

Source = Union[bytes, str, IO[bytes]]


def _read_source(source: Source) -> str:
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_catalog_json(source: Source) -> dict:
    """Decode the raw JSON document, checking only the top-level shape.

    Raises ParseError for anything that prevents record-level inspection.
    """
    text = _read_source(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}",
                         line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", location="$")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown top-level keys: {sorted(unknown)}",
                         location="$")
    missing = _TOP_KEYS - set(doc)
    if missing:
        raise ParseError(f"missing top-level keys: {sorted(missing)}",
                         location="$")
    if not isinstance(doc["version"], str) or not doc["version"]:
        raise ParseError("'version' must be a non-empty string",
                         location="$.version")
    if not isinstance(doc["questions"], list):
        raise ParseError("'questions' must be an array",
                         location="$.questions")
    return doc


def _is_str(value: object) -> bool:
    return isinstance(value, str)


def _is_bool(value: object) -> bool:
    return isinstance(value, bool)


def _is_int(value: object) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _record_diagnostics(record: object, index: int,
                        seen_ids: set[str]) -> list[Diagnostic]:
    loc = f"questions[{index}]"
    out: list[Diagnostic] = []

    def err(code: str, message: str, subject: str | None = None) -> None:
        out.append(Diagnostic(SEVERITY_ERROR, code, f"{loc}: {message}", subject))

    if not isinstance(record, dict):
        err("schema", "question record must be an object")
        return out

    qid = record.get("id")
    subject = qid if _is_str(qid) else None

    unknown = set(record) - _RECORD_KEYS
    if unknown:
        err("schema", f"unknown keys: {sorted(unknown)}", subject)
    for key in _REQUIRED_KEYS:
        if key not in record:
            err("schema", f"missing required key {key!r}", subject)

    if "id" in record:
        if not _is_str(qid) or not qid:
            err("schema", "'id' must be a non-empty string", subject)
        elif qid in seen_ids:
            err("duplicate-id", f"duplicate question id {qid!r}", qid)
        else:
            seen_ids.add(qid)

    if "category" in record:
        category = record["category"]
        if not _is_str(category) or category not in CATEGORY_NAMES:
            err("unknown-category", f"unknown category {category!r}", subject)

    if "text" in record and (not _is_str(record["text"]) or not record["text"]):
        err("schema", "'text' must be a non-empty string", subject)
    if "rationale" in record and not _is_str(record["rationale"]):
        err("schema", "'rationale' must be a string", subject)
    if "pillar" in record and (not _is_int(record["pillar"])
                               or record["pillar"] not in PILLARS):
        err("schema", f"'pillar' must be one of {list(PILLARS)}", subject)
    for key in ("contested", "automatable"):
        if key in record and not _is_bool(record[key]):
            err("schema", f"{key!r} must be a boolean", subject)
    for key in ("example_good", "example_bad"):
        if key in record and not _is_str(record[key]):
            err("schema", f"{key!r} must be a string", subject)
    if "references" in record:
        refs = record["references"]
        if not isinstance(refs, list) or not all(_is_str(r) for r in refs):
            err("schema", "'references' must be an array of strings", subject)
    return out


def document_diagnostics(doc: dict) -> list[Diagnostic]:
    """All invariant violations in a structurally parsed document."""
    out: list[Diagnostic] = []
    records = doc["questions"]
    if not records:
        out.append(Diagnostic(SEVERITY_ERROR, "empty-catalog",
                              "catalog contains no questions"))
    seen_ids: set[str] = set()
    for index, record in enumerate(records):
        out.extend(_record_diagnostics(record, index, seen_ids))
    return out


def _question_from_record(record: dict) -> Question:
    refs = record.get("references", [])
    return Question(
        id=record["id"],
        category=Category(record["category"]),
        text=record["text"],
        rationale=record.get("rationale"),
        pillar=record.get("pillar"),
        contested=record.get("contested", False),
        automatable=record.get("automatable", False),
        example_good=record.get("example_good"),
        example_bad=record.get("example_bad"),
        references=tuple(refs),
    )


def _raise_for(diagnostic: Diagnostic, doc: dict) -> None:
    if diagnostic.code == "unknown-category":
        for record in doc["questions"]:
            if isinstance(record, dict) and "category" in record:
                category = record["category"]
                if not _is_str(category) or category not in CATEGORY_NAMES:
                    qid = record.get("id")
                    raise UnknownCategory(category,
                                          qid if _is_str(qid) else None)
        raise UnknownCategory(diagnostic.subject)
    if diagnostic.code == "duplicate-id":
        raise DuplicateQuestionId(diagnostic.subject or "")
    if diagnostic.code == "empty-catalog":
        raise EmptyCatalog()
    raise ParseError(diagnostic.message)


def load_catalog(source: Source) -> QuestionCatalog:
    """Load and fully validate a catalog file; rejects the file on any
    violation (no partial load). Question order is preserved as-is.
    """
    doc = parse_catalog_json(source)
    for diagnostic in document_diagnostics(doc):
        if diagnostic.is_error:
            _raise_for(diagnostic, doc)
    questions = tuple(_question_from_record(r) for r in doc["questions"])
    return QuestionCatalog(version=doc["version"], questions=questions)


def validate_catalog(catalog: QuestionCatalog) -> list[Diagnostic]:
    """Standalone invariant check over an in-memory catalog.

    Empty categories are warnings, not errors: a partial fixture is usable.
    """
    out: list[Diagnostic] = []
    if not catalog.questions:
        out.append(Diagnostic(SEVERITY_ERROR, "empty-catalog",
                              "catalog contains no questions"))
    seen: set[str] = set()
    for q in catalog.questions:
        if not q.id:
            out.append(Diagnostic(SEVERITY_ERROR, "schema",
                                  "question id must be non-empty", q.id))
        elif q.id in seen:
            out.append(Diagnostic(SEVERITY_ERROR, "duplicate-id",
                                  f"duplicate question id {q.id!r}", q.id))
        else:
            seen.add(q.id)
        if not isinstance(q.category, Category):
            out.append(Diagnostic(SEVERITY_ERROR, "unknown-category",
                                  f"unknown category {q.category!r}", q.id))
        if q.pillar is not None and q.pillar not in PILLARS:
            out.append(Diagnostic(SEVERITY_ERROR, "schema",
                                  f"pillar {q.pillar!r} outside {list(PILLARS)}",
                                  q.id))
    populated = {q.category for q in catalog.questions
                 if isinstance(q.category, Category)}
    for category in CATEGORY_ORDER:
        if category not in populated:
            out.append(Diagnostic(SEVERITY_WARNING, "empty-category",
                                  f"category {category.value} has no questions",
                                  category.value))
    return out


def questions_by_category(catalog: QuestionCatalog,
                          category: Category) -> list[Question]:
    """Questions of one category, in catalog order."""
    return [q for q in catalog.questions if q.category is category]


def question_record(question: Question) -> dict:
    record: dict = {
        "id": question.id,
        "category": question.category.value,
        "text": question.text,
    }
    if question.rationale is not None:
        record["rationale"] = question.rationale
    if question.pillar is not None:
        record["pillar"] = question.pillar
    if question.contested:
        record["contested"] = True
    if question.automatable:
        record["automatable"] = True
    if question.example_good is not None:
        record["example_good"] = question.example_good
    if question.example_bad is not None:
        record["example_bad"] = question.example_bad
    if question.references:
        record["references"] = list(question.references)
    return record


def catalog_to_document(catalog: QuestionCatalog) -> dict:
    """The catalog as its external file structure (version + questions)."""
    return {
        "version": catalog.version,
        "questions": [question_record(q) for q in catalog.questions],
    }


def catalog_from_document(doc: dict) -> QuestionCatalog:
    """Inverse of catalog_to_document, with full validation."""
    return load_catalog(json.dumps(doc))
