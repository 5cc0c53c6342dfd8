"""Bit-exact report serialization: canonical JSON, CSV, and JSON re-import.

The JSON writer emits a fixed key order and renders percents with exactly
two decimals (half-up), so equal reports always serialize to equal bytes.
On import the counts are authoritative: percents are recomputed from them
and the serialized value must agree within 0.005.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

from .catalog import CATEGORY_NAMES, CATEGORY_ORDER, Category
from .scoring import (CategoryScore, FailedQuestion, OverallScore, Report,
                      ReportAnswer)
from .session import Answer, AnswerSource
from .timestamps import from_rfc3339, to_rfc3339

SCHEMA_VERSION = "1"

PERCENT_TOLERANCE = Fraction(1, 200)  # 0.005 on the 0..100 scale

CSV_HEADER = ("record_type", "id", "category", "answer",
              "yes", "no", "na", "unanswered", "percent")


class SchemaError(Exception):
    """Report document violates the schema (keys, types, enumerations)."""


class ConsistencyError(Exception):
    """Report document is well-formed but internally inconsistent."""


def render_percent(percent: Fraction) -> str:
    """Exact rational -> 2-decimal string, ties rounded up."""
    hundredths = math.floor(percent * 100 + Fraction(1, 2))
    return f"{hundredths // 100}.{hundredths % 100:02d}"


def _s(value: str) -> str:
    return json.dumps(value, ensure_ascii=False)


def _percent_token(percent: Fraction | None) -> str:
    return "null" if percent is None else render_percent(percent)


def _bool_token(value: bool) -> str:
    return "true" if value else "false"


def _counts_body(yes: int, no: int, na: int, unanswered: int,
                 percent: Fraction | None) -> str:
    return (f'"yes":{yes},"no":{no},"na":{na},"unanswered":{unanswered},'
            f'"percent":{_percent_token(percent)}')


def report_to_json(report: Report) -> bytes:
    """Canonical JSON bytes; equal reports yield identical output."""
    categories = ",".join(
        f'{{"name":{_s(s.category.value)},'
        + _counts_body(s.yes, s.no, s.na, s.unanswered, s.percent) + "}"
        for s in report.scores)
    failed = ",".join(
        f'{{"id":{_s(f.question_id)},"category":{_s(f.category.value)},'
        f'"text":{_s(f.text)},"contested":{_bool_token(f.contested)}}}'
        for f in report.failed)
    na = ",".join(_s(qid) for qid in report.na_ids)
    answers = ",".join(
        f'{{"id":{_s(a.question_id)},"category":{_s(a.category.value)},'
        f'"answer":{_s(a.answer.value) if a.answer else _s("unanswered")},'
        f'"source":{_s(a.source.value) if a.source else "null"}}}'
        for a in report.answers)
    overall = "{" + _counts_body(report.overall.yes, report.overall.no,
                                 report.overall.na, report.overall.unanswered,
                                 report.overall.percent) + "}"
    text = (
        f'{{"schema_version":{_s(SCHEMA_VERSION)},'
        f'"session_id":{_s(report.session_id)},'
        f'"image":{{"filename":{_s(report.image_filename)},'
        f'"sha256":{_s(report.image_sha256)}}},'
        f'"catalog_version":{_s(report.catalog_version)},'
        f'"generated_at":{_s(to_rfc3339(report.generated_at))},'
        f'"categories":[{categories}],'
        f'"failed":[{failed}],'
        f'"na":[{na}],'
        f'"answers":[{answers}],'
        f'"overall":{overall}}}'
    )
    return text.encode("utf-8")


_TOP_KEYS = ("schema_version", "session_id", "image", "catalog_version",
             "generated_at", "categories", "failed", "na", "answers",
             "overall")
_COUNT_KEYS = ("yes", "no", "na", "unanswered")


def _require_keys(obj: object, keys: tuple[str, ...], where: str) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where} must be an object")
    missing = set(keys) - set(obj)
    if missing:
        raise SchemaError(f"{where}: missing keys {sorted(missing)}")
    unknown = set(obj) - set(keys)
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    return obj


def _require_str(value: object, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{where} must be a string")
    return value


def _require_count(value: object, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise SchemaError(f"{where} must be a non-negative integer")
    return value


def _check_percent(counts: dict[str, int], raw: object,
                   where: str) -> Fraction | None:
    """Validate a serialized percent against its authoritative counts."""
    denominator = counts["yes"] + counts["no"]
    if denominator == 0:
        if raw is not None:
            raise ConsistencyError(
                f"{where}: percent must be null when yes+no is 0")
        return None
    if raw is None:
        raise ConsistencyError(f"{where}: percent missing for yes+no > 0")
    if not isinstance(raw, (int, Fraction)) or isinstance(raw, bool):
        raise SchemaError(f"{where}: percent must be a number or null")
    exact = Fraction(100 * counts["yes"], denominator)
    if abs(Fraction(raw) - exact) > PERCENT_TOLERANCE:
        raise ConsistencyError(
            f"{where}: percent {float(raw)} disagrees with counts "
            f"(expected {render_percent(exact)})")
    return exact


def _parse_counts(obj: dict, where: str) -> dict[str, int]:
    return {key: _require_count(obj[key], f"{where}.{key}")
            for key in _COUNT_KEYS}


def report_from_json(data: bytes | str) -> Report:
    """Parse a report document; counts are authoritative for percents."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}") from exc
    doc = _require_keys(doc, _TOP_KEYS, "report")

    if doc["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version "
                          f"{doc['schema_version']!r}")
    session_id = _require_str(doc["session_id"], "session_id")
    image = _require_keys(doc["image"], ("filename", "sha256"), "image")
    filename = _require_str(image["filename"], "image.filename")
    sha256 = _require_str(image["sha256"], "image.sha256")
    catalog_version = _require_str(doc["catalog_version"], "catalog_version")
    try:
        generated_at = from_rfc3339(_require_str(doc["generated_at"],
                                                 "generated_at"))
    except ValueError as exc:
        raise SchemaError(f"generated_at: {exc}") from exc

    if not isinstance(doc["categories"], list) or len(doc["categories"]) != 7:
        raise SchemaError("categories must be an array of exactly 7 entries")
    scores: list[CategoryScore] = []
    for expected, entry in zip(CATEGORY_ORDER, doc["categories"]):
        where = f"categories[{expected.value}]"
        obj = _require_keys(entry, ("name", *_COUNT_KEYS, "percent"), where)
        if obj["name"] != expected.value:
            raise SchemaError(f"{where}: expected name {expected.value!r}, "
                              f"got {obj['name']!r}")
        counts = _parse_counts(obj, where)
        percent = _check_percent(counts, obj["percent"], where)
        scores.append(CategoryScore(expected, counts["yes"], counts["no"],
                                    counts["na"], counts["unanswered"],
                                    percent))

    if not isinstance(doc["failed"], list):
        raise SchemaError("failed must be an array")
    failed: list[FailedQuestion] = []
    for index, entry in enumerate(doc["failed"]):
        where = f"failed[{index}]"
        obj = _require_keys(entry, ("id", "category", "text", "contested"),
                            where)
        name = _require_str(obj["category"], f"{where}.category")
        if name not in CATEGORY_NAMES:
            raise SchemaError(f"{where}: unknown category {name!r}")
        if not isinstance(obj["contested"], bool):
            raise SchemaError(f"{where}.contested must be a boolean")
        failed.append(FailedQuestion(_require_str(obj["id"], f"{where}.id"),
                                     Category(name),
                                     _require_str(obj["text"],
                                                  f"{where}.text"),
                                     obj["contested"]))

    if not isinstance(doc["na"], list):
        raise SchemaError("na must be an array")
    na_ids = tuple(_require_str(v, f"na[{i}]")
                   for i, v in enumerate(doc["na"]))

    if not isinstance(doc["answers"], list):
        raise SchemaError("answers must be an array")
    answers: list[ReportAnswer] = []
    for index, entry in enumerate(doc["answers"]):
        where = f"answers[{index}]"
        obj = _require_keys(entry, ("id", "category", "answer", "source"),
                            where)
        qid = _require_str(obj["id"], f"{where}.id")
        name = _require_str(obj["category"], f"{where}.category")
        if name not in CATEGORY_NAMES:
            raise SchemaError(f"{where}: unknown category {name!r}")
        value = obj["answer"]
        if value not in ("yes", "no", "na", "unanswered"):
            raise SchemaError(f"{where}: invalid answer {value!r}")
        source = obj["source"]
        if value == "unanswered":
            if source is not None:
                raise SchemaError(f"{where}: unanswered must have null source")
            answers.append(ReportAnswer(qid, Category(name), None, None))
        else:
            if source not in ("manual", "auto"):
                raise SchemaError(f"{where}: invalid source {source!r}")
            answers.append(ReportAnswer(qid, Category(name), Answer(value),
                                        AnswerSource(source)))

    overall_obj = _require_keys(doc["overall"], (*_COUNT_KEYS, "percent"),
                                "overall")
    counts = _parse_counts(overall_obj, "overall")
    percent = _check_percent(counts, overall_obj["percent"], "overall")
    overall = OverallScore(counts["yes"], counts["no"], counts["na"],
                           counts["unanswered"], percent)

    _check_consistency(scores, failed, na_ids, answers, overall)
    return Report(
        session_id=session_id,
        image_filename=filename,
        image_sha256=sha256,
        catalog_version=catalog_version,
        generated_at=generated_at,
        scores=tuple(scores),
        failed=tuple(failed),
        na_ids=na_ids,
        answers=tuple(answers),
        overall=overall,
    )


def _check_consistency(scores: list[CategoryScore],
                       failed: list[FailedQuestion],
                       na_ids: tuple[str, ...],
                       answers: list[ReportAnswer],
                       overall: OverallScore) -> None:
    for key in _COUNT_KEYS:
        total = sum(getattr(s, key) for s in scores)
        if total != getattr(overall, key):
            raise ConsistencyError(
                f"overall.{key} is {getattr(overall, key)} but category "
                f"{key} counts sum to {total}")
    if len(failed) != overall.no:
        raise ConsistencyError(
            f"failed lists {len(failed)} questions but overall.no is "
            f"{overall.no}")
    no_ids = [a.question_id for a in answers if a.answer is Answer.NO]
    if [f.question_id for f in failed] != no_ids:
        raise ConsistencyError("failed entries disagree with answers")
    if list(na_ids) != [a.question_id for a in answers
                        if a.answer is Answer.NOT_APPLICABLE]:
        raise ConsistencyError("na list disagrees with answers")
    per_category: dict[Category, dict[str, int]] = {
        s.category: {key: 0 for key in _COUNT_KEYS} for s in scores}
    for a in answers:
        bucket = per_category[a.category]
        if a.answer is None:
            bucket["unanswered"] += 1
        elif a.answer is Answer.YES:
            bucket["yes"] += 1
        elif a.answer is Answer.NO:
            bucket["no"] += 1
        else:
            bucket["na"] += 1
    for s in scores:
        for key in _COUNT_KEYS:
            if per_category[s.category][key] != getattr(s, key):
                raise ConsistencyError(
                    f"answers recount disagrees with "
                    f"{s.category.value}.{key}")


def report_to_csv(report: Report) -> bytes:
    """Flat CSV: header, one row per question, 7 category summaries, overall.

    LF line endings, comma separator, double-quote escaping.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for a in report.answers:
        value = a.answer.value if a.answer else "unanswered"
        writer.writerow(("question", a.question_id, a.category.value, value,
                         "", "", "", "", ""))
    for s in report.scores:
        writer.writerow(("category_summary", "", s.category.value, "",
                         s.yes, s.no, s.na, s.unanswered,
                         render_percent(s.percent) if s.percent is not None
                         else ""))
    o = report.overall
    writer.writerow(("overall", "", "", "", o.yes, o.no, o.na, o.unanswered,
                     render_percent(o.percent) if o.percent is not None
                     else ""))
    return buffer.getvalue().encode("utf-8")
