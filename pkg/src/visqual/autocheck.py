"""Mechanical rules over chart specs, proposing answers for bound questions.

Each rule yields Yes, No, or Indeterminate with machine-readable evidence,
or no verdict at all when it does not apply to the given spec. Indeterminate
is a first-class outcome: wherever the literature is split (axis truncation,
"proper" 3D use) a rule hands the question back to the human instead of
forcing a side. Only Yes/No verdicts may be written into a session, always
with source=auto.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import IO, Callable, Mapping, Union

from .session import Answer, AnswerSource, EvaluationSession, record_answer
from .chartspec import Channel, ChartSpec, FieldType, ScaleKind


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class AutoVerdict:
    question_id: str
    verdict: Verdict
    evidence: str


@dataclass(frozen=True)
class RuleOutcome:
    """A rule's verdict before it is bound to a question id."""

    verdict: Verdict
    evidence: str


@dataclass(frozen=True)
class RuleBinding:
    rule_name: str
    question_id: str
    parameters: Mapping[str, object] = field(default_factory=dict)


class UnknownRule(Exception):
    def __init__(self, rule_name: str):
        self.rule_name = rule_name
        super().__init__(f"unknown rule {rule_name!r}; known rules: "
                         f"{', '.join(sorted(RULES))}")


class InvalidBindings(Exception):
    """Bindings violate rule/question uniqueness or the bindings schema."""


def _decimal_fraction(value: object) -> Fraction:
    """Exact rational with decimal semantics: 0.55 means 55/100."""
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)  # type: ignore[arg-type]


DEFAULT_COLOR_THRESHOLD = 8
DEFAULT_GRADIENT_TOLERANCE = 0.1


def rule_color_count(spec: ChartSpec,
                     threshold: int = DEFAULT_COLOR_THRESHOLD) -> RuleOutcome:
    """Count distinct data colors against a configurable bound.

    No color encoding means vacuously not too many. Continuous color scales
    carry no discrete count and pass; the gradient rule judges them instead.
    """
    color = spec.encoding(Channel.COLOR)
    if color is None:
        return RuleOutcome(Verdict.YES, "no_color_encoding")
    if color.scale.kind is not ScaleKind.CATEGORICAL:
        return RuleOutcome(Verdict.YES,
                           f"continuous_color_scale={color.scale.kind.value}")
    if color.scale.palette_size is None:
        return RuleOutcome(Verdict.INDETERMINATE, "palette_size_unknown")
    count = color.scale.palette_size
    verdict = Verdict.YES if count <= threshold else Verdict.NO
    return RuleOutcome(verdict,
                       f"distinct_colors={count}, threshold={threshold}")


def rule_gradient_equidistribution(
        spec: ChartSpec,
        tolerance: float = DEFAULT_GRADIENT_TOLERANCE) -> RuleOutcome | None:
    """Check gradient stops for regular spacing.

    With n stops the uniform gap is 1/(n-1); the check passes iff the worst
    gap deviates from uniform by at most tolerance*uniform (closed bound, so
    a deviation of exactly the tolerance passes). Stops are compared as the
    decimal values written in the spec, not as binary floats, so the
    boundary is exact.
    """
    color = spec.encoding(Channel.COLOR)
    if (color is None or color.scale.kind is not ScaleKind.CONTINUOUS_GRADIENT
            or color.scale.gradient_stops is None):
        return None
    stops = [_decimal_fraction(s) for s in color.scale.gradient_stops]
    uniform = Fraction(1, len(stops) - 1)
    deviation = max(abs((b - a) - uniform)
                    for a, b in zip(stops, stops[1:]))
    allowed = _decimal_fraction(tolerance) * uniform
    verdict = Verdict.YES if deviation <= allowed else Verdict.NO
    return RuleOutcome(verdict,
                       f"max_gap_deviation={float(deviation):g}, "
                       f"uniform_gap={float(uniform):g}, "
                       f"tolerance={float(_decimal_fraction(tolerance)):g}")


def rule_scale_type_mismatch(spec: ChartSpec) -> RuleOutcome | None:
    """Flag continuous color scales on categorical fields and vice versa."""
    color = spec.encoding(Channel.COLOR)
    if color is None:
        return None
    discrete_field = color.field_type in (FieldType.NOMINAL,
                                          FieldType.ORDINAL)
    mismatch = ((discrete_field
                 and color.scale.kind is ScaleKind.CONTINUOUS_GRADIENT)
                or (color.field_type is FieldType.QUANTITATIVE
                    and color.scale.kind is ScaleKind.CATEGORICAL))
    evidence = (f"field_type={color.field_type.value}, "
                f"scale_kind={color.scale.kind.value}")
    return RuleOutcome(Verdict.NO if mismatch else Verdict.YES, evidence)


def rule_third_dimension(spec: ChartSpec) -> RuleOutcome:
    """Two dimensions pass; decorative 3D fails; data-bound 3D is a human
    call (whether the third dimension is utilized properly is judgment)."""
    if not spec.is_three_dimensional:
        return RuleOutcome(Verdict.YES, "two_dimensional")
    z = spec.encoding(Channel.Z)
    if z is None or not z.field:
        return RuleOutcome(Verdict.NO, "decorative_3d")
    return RuleOutcome(Verdict.INDETERMINATE, f"data_bound_3d, z_field={z.field}")


def rule_axis_baseline(spec: ChartSpec) -> RuleOutcome | None:
    """Zero baselines pass; truncation is never an automatic No.

    Whether a trimmed Y axis misleads depends on units and context, and the
    literature disagrees, so any non-zero start is handed to the human: with
    an annotation as a candidate justification, without one flagged as
    unjustified truncation.
    """
    y = spec.encoding(Channel.Y)
    if (y is None or y.field_type is not FieldType.QUANTITATIVE
            or y.scale.domain_min is None):
        return None
    if y.scale.domain_min == 0:
        return RuleOutcome(Verdict.YES, "zero_baseline")
    if spec.annotations:
        return RuleOutcome(Verdict.INDETERMINATE,
                           f"justified_truncation, "
                           f"domain_min={y.scale.domain_min:g}")
    return RuleOutcome(Verdict.INDETERMINATE,
                       f"unjustified_truncation, "
                       f"domain_min={y.scale.domain_min:g}")


def rule_guides_presence(spec: ChartSpec) -> RuleOutcome:
    """Require a title and a field name on every channel needing a guide.

    X and Y always need axis labels; a color channel needs a legend unless
    it encodes a single category.
    """
    if spec.title is None or not spec.title.strip():
        return RuleOutcome(Verdict.NO, "missing_title")
    for channel in (Channel.X, Channel.Y):
        enc = spec.encoding(channel)
        if enc is not None and not enc.field:
            return RuleOutcome(Verdict.NO,
                               f"unlabeled_channel={channel.value}")
    color = spec.encoding(Channel.COLOR)
    if color is not None and color.scale.palette_size != 1:
        if not color.field:
            return RuleOutcome(Verdict.NO, "unlabeled_channel=color")
    return RuleOutcome(Verdict.YES, "guides_present")


RULES: dict[str, Callable[..., RuleOutcome | None]] = {
    "color_count": rule_color_count,
    "gradient_equidistribution": rule_gradient_equidistribution,
    "scale_type_mismatch": rule_scale_type_mismatch,
    "third_dimension": rule_third_dimension,
    "axis_baseline": rule_axis_baseline,
    "guides_presence": rule_guides_presence,
}


def _check_bindings(bindings: list[RuleBinding]) -> None:
    rules_seen: set[str] = set()
    questions_seen: set[str] = set()
    for binding in bindings:
        if binding.rule_name not in RULES:
            raise UnknownRule(binding.rule_name)
        if binding.rule_name in rules_seen:
            raise InvalidBindings(f"rule {binding.rule_name!r} is bound to "
                                  "more than one question")
        if binding.question_id in questions_seen:
            raise InvalidBindings(f"question {binding.question_id!r} has "
                                  "more than one rule")
        rules_seen.add(binding.rule_name)
        questions_seen.add(binding.question_id)


def run_checks(spec: ChartSpec,
               bindings: list[RuleBinding]) -> list[AutoVerdict]:
    """Run every bound rule that applies to the spec, in binding order."""
    _check_bindings(bindings)
    verdicts: list[AutoVerdict] = []
    for binding in bindings:
        outcome = RULES[binding.rule_name](spec, **binding.parameters)
        if outcome is None:
            continue
        verdicts.append(AutoVerdict(binding.question_id, outcome.verdict,
                                    outcome.evidence))
    return verdicts


def apply_verdicts(session: EvaluationSession,
                   verdicts: list[AutoVerdict]) -> list[str]:
    """Write Yes/No verdicts into a session with source=auto.

    Indeterminate verdicts and verdicts for questions outside the session's
    snapshot are left for the human. Returns the applied question ids.
    """
    applied: list[str] = []
    for verdict in verdicts:
        if verdict.verdict is Verdict.INDETERMINATE:
            continue
        if verdict.question_id not in session.states:
            continue
        answer = Answer.YES if verdict.verdict is Verdict.YES else Answer.NO
        record_answer(session, verdict.question_id, answer,
                      AnswerSource.AUTO)
        applied.append(verdict.question_id)
    return applied


BindingsSource = Union[bytes, str, IO[bytes]]


def load_bindings(source: BindingsSource) -> list[RuleBinding]:
    """Load the bindings file: ``[{"rule", "question_id", "parameters"?}]``."""
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InvalidBindings(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, list):
        raise InvalidBindings("bindings file must be a JSON array")
    bindings: list[RuleBinding] = []
    for index, entry in enumerate(doc):
        if not isinstance(entry, dict):
            raise InvalidBindings(f"bindings[{index}] must be an object")
        unknown = set(entry) - {"rule", "question_id", "parameters"}
        if unknown:
            raise InvalidBindings(f"bindings[{index}]: unknown keys "
                                  f"{sorted(unknown)}")
        rule = entry.get("rule")
        question_id = entry.get("question_id")
        if not isinstance(rule, str) or not isinstance(question_id, str):
            raise InvalidBindings(f"bindings[{index}]: 'rule' and "
                                  "'question_id' must be strings")
        parameters = entry.get("parameters", {})
        if not isinstance(parameters, dict):
            raise InvalidBindings(f"bindings[{index}]: 'parameters' must "
                                  "be an object")
        bindings.append(RuleBinding(rule, question_id, parameters))
    _check_bindings(bindings)
    return bindings
