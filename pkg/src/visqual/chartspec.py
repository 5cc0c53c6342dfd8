"""A minimal declarative chart-spec grammar for mechanical checking.

The grammar captures structure only (mark, encodings, scales, guides,
dimensionality), not data values: that is all the rule checker needs. Specs
are JSON with strict unknown-key rejection; a file either parses into a
fully valid ChartSpec or is rejected whole.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import IO, Union

from .diagnostics import SEVERITY_ERROR, SEVERITY_WARNING, Diagnostic


class MarkKind(str, Enum):
    BAR = "bar"
    LINE = "line"
    POINT = "point"
    AREA = "area"
    PIE = "pie"
    BAR3D = "bar3d"
    PIE3D = "pie3d"
    SURFACE3D = "surface3d"

    @property
    def is_3d(self) -> bool:
        return self.value.endswith("3d")


class Projection(str, Enum):
    PERSPECTIVE = "perspective"


class Channel(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"
    COLOR = "color"
    SIZE = "size"
    SHAPE = "shape"


class FieldType(str, Enum):
    QUANTITATIVE = "quantitative"
    ORDINAL = "ordinal"
    NOMINAL = "nominal"


class ScaleKind(str, Enum):
    LINEAR = "linear"
    LOG = "log"
    CATEGORICAL = "categorical"
    CONTINUOUS_GRADIENT = "continuous_gradient"


class ReadingOrder(str, Enum):
    LEFT_TO_RIGHT_TOP_TO_BOTTOM = "left_to_right_top_to_bottom"
    RIGHT_TO_LEFT_TOP_TO_BOTTOM = "right_to_left_top_to_bottom"
    BOTTOM_TO_TOP = "bottom_to_top"


class ChartSpecError(Exception):
    """Base class for chart-spec rejections."""


class ParseError(ChartSpecError):
    """Bad JSON or a schema violation (keys, types, enumerations)."""


class InvalidEncoding(ChartSpecError):
    """Duplicate channel, or a Z channel on a two-dimensional chart."""


class InvalidScale(ChartSpecError):
    """Scale fields that contradict each other or their scale kind."""


_QUANTITATIVE_SCALES = (ScaleKind.LINEAR, ScaleKind.LOG)


@dataclass(frozen=True)
class Scale:
    kind: ScaleKind
    domain_min: float | None = None
    domain_max: float | None = None
    gradient_stops: tuple[float, ...] | None = None
    palette_size: int | None = None


@dataclass(frozen=True)
class Encoding:
    channel: Channel
    field: str
    field_type: FieldType
    scale: Scale


@dataclass(frozen=True)
class Facet:
    field: str
    reading_order: ReadingOrder = ReadingOrder.LEFT_TO_RIGHT_TOP_TO_BOTTOM


@dataclass(frozen=True)
class ChartSpec:
    mark: MarkKind
    title: str | None = None
    projection: Projection | None = None
    encodings: tuple[Encoding, ...] = ()
    facet: Facet | None = None
    annotations: tuple[str, ...] = ()

    @property
    def is_three_dimensional(self) -> bool:
        return self.mark.is_3d or self.projection is Projection.PERSPECTIVE

    def encoding(self, channel: Channel) -> Encoding | None:
        for enc in self.encodings:
            if enc.channel is channel:
                return enc
        return None


Source = Union[bytes, str, IO[bytes]]

_TOP_KEYS = frozenset({"title", "mark", "projection", "encodings", "facet",
                       "annotations"})
_ENCODING_KEYS = frozenset({"channel", "field", "type", "scale"})
_SCALE_KEYS = frozenset({"kind", "domain", "stops", "palette_size"})
_FACET_KEYS = frozenset({"field", "reading_order"})


def _read_source(source: Source) -> str:
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _is_number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _enum_value(enum_cls, raw: object, where: str):
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = sorted(e.value for e in enum_cls)
        raise ParseError(f"{where}: {raw!r} is not one of {allowed}") from None


def _check_keys(obj: object, allowed: frozenset[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"{where} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
    return obj


def _default_scale(field_type: FieldType) -> Scale:
    if field_type is FieldType.QUANTITATIVE:
        return Scale(ScaleKind.LINEAR)
    return Scale(ScaleKind.CATEGORICAL)


def _parse_scale(raw: object, where: str) -> Scale:
    obj = _check_keys(raw, _SCALE_KEYS, where)
    if "kind" not in obj:
        raise ParseError(f"{where}: missing 'kind'")
    kind = _enum_value(ScaleKind, obj["kind"], f"{where}.kind")

    domain_min = domain_max = None
    if "domain" in obj:
        domain = obj["domain"]
        if (not isinstance(domain, list) or len(domain) != 2
                or not all(v is None or _is_number(v) for v in domain)):
            raise ParseError(f"{where}.domain must be [min, max] with "
                             "numbers or nulls")
        if kind not in _QUANTITATIVE_SCALES:
            raise InvalidScale(f"{where}: domain bounds only apply to "
                               f"linear/log scales, not {kind.value}")
        domain_min, domain_max = domain
        if (domain_min is not None and domain_max is not None
                and not domain_min < domain_max):
            raise InvalidScale(f"{where}.domain: min must be below max")

    stops = None
    if "stops" in obj:
        raw_stops = obj["stops"]
        if (not isinstance(raw_stops, list)
                or not all(_is_number(v) for v in raw_stops)):
            raise ParseError(f"{where}.stops must be an array of numbers")
        if kind is not ScaleKind.CONTINUOUS_GRADIENT:
            raise InvalidScale(f"{where}: stops only apply to "
                               "continuous_gradient scales")
        if len(raw_stops) < 2:
            raise InvalidScale(f"{where}.stops needs at least 2 entries")
        if raw_stops[0] != 0 or raw_stops[-1] != 1:
            raise InvalidScale(f"{where}.stops must start at 0 and end at 1")
        if any(a >= b for a, b in zip(raw_stops, raw_stops[1:])):
            raise InvalidScale(f"{where}.stops must be strictly ascending")
        stops = tuple(float(v) for v in raw_stops)

    palette_size = None
    if "palette_size" in obj:
        size = obj["palette_size"]
        if not isinstance(size, int) or isinstance(size, bool):
            raise ParseError(f"{where}.palette_size must be an integer")
        if kind is not ScaleKind.CATEGORICAL:
            raise InvalidScale(f"{where}: palette_size only applies to "
                               "categorical scales")
        if size < 1:
            raise InvalidScale(f"{where}.palette_size must be at least 1")
        palette_size = size

    return Scale(kind,
                 float(domain_min) if domain_min is not None else None,
                 float(domain_max) if domain_max is not None else None,
                 stops, palette_size)


def _parse_encoding(raw: object, index: int) -> Encoding:
    where = f"encodings[{index}]"
    obj = _check_keys(raw, _ENCODING_KEYS, where)
    for key in ("channel", "field", "type"):
        if key not in obj:
            raise ParseError(f"{where}: missing {key!r}")
    channel = _enum_value(Channel, obj["channel"], f"{where}.channel")
    if not isinstance(obj["field"], str):
        raise ParseError(f"{where}.field must be a string")
    field_type = _enum_value(FieldType, obj["type"], f"{where}.type")
    if "scale" in obj:
        scale = _parse_scale(obj["scale"], f"{where}.scale")
    else:
        scale = _default_scale(field_type)
    return Encoding(channel, obj["field"], field_type, scale)


def parse_spec(source: Source) -> ChartSpec:
    """Parse and fully validate a chart-spec file (whole-file rejection)."""
    text = _read_source(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} "
                         f"(line {exc.lineno}, column {exc.colno})") from exc
    obj = _check_keys(doc, _TOP_KEYS, "spec")
    if "mark" not in obj:
        raise ParseError("spec: missing 'mark'")
    mark = _enum_value(MarkKind, obj["mark"], "spec.mark")

    title = obj.get("title")
    if title is not None and not isinstance(title, str):
        raise ParseError("spec.title must be a string or null")

    projection = None
    if obj.get("projection") is not None:
        projection = _enum_value(Projection, obj["projection"],
                                 "spec.projection")

    encodings: tuple[Encoding, ...] = ()
    if "encodings" in obj:
        if not isinstance(obj["encodings"], list):
            raise ParseError("spec.encodings must be an array")
        encodings = tuple(_parse_encoding(raw, i)
                          for i, raw in enumerate(obj["encodings"]))

    seen: set[Channel] = set()
    for enc in encodings:
        if enc.channel in seen:
            raise InvalidEncoding(f"duplicate encoding for channel "
                                  f"{enc.channel.value}")
        seen.add(enc.channel)

    facet = None
    if obj.get("facet") is not None:
        fobj = _check_keys(obj["facet"], _FACET_KEYS, "spec.facet")
        if "field" not in fobj or not isinstance(fobj["field"], str):
            raise ParseError("spec.facet.field must be a string")
        order = ReadingOrder.LEFT_TO_RIGHT_TOP_TO_BOTTOM
        if "reading_order" in fobj:
            order = _enum_value(ReadingOrder, fobj["reading_order"],
                                "spec.facet.reading_order")
        facet = Facet(fobj["field"], order)

    annotations: tuple[str, ...] = ()
    if "annotations" in obj:
        notes = obj["annotations"]
        if (not isinstance(notes, list)
                or not all(isinstance(n, str) for n in notes)):
            raise ParseError("spec.annotations must be an array of strings")
        annotations = tuple(notes)

    spec = ChartSpec(mark=mark, title=title, projection=projection,
                     encodings=encodings, facet=facet,
                     annotations=annotations)
    if spec.encoding(Channel.Z) is not None and not spec.is_three_dimensional:
        raise InvalidEncoding("z channel requires a 3d mark or a "
                              "perspective projection")
    return spec


def validate_spec(spec: ChartSpec) -> list[Diagnostic]:
    """Structural diagnostics over an in-memory spec.

    Errors re-check what parse_spec enforces (relevant for specs built in
    code); warnings flag field-type/scale combinations that are suspicious
    but representable, since the rule checker judges those.
    """
    out: list[Diagnostic] = []

    def err(code: str, message: str, subject: str) -> None:
        out.append(Diagnostic(SEVERITY_ERROR, code, message, subject))

    def warn(code: str, message: str, subject: str) -> None:
        out.append(Diagnostic(SEVERITY_WARNING, code, message, subject))

    seen: set[Channel] = set()
    for enc in spec.encodings:
        subject = enc.channel.value
        if enc.channel in seen:
            err("duplicate-channel",
                f"channel {subject} is encoded more than once", subject)
        seen.add(enc.channel)
        scale = enc.scale

        if (scale.domain_min is not None and scale.domain_max is not None
                and not scale.domain_min < scale.domain_max):
            err("domain-inverted", f"{subject}: domain min must be below max",
                subject)
        if ((scale.domain_min is not None or scale.domain_max is not None)
                and scale.kind not in _QUANTITATIVE_SCALES):
            err("domain-on-discrete",
                f"{subject}: domain bounds on a {scale.kind.value} scale",
                subject)
        if scale.gradient_stops is not None:
            if scale.kind is not ScaleKind.CONTINUOUS_GRADIENT:
                err("stops-on-non-gradient",
                    f"{subject}: stops on a {scale.kind.value} scale", subject)
            else:
                stops = scale.gradient_stops
                if (len(stops) < 2 or stops[0] != 0 or stops[-1] != 1
                        or any(a >= b for a, b in zip(stops, stops[1:]))):
                    err("bad-stops",
                        f"{subject}: stops must ascend strictly from 0 to 1",
                        subject)
        if scale.palette_size is not None:
            if scale.kind is not ScaleKind.CATEGORICAL:
                err("palette-on-non-categorical",
                    f"{subject}: palette_size on a {scale.kind.value} scale",
                    subject)
            elif scale.palette_size < 1:
                err("bad-palette-size",
                    f"{subject}: palette_size must be at least 1", subject)

        if (enc.field_type is FieldType.QUANTITATIVE
                and scale.kind is ScaleKind.CATEGORICAL):
            warn("quantitative-on-categorical",
                 f"{subject}: quantitative field {enc.field!r} on a "
                 "categorical scale", subject)
        if enc.field_type in (FieldType.NOMINAL, FieldType.ORDINAL):
            if scale.domain_min is not None or scale.domain_max is not None:
                warn("domain-on-nominal",
                     f"{subject}: {enc.field_type.value} field {enc.field!r} "
                     "with numeric domain bounds", subject)
            if scale.kind is ScaleKind.LOG:
                warn("log-on-discrete",
                     f"{subject}: {enc.field_type.value} field {enc.field!r} "
                     "on a log scale", subject)

    if (spec.encoding(Channel.Z) is not None
            and not spec.is_three_dimensional):
        err("z-in-2d", "z channel requires a 3d mark or a perspective "
            "projection", Channel.Z.value)
    return out
