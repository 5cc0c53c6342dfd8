"""Diagnostic records returned by the catalog and chart-spec validators."""

from __future__ import annotations

from dataclasses import dataclass

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding.

    ``subject`` identifies what the finding is about: a question id for
    catalog diagnostics, a channel or scale path for chart-spec ones.
    """

    severity: str
    code: str
    message: str
    subject: str | None = None

    @property
    def is_error(self) -> bool:
        return self.severity == SEVERITY_ERROR


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)
