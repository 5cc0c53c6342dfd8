"""UTC timestamp helpers shared across the package.

All persisted timestamps are RFC 3339 UTC at whole-second precision so
that serialize/parse round trips are byte-exact.
"""

from __future__ import annotations

from datetime import datetime, timezone

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def now_utc() -> datetime:
    """Current UTC time truncated to whole seconds."""
    return datetime.now(timezone.utc).replace(microsecond=0)


def to_rfc3339(moment: datetime) -> str:
    if moment.tzinfo is None:
        raise ValueError("naive datetime not allowed")
    return moment.astimezone(timezone.utc).replace(microsecond=0).strftime(_FORMAT)


def from_rfc3339(text: str) -> datetime:
    return datetime.strptime(text, _FORMAT).replace(tzinfo=timezone.utc)
