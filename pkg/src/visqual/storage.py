"""File-based session persistence with atomic whole-document writes.

Each session lives in one JSON document under ``sessions/<id>.json``,
written via temp-file-and-rename so a reader (or a crash) never observes a
torn write. The document embeds the full catalog snapshot, keeping sessions
self-contained across catalog hot swaps and process restarts.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path

from .catalog import catalog_from_document, catalog_to_document
from .session import (Answer, AnswerSource, EvaluationSession, ImageRef,
                      RecordedAnswer)
from .timestamps import from_rfc3339, to_rfc3339

SESSION_SCHEMA_VERSION = "1"


class StorageError(Exception):
    """A persisted document is missing or inconsistent."""


def atomic_write_bytes(path: Path, data: bytes) -> None:
    """Write via temp file + rename in the same directory; never torn."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp",
                                    dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise


def session_to_document(session: EvaluationSession) -> dict:
    states: dict[str, dict | None] = {}
    for qid, state in session.states.items():
        if state is None:
            states[qid] = None
        else:
            states[qid] = {
                "answer": state.answer.value,
                "answered_at": to_rfc3339(state.answered_at),
                "source": state.source.value,
            }
    return {
        "schema_version": SESSION_SCHEMA_VERSION,
        "session_id": session.session_id,
        "image": {
            "filename": session.image.filename,
            "sha256": session.image.sha256,
            "media_type": session.image.media_type,
        },
        "created_at": to_rfc3339(session.created_at),
        "updated_at": to_rfc3339(session.updated_at),
        "catalog": catalog_to_document(session.catalog_snapshot),
        "states": states,
    }


def session_from_document(doc: dict) -> EvaluationSession:
    try:
        if doc["schema_version"] != SESSION_SCHEMA_VERSION:
            raise StorageError(f"unsupported session schema "
                               f"{doc['schema_version']!r}")
        catalog = catalog_from_document(doc["catalog"])
        image = ImageRef(
            filename=doc["image"]["filename"],
            sha256=doc["image"]["sha256"],
            media_type=doc["image"]["media_type"],
        )
        states: dict[str, RecordedAnswer | None] = {}
        for qid, raw in doc["states"].items():
            if raw is None:
                states[qid] = None
            else:
                states[qid] = RecordedAnswer(
                    answer=Answer(raw["answer"]),
                    answered_at=from_rfc3339(raw["answered_at"]),
                    source=AnswerSource(raw["source"]),
                )
        session = EvaluationSession(
            session_id=doc["session_id"],
            image=image,
            catalog_snapshot=catalog,
            states=states,
            created_at=from_rfc3339(doc["created_at"]),
            updated_at=from_rfc3339(doc["updated_at"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise StorageError(f"malformed session document: {exc}") from exc
    if set(session.states) != set(catalog.question_ids()):
        raise StorageError("session states do not match catalog snapshot")
    if session.updated_at < session.created_at:
        raise StorageError("session updated_at precedes created_at")
    return session


class SessionStore:
    """One JSON file per session under ``root/sessions``.

    Writes to the same session are serialized via a per-id lock; distinct
    sessions proceed independently.
    """

    def __init__(self, root: Path):
        self.root = Path(root)
        self.sessions_dir = self.root / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.json"

    def exists(self, session_id: str) -> bool:
        return self.path(session_id).is_file()

    def save(self, session: EvaluationSession) -> None:
        document = session_to_document(session)
        data = json.dumps(document, ensure_ascii=False, indent=2)
        atomic_write_bytes(self.path(session.session_id),
                           data.encode("utf-8"))

    def load(self, session_id: str) -> EvaluationSession:
        path = self.path(session_id)
        if not path.is_file():
            raise StorageError(f"no session {session_id!r}")
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise StorageError(f"session file corrupt: {exc.msg}") from exc
        return session_from_document(doc)

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.sessions_dir.glob("*.json"))
