"""Command-line interface for batch and CI use.

Exit codes follow lint-tool convention: 0 clean, 1 findings, 2 operational
failure (unreadable or unparseable input). All output bytes are identical
to what the library produces for the same input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import autocheck, chartspec, report_io, scoring, storage
from .catalog import (CatalogError, ParseError, document_diagnostics,
                      load_catalog, parse_catalog_json)
from .fixtures import packaged_bindings_bytes
from .session import (Answer, AnswerSource, EvaluationSession, ImageRef,
                      RecordedAnswer)
from .timestamps import EPOCH

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_FAILURE = 2


def cmd_validate_catalog(path: str) -> int:
    """Print all diagnostics for a catalog file; exit 0 iff none are errors."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        print(f"{path}: cannot read: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    try:
        doc = parse_catalog_json(data)
    except ParseError as exc:
        print(f"{path}: parse error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    diagnostics = document_diagnostics(doc)
    for d in diagnostics:
        subject = f" [{d.subject}]" if d.subject else ""
        print(f"{path}: {d.severity} {d.code}: {d.message}{subject}")
    if any(d.is_error for d in diagnostics):
        return EXIT_FINDINGS
    print(f"{path}: OK ({len(doc['questions'])} questions, "
          f"version {doc['version']})")
    return EXIT_OK


def _load_lint_bindings(path: str | None) -> list[autocheck.RuleBinding]:
    if path is None:
        return autocheck.load_bindings(packaged_bindings_bytes())
    return autocheck.load_bindings(Path(path).read_bytes())


def cmd_lint(paths: list[str], bindings_path: str | None = None,
             output_format: str = "text") -> int:
    """Run the rule checker over spec files; exit 1 on any No verdict."""
    try:
        bindings = _load_lint_bindings(bindings_path)
    except (OSError, autocheck.InvalidBindings, autocheck.UnknownRule) as exc:
        print(f"bindings: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    any_parse_failure = False
    any_no = False
    results: list[dict] = []
    for path in paths:
        entry: dict = {"path": path}
        try:
            spec = chartspec.parse_spec(Path(path).read_bytes())
        except (OSError, chartspec.ChartSpecError) as exc:
            any_parse_failure = True
            entry["error"] = str(exc)
            results.append(entry)
            if output_format == "text":
                print(f"{path}: error: {exc}", file=sys.stderr)
            continue
        verdicts = autocheck.run_checks(spec, bindings)
        entry["verdicts"] = [
            {"question_id": v.question_id, "verdict": v.verdict.value,
             "evidence": v.evidence}
            for v in verdicts
        ]
        results.append(entry)
        for v in verdicts:
            if v.verdict is autocheck.Verdict.NO:
                any_no = True
            if output_format == "text":
                print(f"{path}: {v.question_id} {v.verdict.value} "
                      f"({v.evidence})")
    if output_format == "json":
        print(json.dumps(results, indent=2))
    if any_parse_failure:
        return EXIT_FAILURE
    return EXIT_FINDINGS if any_no else EXIT_OK


def _session_from_answers(answers_bytes: bytes,
                          catalog_bytes: bytes,
                          answers_name: str) -> EvaluationSession:
    """Deterministic ephemeral session: epoch timestamps, derived id."""
    catalog = load_catalog(catalog_bytes)
    answers = json.loads(answers_bytes.decode("utf-8"))
    if not isinstance(answers, dict):
        raise ValueError("answers file must be a JSON object")

    digest = hashlib.sha256(answers_bytes + catalog_bytes).hexdigest()
    session = EvaluationSession(
        session_id=f"score-{digest[:12]}",
        image=ImageRef(filename=answers_name,
                       sha256=hashlib.sha256(answers_bytes).hexdigest(),
                       media_type="application/json"),
        catalog_snapshot=catalog,
        states={q.id: None for q in catalog.questions},
        created_at=EPOCH,
        updated_at=EPOCH,
    )
    unknown = [qid for qid in answers if qid not in session.states]
    if unknown:
        raise KeyError(", ".join(sorted(unknown)))
    for qid, value in answers.items():
        if value not in ("yes", "no", "na"):
            raise ValueError(f"answer for {qid} must be yes/no/na, "
                             f"got {value!r}")
        session.states[qid] = RecordedAnswer(
            Answer(value), EPOCH, AnswerSource.MANUAL)
    return session


def cmd_score(session_path: str | None, answers_path: str | None,
              catalog_path: str | None, out_format: str = "json",
              output_path: str | None = None) -> int:
    """Score a session or an answers file and write the report."""
    try:
        if session_path is not None:
            doc = json.loads(Path(session_path).read_text(encoding="utf-8"))
            session = storage.session_from_document(doc)
        else:
            if catalog_path is None:
                print("--answers requires --catalog", file=sys.stderr)
                return EXIT_FAILURE
            session = _session_from_answers(
                Path(answers_path).read_bytes(),
                Path(catalog_path).read_bytes(),
                Path(answers_path).name,
            )
    except KeyError as exc:
        print(f"unknown question ids: {exc.args[0]}", file=sys.stderr)
        return EXIT_FINDINGS
    except (OSError, ValueError, CatalogError, storage.StorageError) as exc:
        print(f"cannot load inputs: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    report = scoring.build_report(session)
    if out_format == "csv":
        payload = report_io.report_to_csv(report)
    else:
        payload = report_io.report_to_json(report)
    try:
        if output_path is None:
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.flush()
        else:
            Path(output_path).write_bytes(payload)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="visqual",
        description="Visualization quality codex: catalog validation, "
                    "spec linting, offline scoring, HTTP service.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate-catalog",
                                help="validate a catalog file")
    p_validate.add_argument("path")

    p_lint = sub.add_parser("lint", help="run rule checks over spec files")
    p_lint.add_argument("paths", nargs="+", metavar="SPEC")
    p_lint.add_argument("--bindings", default=None,
                        help="bindings file (default: packaged bindings)")
    p_lint.add_argument("--format", choices=("text", "json"),
                        default="text", dest="output_format")

    p_score = sub.add_parser("score", help="score answers and export report")
    group = p_score.add_mutually_exclusive_group(required=True)
    group.add_argument("--session", help="persisted session document")
    group.add_argument("--answers",
                       help='JSON map {"Q-...": "yes"|"no"|"na"}')
    p_score.add_argument("--catalog",
                         help="catalog file (required with --answers)")
    p_score.add_argument("--out", choices=("json", "csv"), default="json")
    p_score.add_argument("--output", default=None,
                         help="write to file instead of stdout")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate-catalog":
        return cmd_validate_catalog(args.path)
    if args.command == "lint":
        return cmd_lint(args.paths, args.bindings, args.output_format)
    if args.command == "score":
        return cmd_score(args.session, args.answers, args.catalog,
                         args.out, args.output)
    if args.command == "serve":
        from .service import ServiceConfig, run
        config = ServiceConfig.from_env()
        if args.port is not None:
            config.port = args.port
        run(config)
        return EXIT_OK
    raise AssertionError(f"unhandled command {args.command}")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
