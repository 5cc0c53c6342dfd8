"""Visualization quality codex engine.

Data-driven question catalog, yes/no/NA evaluation sessions, per-category
scoring with JSON/CSV report export, and a rule checker that lints
declarative chart specs against the automatable criteria.
"""

from .catalog import (CATEGORY_ORDER, Category, DuplicateQuestionId,
                      EmptyCatalog, ParseError, Question, QuestionCatalog,
                      UnknownCategory, load_catalog, questions_by_category,
                      validate_catalog)
from .session import (Answer, AnswerSource, EvaluationSession, ImageRef,
                      Progress, RecordedAnswer, create_session, progress,
                      record_answer)
from .scoring import (CategoryScore, FailedQuestion, OverallScore, Report,
                      ReportAnswer, build_report, score_category)
from .report_io import (ConsistencyError, SchemaError, report_from_json,
                        report_to_csv, report_to_json)
from .chartspec import ChartSpec, Encoding, Scale, parse_spec, validate_spec
from .autocheck import (AutoVerdict, RuleBinding, UnknownRule, Verdict,
                        apply_verdicts, load_bindings, run_checks)

__version__ = "0.1.0"
