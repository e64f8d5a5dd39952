"""Typed, versioned logs of stakeholder feedback for ML pipelines."""

from .model import (
    Direction,
    Elicitation,
    FeedbackLog,
    LintFinding,
    MetricReading,
    MetricSpec,
    PersonRef,
    PipelineSnapshot,
    ReadingContext,
    Record,
    Severity,
    Stage,
    StakeholderRef,
    Status,
    Target,
    TargetCheck,
    UpdateClass,
    UpdateEntry,
    UpdateStatus,
    classify_update,
    new_log,
)
from .lint import validate
from .docformat import export_html, export_markdown, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "Direction",
    "Elicitation",
    "FeedbackLog",
    "LintFinding",
    "MetricReading",
    "MetricSpec",
    "PersonRef",
    "PipelineSnapshot",
    "ReadingContext",
    "Record",
    "Severity",
    "Stage",
    "StakeholderRef",
    "Status",
    "Target",
    "TargetCheck",
    "UpdateClass",
    "UpdateEntry",
    "UpdateStatus",
    "classify_update",
    "new_log",
    "validate",
    "parse",
    "serialize",
    "export_markdown",
    "export_html",
    "__version__",
]
