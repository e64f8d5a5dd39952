"""Exception hierarchy shared by the document model, formats, registry, and service."""

from __future__ import annotations


class FeedbackLogError(Exception):
    """Base class for all library errors."""

    #: short machine-readable code, mirrored into API error bodies
    code = "Error"
    #: document/field path the error refers to, when known
    path = ""

    def __init__(self, message: str = "", path: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        if path:
            self.path = path
        self.code = self.__class__.__name__


# --- document model ---------------------------------------------------------

class EmptyField(FeedbackLogError):
    """A mandatory text field was blank."""


class LogFinalized(FeedbackLogError):
    """Mutation attempted on a finalized log."""


class ConsentMissing(FeedbackLogError):
    """An identifiable stakeholder has no recorded consent."""


class UnknownRecord(FeedbackLogError):
    """Record id does not exist in the log."""


class RecordCompleted(FeedbackLogError):
    """Mutation attempted on a completed record."""


class InvalidEntry(FeedbackLogError):
    """An update row (or metric spec) violates a field constraint."""

    def __init__(self, field: str, message: str = ""):
        super().__init__(message or f"invalid entry field: {field}", path=field)
        self.field = field


class UnknownUpdate(FeedbackLogError):
    """Update id does not exist in the record."""


class EmptySummary(FeedbackLogError):
    """choose_updates requires a non-empty summary."""


class EmptyJustification(FeedbackLogError):
    """record_inaction requires a non-empty justification."""


class InvalidState(FeedbackLogError):
    """Operation conflicts with the record/log lifecycle (e.g. choose xor inaction)."""


class DuplicateMetric(FeedbackLogError):
    """Metric name already declared in the log."""


class UnknownMetric(FeedbackLogError):
    """Metric name does not resolve to a declared spec."""


class ContextBeforeIntroduction(FeedbackLogError):
    """Reading context precedes the metric's introduction in document order."""


class MissingReading(FeedbackLogError):
    """No reading exists for the metric at the requested context."""


class AmbiguousReading(FeedbackLogError):
    """More than one reading exists for the metric at the requested context."""


class IncompleteRecords(FeedbackLogError):
    """finalize() called while records are still open."""

    def __init__(self, record_ids: list[str]):
        super().__init__(f"records not completed: {', '.join(record_ids)}")
        self.record_ids = list(record_ids)


# --- docformat ---------------------------------------------------------------

class DocumentSyntaxError(FeedbackLogError):
    """Input is not well-formed JSON; carries the 1-based position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SchemaViolation(FeedbackLogError):
    """Document is well-formed but violates the schema or an error-level lint rule."""

    def __init__(self, path: str, message: str, findings: list | None = None):
        super().__init__(message, path=path)
        self.findings = list(findings or [])


class UnsupportedVersion(FeedbackLogError):
    """schema_version is newer than this library understands."""


# --- scanner -----------------------------------------------------------------

class RootNotFound(FeedbackLogError):
    """Scan root path does not exist."""


# --- registry ----------------------------------------------------------------

class AccessDenied(FeedbackLogError):
    """Actor's effective role is insufficient for the operation."""


class StaleRevision(FeedbackLogError):
    """Optimistic-concurrency conflict: stored revision is not older."""


class ValidationFailed(FeedbackLogError):
    """Lint errors block storing the log."""

    def __init__(self, findings: list):
        first = findings[0].path if findings else ""
        super().__init__(
            "lint errors: " + "; ".join(f"{f.rule_id} {f.path}" for f in findings),
            path=first,
        )
        self.findings = list(findings)


class UnknownLog(FeedbackLogError):
    """Log id not present in the registry."""


class SelfLink(FeedbackLogError):
    """Link endpoints must differ."""


class DuplicateLink(FeedbackLogError):
    """(from, to, relation) already linked."""


class MalformedQuery(FeedbackLogError):
    """Search query uses an unknown filter key."""


class UnknownSection(FeedbackLogError):
    """Section path does not resolve in the target log."""
