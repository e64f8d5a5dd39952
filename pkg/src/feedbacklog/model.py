"""Document model for stakeholder-feedback logs.

A log bookends stakeholder involvement with a starting-point snapshot and an
optional final summary; between them sits an ordered list of records, one per
stakeholder interaction. Each record tracks how feedback was elicited, what it
said, which pipeline updates were considered (the five-column Which / Where /
When / Why / Effect table), and which were ultimately implemented.

All mutating operations go through methods on :class:`FeedbackLog` so the
lifecycle invariants (sequential record ids, choose-xor-inaction, revision
monotonicity) hold after any operation sequence. Documents parsed from disk
may have been edited by hand; the lint catalog in :mod:`feedbacklog.lint`
covers those.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Optional

from .errors import (
    AmbiguousReading,
    ConsentMissing,
    ContextBeforeIntroduction,
    DuplicateMetric,
    EmptyField,
    EmptyJustification,
    EmptySummary,
    IncompleteRecords,
    InvalidEntry,
    InvalidState,
    LogFinalized,
    MissingReading,
    RecordCompleted,
    UnknownMetric,
    UnknownRecord,
    UnknownUpdate,
)

SCHEMA_VERSION = 1

_SLUG_RE = re.compile(r"^[a-z0-9]+(-[a-z0-9]+)*$")
_RECORD_ID_RE = re.compile(r"^R[0-9]+$")
_UPDATE_ID_RE = re.compile(r"^U[0-9]+$")


class Status(str, Enum):
    DRAFT = "draft"
    ACTIVE = "active"
    FINALIZED = "finalized"


class Direction(str, Enum):
    HIGHER_BETTER = "higher_better"
    LOWER_BETTER = "lower_better"


class Stage(str, Enum):
    """Pipeline stage an update lands in."""

    DATA_COLLECTION = "data_collection_pre_training"
    MODEL_DEVELOPMENT = "model_development_training"
    MODEL_DEPLOYMENT = "model_deployment_post_training"


STAGE_LABELS = {
    Stage.DATA_COLLECTION: "Data Collection (pre-training)",
    Stage.MODEL_DEVELOPMENT: "Model Development (training)",
    Stage.MODEL_DEPLOYMENT: "Model Deployment (post-training)",
}


class UpdateStatus(str, Enum):
    CONSIDERED = "considered"
    IMPLEMENTED = "implemented"
    REJECTED = "rejected"


class UpdateClass(str, Enum):
    MODEL = "model"
    ECOSYSTEM = "ecosystem"
    MIXED = "mixed"


class TargetCheck(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NO_TARGET = "no_target"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


#: update kinds; the first four change the model itself, the rest change the
#: surrounding ecosystem. Free-form kinds use the "other:<text>" form and are
#: ecosystem-side.
MODEL_KINDS = frozenset({"dataset", "loss_function", "parameter_space", "prompt"})
ECOSYSTEM_KINDS = frozenset(
    {
        "documentation",
        "interface_ux",
        "accountability_structure",
        "deployment_details",
        "metrics",
    }
)
KNOWN_KINDS = MODEL_KINDS | ECOSYSTEM_KINDS

KIND_LABELS = {
    "dataset": "Dataset",
    "loss_function": "Loss function",
    "parameter_space": "Parameter space",
    "prompt": "Prompt",
    "documentation": "Documentation",
    "interface_ux": "Interface/UX",
    "accountability_structure": "Accountability structure",
    "deployment_details": "Deployment details",
    "metrics": "Metrics",
}

#: stakeholder categories; free-form ones use "other:<text>".
KNOWN_CATEGORIES = frozenset(
    {"end_user", "regulator", "domain_expert", "internal"}
)

COMPARATORS = (">", ">=", "<", "<=")


def is_valid_kind(kind: str) -> bool:
    return kind in KNOWN_KINDS or (kind.startswith("other:") and len(kind) > 6)


def is_valid_category(category: str) -> bool:
    return category in KNOWN_CATEGORIES or (
        category.startswith("other:") and len(category) > 6
    )


def kind_label(kind: str) -> str:
    if kind.startswith("other:"):
        return kind[6:]
    return KIND_LABELS.get(kind, kind)


def classify_update(kinds: Iterable[str]) -> UpdateClass:
    """Partition an update by its kinds: model-side, ecosystem-side, or mixed."""
    kinds = set(kinds)
    if not kinds:
        raise InvalidEntry("kinds", "kinds must be non-empty")
    model = any(k in MODEL_KINDS for k in kinds)
    eco = any(k not in MODEL_KINDS for k in kinds)
    if model and eco:
        return UpdateClass.MIXED
    return UpdateClass.MODEL if model else UpdateClass.ECOSYSTEM


def slugify(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "log"


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def normalize_value(value: float) -> float:
    """Readings and targets are decimals with at most 6 fractional digits."""
    return round(float(value), 6)


def format_value(value: float) -> str:
    """Locale-independent rendering: no separators, trailing zeros trimmed."""
    if value == int(value):
        return str(int(value))
    return f"{value:.6f}".rstrip("0").rstrip(".")


# --- reading contexts --------------------------------------------------------

_FINAL_ORD = 10**9


@dataclass(frozen=True)
class ReadingContext:
    """Point in the document a reading is attached to.

    Encoded as ``starting_point``, ``baseline:R2``, ``after_update:R2/U3``,
    or ``final``; document order follows the record/update sequence.
    """

    kind: str  # starting_point | baseline | after_update | final
    record_id: str = ""
    update_id: str = ""

    @staticmethod
    def starting_point() -> "ReadingContext":
        return ReadingContext("starting_point")

    @staticmethod
    def baseline(record_id: str) -> "ReadingContext":
        return ReadingContext("baseline", record_id)

    @staticmethod
    def after_update(record_id: str, update_id: str) -> "ReadingContext":
        return ReadingContext("after_update", record_id, update_id)

    @staticmethod
    def final() -> "ReadingContext":
        return ReadingContext("final")

    def encode(self) -> str:
        if self.kind == "starting_point" or self.kind == "final":
            return self.kind
        if self.kind == "baseline":
            return f"baseline:{self.record_id}"
        return f"after_update:{self.record_id}/{self.update_id}"

    @staticmethod
    def parse(text: str) -> "ReadingContext":
        if text == "starting_point":
            return ReadingContext.starting_point()
        if text == "final":
            return ReadingContext.final()
        if text.startswith("baseline:"):
            rid = text[len("baseline:"):]
            if _RECORD_ID_RE.match(rid):
                return ReadingContext.baseline(rid)
        if text.startswith("after_update:"):
            rest = text[len("after_update:"):]
            rid, sep, uid = rest.partition("/")
            if sep and _RECORD_ID_RE.match(rid) and _UPDATE_ID_RE.match(uid):
                return ReadingContext.after_update(rid, uid)
        raise InvalidEntry("context", f"unparseable reading context: {text!r}")

    def ordinal(self) -> tuple[int, int]:
        """Document-order key; origins compare with <= against contexts."""
        if self.kind == "starting_point":
            return (0, 0)
        if self.kind == "final":
            return (_FINAL_ORD, _FINAL_ORD)
        rnum = int(self.record_id[1:])
        if self.kind == "baseline":
            return (rnum, 0)
        return (rnum, int(self.update_id[1:]))


# --- leaf types ----------------------------------------------------------------

@dataclass
class PersonRef:
    id: str
    display_name: str = ""


@dataclass
class StakeholderRef:
    """Who gave feedback. Identifiable people must have consent on record."""

    label: str
    category: str  # end_user | regulator | domain_expert | internal | other:<text>
    identifiable: bool = False
    consent_recorded: bool = False

    def category_display(self) -> str:
        if self.category.startswith("other:"):
            return "other"
        return self.category.replace("_", " ")


@dataclass
class Elicitation:
    stakeholders: list[StakeholderRef] = field(default_factory=list)
    reason: str = ""
    presentation: str = ""


@dataclass
class Target:
    comparator: str  # > | >= | < | <=
    value: float

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise InvalidEntry("target.comparator", f"unknown comparator {self.comparator!r}")
        self.value = normalize_value(self.value)

    def met_by(self, value: float) -> bool:
        if self.comparator == ">":
            return value > self.value
        if self.comparator == ">=":
            return value >= self.value
        if self.comparator == "<":
            return value < self.value
        return value <= self.value


@dataclass
class MetricSpec:
    """A declared evaluation metric.

    ``introduced_by`` is either the string ``"starting_point"`` or a
    ``(record_id, update_id)`` pair when an update added the metric.
    """

    name: str
    description: str = ""
    direction: Direction = Direction.HIGHER_BETTER
    unit: str = ""
    target: Optional[Target] = None
    introduced_by: str | tuple[str, str] = "starting_point"

    def __post_init__(self):
        if isinstance(self.direction, str):
            self.direction = Direction(self.direction)
        if isinstance(self.introduced_by, list):
            self.introduced_by = tuple(self.introduced_by)
        if not self.name.strip():
            raise InvalidEntry("name", "metric name must be non-empty")
        if self.target is not None:
            up = self.target.comparator in (">", ">=")
            if (self.direction is Direction.HIGHER_BETTER) != up:
                raise InvalidEntry(
                    "target.comparator",
                    f"comparator {self.target.comparator!r} conflicts with direction "
                    f"{self.direction.value}",
                )

    def introduction_ordinal(self) -> tuple[int, int]:
        if self.introduced_by == "starting_point":
            return (0, 0)
        rid, uid = self.introduced_by
        return (int(rid[1:]), int(uid[1:]))


@dataclass
class MetricReading:
    metric_name: str
    value: float
    context: ReadingContext = field(default_factory=ReadingContext.starting_point)
    note: str = ""

    def __post_init__(self):
        self.value = normalize_value(self.value)


@dataclass
class PipelineSnapshot:
    """State of the pipeline: data, model, and the metrics in play.

    ``metrics_note`` carries prose when no structured metric exists yet
    ("No statistical metric yet").
    """

    data_description: str = ""
    model_description: str = ""
    metrics: list[MetricSpec] = field(default_factory=list)
    readings: list[MetricReading] = field(default_factory=list)
    metrics_note: str = ""


@dataclass
class UpdateEntry:
    """One row of a record's incorporation table.

    which  - what the update is
    kinds  - where it lands in the update taxonomy (model vs ecosystem side)
    stage  - when in the pipeline lifecycle it occurs
    why    - why it was considered
    effect - readings and/or a note; every row reports an effect
    """

    which: str
    kinds: set[str] = field(default_factory=set)
    stage: Stage = Stage.MODEL_DEVELOPMENT
    why: str = ""
    effect_readings: list[MetricReading] = field(default_factory=list)
    effect_note: str = ""
    id: str = ""
    status: UpdateStatus = UpdateStatus.CONSIDERED

    def __post_init__(self):
        self.kinds = set(self.kinds)
        if isinstance(self.stage, str):
            self.stage = Stage(self.stage)
        if isinstance(self.status, str):
            self.status = UpdateStatus(self.status)

    def has_effect(self) -> bool:
        return bool(self.effect_readings) or bool(self.effect_note.strip())


@dataclass
class Record:
    """One self-contained stakeholder interaction."""

    id: str
    elicitation: Elicitation = field(default_factory=Elicitation)
    feedback_text: str = ""
    candidate_updates: list[UpdateEntry] = field(default_factory=list)
    chosen_update_ids: set[str] = field(default_factory=set)
    summary_text: str = ""
    inaction_justification: str = ""
    completed: bool = False

    def __post_init__(self):
        self.chosen_update_ids = set(self.chosen_update_ids)

    def update(self, update_id: str) -> UpdateEntry:
        for entry in self.candidate_updates:
            if entry.id == update_id:
                return entry
        raise UnknownUpdate(f"{self.id} has no update {update_id}", path="update_id")

    def next_update_id(self) -> str:
        return f"U{len(self.candidate_updates) + 1}"


@dataclass
class LintFinding:
    rule_id: str
    severity: Severity
    path: str
    message: str

    def sort_key(self) -> tuple[int, str]:
        order = {Severity.ERROR: 0, Severity.WARNING: 1, Severity.INFO: 2}
        return (order[self.severity], self.path)


def _require_consent(stakeholders: Iterable[StakeholderRef]) -> None:
    for s in stakeholders:
        if s.identifiable and not s.consent_recorded:
            raise ConsentMissing(f"identifiable stakeholder {s.label!r} lacks recorded consent")


def _validate_elicitation_shape(elicitation: Elicitation) -> None:
    if not elicitation.stakeholders:
        raise EmptyField("elicitation requires at least one stakeholder")
    for s in elicitation.stakeholders:
        if not s.label.strip():
            raise EmptyField("stakeholder label must be non-empty")
        if not is_valid_category(s.category):
            raise InvalidEntry("category", f"unknown stakeholder category {s.category!r}")
    _require_consent(elicitation.stakeholders)


# --- the log -------------------------------------------------------------------

@dataclass
class FeedbackLog:
    """The full document. Mutate only through the operation methods."""

    id: str
    title: str
    pipeline_name: str
    owner: PersonRef
    starting_point: PipelineSnapshot
    status: Status = Status.DRAFT
    records: list[Record] = field(default_factory=list)
    final_summary: Optional[PipelineSnapshot] = None
    metrics: list[MetricSpec] = field(default_factory=list)
    readings: list[MetricReading] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION
    revision: int = 1
    created_at: datetime = field(default_factory=utcnow)
    updated_at: datetime = field(default_factory=utcnow)

    # -- lookups ---------------------------------------------------------

    def record(self, record_id: str) -> Record:
        for rec in self.records:
            if rec.id == record_id:
                return rec
        raise UnknownRecord(f"no record {record_id} in log {self.id}", path="record_id")

    def metric_specs(self) -> list[MetricSpec]:
        """Full metric catalog: starting point plus update-introduced specs."""
        return list(self.starting_point.metrics) + list(self.metrics)

    def metric_spec(self, name: str) -> MetricSpec:
        for spec in self.metric_specs():
            if spec.name == name:
                return spec
        raise UnknownMetric(f"no metric {name!r} in log {self.id}", path="metric_name")

    def all_readings(self) -> list[MetricReading]:
        out = list(self.starting_point.readings) + list(self.readings)
        for rec in self.records:
            for entry in rec.candidate_updates:
                out.extend(entry.effect_readings)
        if self.final_summary is not None:
            out.extend(self.final_summary.readings)
        return out

    def readings_at(self, metric_name: str, context: ReadingContext) -> list[MetricReading]:
        return [
            r
            for r in self.all_readings()
            if r.metric_name == metric_name and r.context == context
        ]

    # -- internal helpers --------------------------------------------------

    def _touch(self) -> None:
        self.revision += 1
        self.updated_at = utcnow()

    def _check_not_finalized(self) -> None:
        if self.status is Status.FINALIZED:
            raise LogFinalized(f"log {self.id} is finalized")

    def _check_reading(self, reading: MetricReading) -> None:
        spec = self.metric_spec(reading.metric_name)
        ctx = reading.context
        if ctx.kind in ("baseline", "after_update"):
            rec = self.record(ctx.record_id)
            if ctx.kind == "after_update":
                rec.update(ctx.update_id)
        if ctx.ordinal() < spec.introduction_ordinal():
            raise ContextBeforeIntroduction(
                f"metric {reading.metric_name!r} is introduced at "
                f"{spec.introduced_by} but read at {ctx.encode()}"
            )

    def _check_update_entry(self, entry: UpdateEntry) -> None:
        if not entry.which.strip():
            raise InvalidEntry("which", "update description must be non-empty")
        if not entry.kinds:
            raise InvalidEntry("kinds", "update must have at least one kind")
        for kind in entry.kinds:
            if not is_valid_kind(kind):
                raise InvalidEntry("kinds", f"unknown update kind {kind!r}")
        if not entry.why.strip():
            raise InvalidEntry("why", "update rationale must be non-empty")
        if not entry.has_effect():
            raise InvalidEntry("effect", "every update row must report an effect")

    # -- operations --------------------------------------------------------

    def open_record(self, elicitation: Elicitation) -> str:
        """Append a new record for a fresh stakeholder interaction."""
        self._check_not_finalized()
        _validate_elicitation_shape(elicitation)
        record_id = f"R{len(self.records) + 1}"
        self.records.append(Record(id=record_id, elicitation=elicitation))
        if self.status is Status.DRAFT:
            self.status = Status.ACTIVE
        self._touch()
        return record_id

    def set_elicitation(self, record_id: str, elicitation: Elicitation) -> None:
        """Amend elicitation details; allowed until the record completes."""
        rec = self.record(record_id)
        if rec.completed:
            raise RecordCompleted(f"record {record_id} is completed")
        _validate_elicitation_shape(elicitation)
        rec.elicitation = elicitation
        self._touch()

    def set_feedback(self, record_id: str, text: str) -> None:
        rec = self.record(record_id)
        if rec.completed:
            raise RecordCompleted(f"record {record_id} is completed")
        rec.feedback_text = text
        self._touch()

    def add_candidate_update(self, record_id: str, entry: UpdateEntry) -> str:
        """Append an incorporation-table row; assigns the next update id."""
        rec = self.record(record_id)
        if rec.completed:
            raise RecordCompleted(f"record {record_id} is completed")
        self._check_update_entry(entry)
        new_id = rec.next_update_id()
        normalized = []
        for reading in entry.effect_readings:
            reading = replace(
                reading, context=ReadingContext.after_update(record_id, new_id)
            )
            # the row does not exist yet, so check metric resolution directly
            spec = self.metric_spec(reading.metric_name)
            if reading.context.ordinal() < spec.introduction_ordinal():
                raise ContextBeforeIntroduction(
                    f"metric {reading.metric_name!r} is introduced at "
                    f"{spec.introduced_by} but read at {reading.context.encode()}"
                )
            normalized.append(reading)
        entry.id = new_id
        entry.status = UpdateStatus.CONSIDERED
        entry.effect_readings = normalized
        rec.candidate_updates.append(entry)
        self._touch()
        return entry.id

    def choose_updates(
        self,
        record_id: str,
        update_ids: Iterable[str],
        summary_text: str,
        combined_effect: Optional[list[MetricReading]] = None,
        rejected_ids: Iterable[str] = (),
    ) -> None:
        """Complete a record by naming the implemented updates.

        Updates not chosen stay considered unless listed in ``rejected_ids``.
        Combined-effect readings are attached to the last chosen update.
        """
        rec = self.record(record_id)
        if rec.completed:
            raise RecordCompleted(f"record {record_id} is completed")
        chosen = set(update_ids)
        rejected = set(rejected_ids)
        if not chosen:
            raise InvalidState("no updates chosen; use record_inaction instead")
        if not summary_text.strip():
            raise EmptySummary("record summary must be non-empty")
        known = {u.id for u in rec.candidate_updates}
        for uid in sorted(chosen | rejected):
            if uid not in known:
                raise UnknownUpdate(f"{record_id} has no update {uid}", path="update_id")
        if chosen & rejected:
            raise InvalidState("an update cannot be both chosen and rejected")
        self._check_completion_shape(rec)
        last = max(chosen, key=lambda u: int(u[1:]))
        pending = []
        for reading in combined_effect or []:
            reading = replace(
                reading, context=ReadingContext.after_update(record_id, last)
            )
            self._check_reading(reading)
            pending.append(reading)
        for entry in rec.candidate_updates:
            if entry.id in chosen:
                entry.status = UpdateStatus.IMPLEMENTED
            elif entry.id in rejected:
                entry.status = UpdateStatus.REJECTED
        rec.update(last).effect_readings.extend(pending)
        rec.chosen_update_ids = chosen
        rec.summary_text = summary_text
        rec.completed = True
        self._touch()

    def record_inaction(self, record_id: str, justification: str) -> None:
        """Complete a record that implements no updates."""
        rec = self.record(record_id)
        if rec.chosen_update_ids:
            raise InvalidState(f"record {record_id} already chose updates")
        if rec.completed:
            raise RecordCompleted(f"record {record_id} is completed")
        if not justification.strip():
            raise EmptyJustification("inaction requires a justification")
        self._check_completion_shape(rec)
        rec.inaction_justification = justification
        if not rec.summary_text.strip():
            rec.summary_text = justification
        rec.completed = True
        self._touch()

    def _check_completion_shape(self, rec: Record) -> None:
        # completion invariant: elicitation, feedback, and >=1 candidate present
        el = rec.elicitation
        if not (el.stakeholders and el.reason.strip() and el.presentation.strip()):
            raise InvalidState(f"record {rec.id} cannot complete: elicitation incomplete")
        if not rec.feedback_text.strip():
            raise InvalidState(f"record {rec.id} cannot complete: feedback missing")
        if not rec.candidate_updates:
            raise InvalidState(f"record {rec.id} cannot complete: no candidate updates")

    def add_metric(self, spec: MetricSpec) -> None:
        self._check_not_finalized()
        names = {s.name for s in self.metric_specs()}
        if spec.name in names:
            raise DuplicateMetric(f"metric {spec.name!r} already declared")
        if spec.introduced_by == "starting_point":
            self.starting_point.metrics.append(spec)
        else:
            rid, uid = spec.introduced_by
            self.record(rid).update(uid)
            self.metrics.append(spec)
        self._touch()

    def add_reading(self, reading: MetricReading) -> None:
        self._check_reading(reading)
        ctx = reading.context
        if ctx.kind == "starting_point":
            self.starting_point.readings.append(reading)
        elif ctx.kind == "baseline":
            self.readings.append(reading)
        elif ctx.kind == "after_update":
            self.record(ctx.record_id).update(ctx.update_id).effect_readings.append(reading)
        else:  # final
            if self.final_summary is None:
                raise InvalidState("final-context readings require a finalized log")
            self.final_summary.readings.append(reading)
        self._touch()

    def metric_delta(
        self, metric_name: str, from_context: ReadingContext, to_context: ReadingContext
    ) -> float:
        """value(to) - value(from); sign interpretation is the caller's, via direction."""
        self.metric_spec(metric_name)
        values = []
        for ctx in (from_context, to_context):
            found = self.readings_at(metric_name, ctx)
            if not found:
                raise MissingReading(f"no reading for {metric_name!r} at {ctx.encode()}")
            if len(found) > 1:
                raise AmbiguousReading(
                    f"{len(found)} readings for {metric_name!r} at {ctx.encode()}"
                )
            values.append(found[0].value)
        return normalize_value(values[1] - values[0])

    def check_target(self, metric_name: str, context: ReadingContext) -> TargetCheck:
        spec = self.metric_spec(metric_name)
        found = self.readings_at(metric_name, context)
        if not found:
            raise MissingReading(f"no reading for {metric_name!r} at {context.encode()}")
        if len(found) > 1:
            raise AmbiguousReading(
                f"{len(found)} readings for {metric_name!r} at {context.encode()}"
            )
        if spec.target is None:
            return TargetCheck.NO_TARGET
        return TargetCheck.PASS if spec.target.met_by(found[0].value) else TargetCheck.FAIL

    def finalize(self, final_snapshot: PipelineSnapshot) -> list[LintFinding]:
        """Close the log. Unmet targets warn; missing final readings block."""
        self._check_not_finalized()
        open_ids = [r.id for r in self.records if not r.completed]
        if open_ids:
            raise IncompleteRecords(open_ids)
        if not final_snapshot.data_description.strip():
            raise EmptyField("final summary requires a data description")
        if not final_snapshot.model_description.strip():
            raise EmptyField("final summary requires a model description")
        for reading in final_snapshot.readings:
            if reading.context.kind != "final":
                raise InvalidState(
                    f"final summary readings must use the final context, "
                    f"got {reading.context.encode()}"
                )
            self._check_reading(reading)
        for spec in self.metric_specs():
            if spec.target is None:
                continue
            if not any(
                r.metric_name == spec.name for r in final_snapshot.readings
            ):
                raise MissingReading(
                    f"target-bearing metric {spec.name!r} has no final reading"
                )
        self.final_summary = final_snapshot
        self.status = Status.FINALIZED
        self._touch()
        warnings = []
        for spec in self.metric_specs():
            if spec.target is None:
                continue
            for reading in final_snapshot.readings:
                if reading.metric_name != spec.name:
                    continue
                if not spec.target.met_by(reading.value):
                    warnings.append(
                        LintFinding(
                            rule_id="W1",
                            severity=Severity.WARNING,
                            path="final_summary.readings",
                            message=(
                                f"target {spec.target.comparator}"
                                f"{format_value(spec.target.value)} unmet: "
                                f"{spec.name} = {format_value(reading.value)}"
                            ),
                        )
                    )
        return warnings


def new_log(
    title: str,
    pipeline_name: str,
    owner: PersonRef,
    starting_point: PipelineSnapshot,
    existing_ids: Iterable[str] = (),
) -> FeedbackLog:
    """Create a draft log; the id is the slugified title, suffixed on collision."""
    if not title.strip():
        raise EmptyField("title must be non-empty")
    if not owner.id.strip():
        raise EmptyField("owner must be non-empty")
    if not starting_point.data_description.strip():
        raise EmptyField("starting point requires a data description")
    if not starting_point.model_description.strip():
        raise EmptyField("starting point requires a model description")
    for spec in starting_point.metrics:
        spec.introduced_by = "starting_point"
    taken = set(existing_ids)
    base = slugify(title)
    log_id = base
    n = 2
    while log_id in taken:
        log_id = f"{base}-{n}"
        n += 1
    return FeedbackLog(
        id=log_id,
        title=title,
        pipeline_name=pipeline_name,
        owner=owner,
        starting_point=starting_point,
    )
