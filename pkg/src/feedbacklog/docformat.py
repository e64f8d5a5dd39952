"""Canonical on-disk representation (`.fblog.json`) and human-readable exports.

Serialization is byte-deterministic: UTF-8, lexicographically sorted keys,
2-space indentation, newline-terminated. ``parse(serialize(log)) == log`` for
every valid log. Parsing decodes the tree with path-reported errors, migrates
older schema versions forward, and then gates on the lint catalog: any
error-severity finding raises :class:`SchemaViolation` carrying the findings.

Exports mirror the document template: Starting Point, per-record Elicitation /
Feedback / Incorporation (five-column table) / Summary blocks, and the Final
Summary for finalized logs.
"""

from __future__ import annotations

import html as _html
import json
from datetime import datetime, timezone
from typing import Any, Callable

from . import lint
from .errors import DocumentSyntaxError, SchemaViolation, UnsupportedVersion
from .model import (
    Direction,
    Elicitation,
    FeedbackLog,
    MetricReading,
    MetricSpec,
    PersonRef,
    PipelineSnapshot,
    ReadingContext,
    Record,
    Severity,
    Stage,
    STAGE_LABELS,
    Status,
    StakeholderRef,
    Target,
    UpdateEntry,
    UpdateStatus,
    SCHEMA_VERSION,
    format_value,
    kind_label,
)

CANONICAL_EXTENSION = ".fblog.json"


# --- encoding ---------------------------------------------------------------

def _encode_datetime(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _decode_datetime(text: str, path: str) -> datetime:
    try:
        return datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        raise SchemaViolation(path, f"invalid timestamp {text!r}") from None


def _spec_doc(spec: MetricSpec) -> dict:
    if spec.introduced_by == "starting_point":
        introduced: Any = "starting_point"
    else:
        introduced = {"record_id": spec.introduced_by[0], "update_id": spec.introduced_by[1]}
    return {
        "name": spec.name,
        "description": spec.description,
        "direction": spec.direction.value,
        "unit": spec.unit,
        "target": None
        if spec.target is None
        else {"comparator": spec.target.comparator, "value": spec.target.value},
        "introduced_by": introduced,
    }


def _reading_doc(r: MetricReading) -> dict:
    return {
        "metric_name": r.metric_name,
        "value": r.value,
        "context": r.context.encode(),
        "note": r.note,
    }


def _snapshot_doc(s: PipelineSnapshot) -> dict:
    return {
        "data_description": s.data_description,
        "model_description": s.model_description,
        "metrics": [_spec_doc(m) for m in s.metrics],
        "readings": [_reading_doc(r) for r in s.readings],
        "metrics_note": s.metrics_note,
    }


def _update_doc(u: UpdateEntry) -> dict:
    return {
        "id": u.id,
        "which": u.which,
        "kinds": sorted(u.kinds),
        "stage": u.stage.value,
        "why": u.why,
        "effect_readings": [_reading_doc(r) for r in u.effect_readings],
        "effect_note": u.effect_note,
        "status": u.status.value,
    }


def _record_doc(rec: Record) -> dict:
    return {
        "id": rec.id,
        "elicitation": {
            "stakeholders": [
                {
                    "label": s.label,
                    "category": s.category,
                    "identifiable": s.identifiable,
                    "consent_recorded": s.consent_recorded,
                }
                for s in rec.elicitation.stakeholders
            ],
            "reason": rec.elicitation.reason,
            "presentation": rec.elicitation.presentation,
        },
        "feedback_text": rec.feedback_text,
        "candidate_updates": [_update_doc(u) for u in rec.candidate_updates],
        "chosen_update_ids": sorted(rec.chosen_update_ids, key=lambda u: int(u[1:])),
        "summary_text": rec.summary_text,
        "inaction_justification": rec.inaction_justification,
        "completed": rec.completed,
    }


def to_document(log: FeedbackLog) -> dict:
    """Log -> canonical tree of plain maps/lists/scalars."""
    return {
        "schema_version": log.schema_version,
        "id": log.id,
        "title": log.title,
        "pipeline_name": log.pipeline_name,
        "owner": {"id": log.owner.id, "display_name": log.owner.display_name},
        "status": log.status.value,
        "starting_point": _snapshot_doc(log.starting_point),
        "records": [_record_doc(r) for r in log.records],
        "final_summary": None
        if log.final_summary is None
        else _snapshot_doc(log.final_summary),
        "metrics": [_spec_doc(m) for m in log.metrics],
        "readings": [_reading_doc(r) for r in log.readings],
        "revision": log.revision,
        "created_at": _encode_datetime(log.created_at),
        "updated_at": _encode_datetime(log.updated_at),
    }


def serialize(log: FeedbackLog) -> bytes:
    """Deterministic canonical bytes for a log."""
    text = json.dumps(to_document(log), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


# --- decoding ---------------------------------------------------------------

def _expect(doc: Any, key: str, kind: type, path: str, optional: bool = False) -> Any:
    if not isinstance(doc, dict):
        raise SchemaViolation(path or ".", "expected an object")
    if key not in doc:
        if optional:
            return None
        raise SchemaViolation(f"{path}{key}", "missing field")
    value = doc[key]
    if value is None and optional:
        return None
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is not object and not isinstance(value, kind):
        raise SchemaViolation(f"{path}{key}", f"expected {kind.__name__}")
    if kind is bool or kind is not int:
        return value
    if isinstance(value, bool):
        raise SchemaViolation(f"{path}{key}", "expected int")
    return value


def _enum(value: str, enum_cls, path: str):
    try:
        return enum_cls(value)
    except ValueError:
        raise SchemaViolation(path, f"unknown value {value!r}") from None


def _decode_spec(doc: Any, path: str) -> MetricSpec:
    target_doc = _expect(doc, "target", dict, f"{path}.", optional=True)
    target = None
    if target_doc is not None:
        target = Target(
            comparator=_expect(target_doc, "comparator", str, f"{path}.target."),
            value=_expect(target_doc, "value", float, f"{path}.target."),
        )
    introduced = doc.get("introduced_by", "starting_point")
    if isinstance(introduced, dict):
        introduced = (
            _expect(introduced, "record_id", str, f"{path}.introduced_by."),
            _expect(introduced, "update_id", str, f"{path}.introduced_by."),
        )
    elif introduced != "starting_point":
        raise SchemaViolation(f"{path}.introduced_by", "expected 'starting_point' or a record/update pair")
    try:
        return MetricSpec(
            name=_expect(doc, "name", str, f"{path}."),
            description=_expect(doc, "description", str, f"{path}."),
            direction=_enum(_expect(doc, "direction", str, f"{path}."), Direction, f"{path}.direction"),
            unit=_expect(doc, "unit", str, f"{path}."),
            target=target,
            introduced_by=introduced,
        )
    except Exception as exc:
        if isinstance(exc, SchemaViolation):
            raise
        raise SchemaViolation(path, str(exc)) from None


def _decode_reading(doc: Any, path: str) -> MetricReading:
    context_text = _expect(doc, "context", str, f"{path}.")
    try:
        context = ReadingContext.parse(context_text)
    except Exception:
        raise SchemaViolation(f"{path}.context", f"unparseable context {context_text!r}") from None
    return MetricReading(
        metric_name=_expect(doc, "metric_name", str, f"{path}."),
        value=_expect(doc, "value", float, f"{path}."),
        context=context,
        note=_expect(doc, "note", str, f"{path}."),
    )


def _decode_snapshot(doc: Any, path: str) -> PipelineSnapshot:
    metrics_doc = _expect(doc, "metrics", list, f"{path}.")
    readings_doc = _expect(doc, "readings", list, f"{path}.")
    return PipelineSnapshot(
        data_description=_expect(doc, "data_description", str, f"{path}."),
        model_description=_expect(doc, "model_description", str, f"{path}."),
        metrics=[_decode_spec(m, f"{path}.metrics[{i}]") for i, m in enumerate(metrics_doc)],
        readings=[_decode_reading(r, f"{path}.readings[{i}]") for i, r in enumerate(readings_doc)],
        metrics_note=_expect(doc, "metrics_note", str, f"{path}."),
    )


def _decode_update(doc: Any, path: str) -> UpdateEntry:
    kinds_doc = _expect(doc, "kinds", list, f"{path}.")
    readings_doc = _expect(doc, "effect_readings", list, f"{path}.")
    for k in kinds_doc:
        if not isinstance(k, str):
            raise SchemaViolation(f"{path}.kinds", "kinds must be strings")
    return UpdateEntry(
        id=_expect(doc, "id", str, f"{path}."),
        which=_expect(doc, "which", str, f"{path}."),
        kinds=set(kinds_doc),
        stage=_enum(_expect(doc, "stage", str, f"{path}."), Stage, f"{path}.stage"),
        why=_expect(doc, "why", str, f"{path}."),
        effect_readings=[
            _decode_reading(r, f"{path}.effect_readings[{i}]")
            for i, r in enumerate(readings_doc)
        ],
        effect_note=_expect(doc, "effect_note", str, f"{path}."),
        status=_enum(_expect(doc, "status", str, f"{path}."), UpdateStatus, f"{path}.status"),
    )


def _decode_record(doc: Any, path: str) -> Record:
    el_doc = _expect(doc, "elicitation", dict, f"{path}.")
    st_doc = _expect(el_doc, "stakeholders", list, f"{path}.elicitation.")
    stakeholders = []
    for i, s in enumerate(st_doc):
        spath = f"{path}.elicitation.stakeholders[{i}]"
        stakeholders.append(
            StakeholderRef(
                label=_expect(s, "label", str, f"{spath}."),
                category=_expect(s, "category", str, f"{spath}."),
                identifiable=_expect(s, "identifiable", bool, f"{spath}."),
                consent_recorded=_expect(s, "consent_recorded", bool, f"{spath}."),
            )
        )
    updates_doc = _expect(doc, "candidate_updates", list, f"{path}.")
    chosen_doc = _expect(doc, "chosen_update_ids", list, f"{path}.")
    return Record(
        id=_expect(doc, "id", str, f"{path}."),
        elicitation=Elicitation(
            stakeholders=stakeholders,
            reason=_expect(el_doc, "reason", str, f"{path}.elicitation."),
            presentation=_expect(el_doc, "presentation", str, f"{path}.elicitation."),
        ),
        feedback_text=_expect(doc, "feedback_text", str, f"{path}."),
        candidate_updates=[
            _decode_update(u, f"{path}.candidate_updates[{i}]")
            for i, u in enumerate(updates_doc)
        ],
        chosen_update_ids=set(chosen_doc),
        summary_text=_expect(doc, "summary_text", str, f"{path}."),
        inaction_justification=_expect(doc, "inaction_justification", str, f"{path}."),
        completed=_expect(doc, "completed", bool, f"{path}."),
    )


#: forward-only, pure migrations keyed by the version they upgrade FROM.
_MIGRATIONS: dict[int, Callable[[dict], dict]] = {}


def migrate(doc: dict) -> dict:
    version = doc.get("schema_version")
    if not isinstance(version, int) or isinstance(version, bool) or version < 1:
        raise SchemaViolation("schema_version", "schema_version must be an integer >= 1")
    if version > SCHEMA_VERSION:
        raise UnsupportedVersion(f"schema_version {version} is newer than {SCHEMA_VERSION}")
    while version < SCHEMA_VERSION:
        doc = _MIGRATIONS[version](doc)
        version = doc["schema_version"]
    return doc


def from_document(doc: dict) -> FeedbackLog:
    """Decode a canonical tree; shape errors raise path-reported SchemaViolation."""
    doc = migrate(doc)
    owner_doc = _expect(doc, "owner", dict, "")
    records_doc = _expect(doc, "records", list, "")
    final_doc = _expect(doc, "final_summary", dict, "", optional=True)
    metrics_doc = _expect(doc, "metrics", list, "")
    readings_doc = _expect(doc, "readings", list, "")
    log = FeedbackLog(
        id=_expect(doc, "id", str, ""),
        title=_expect(doc, "title", str, ""),
        pipeline_name=_expect(doc, "pipeline_name", str, ""),
        owner=PersonRef(
            id=_expect(owner_doc, "id", str, "owner."),
            display_name=_expect(owner_doc, "display_name", str, "owner."),
        ),
        starting_point=_decode_snapshot(_expect(doc, "starting_point", dict, ""), "starting_point"),
        status=_enum(_expect(doc, "status", str, ""), Status, "status"),
        records=[_decode_record(r, f"records[{i}]") for i, r in enumerate(records_doc)],
        final_summary=None if final_doc is None else _decode_snapshot(final_doc, "final_summary"),
        metrics=[_decode_spec(m, f"metrics[{i}]") for i, m in enumerate(metrics_doc)],
        readings=[_decode_reading(r, f"readings[{i}]") for i, r in enumerate(readings_doc)],
        schema_version=_expect(doc, "schema_version", int, ""),
        revision=_expect(doc, "revision", int, ""),
        created_at=_decode_datetime(_expect(doc, "created_at", str, ""), "created_at"),
        updated_at=_decode_datetime(_expect(doc, "updated_at", str, ""), "updated_at"),
    )
    _check_structure(log)
    return log


def _check_structure(log: FeedbackLog) -> None:
    if not log.id or log.id != log.id.lower():
        raise SchemaViolation("id", f"id must be a lowercase slug, got {log.id!r}")
    if log.revision < 1:
        raise SchemaViolation("revision", "revision must be >= 1")
    if not log.owner.id.strip():
        raise SchemaViolation("owner.id", "owner must be non-empty")
    for i, rec in enumerate(log.records):
        if rec.id != f"R{i + 1}":
            raise SchemaViolation(
                f"records[{i}].id", f"record ids must be sequential; expected R{i + 1}, got {rec.id}"
            )
        for j, entry in enumerate(rec.candidate_updates):
            if entry.id != f"U{j + 1}":
                raise SchemaViolation(
                    f"records[{i}].candidate_updates[{j}].id",
                    f"update ids must be sequential; expected U{j + 1}, got {entry.id}",
                )
            implemented = entry.status is UpdateStatus.IMPLEMENTED
            if implemented != (entry.id in rec.chosen_update_ids):
                raise SchemaViolation(
                    f"records[{i}].candidate_updates[{j}].status",
                    "implemented status must match the record's chosen update ids",
                )
    if (log.status is Status.FINALIZED) != (log.final_summary is not None):
        raise SchemaViolation(
            "status", "a log is finalized exactly when it has a final summary"
        )
    names = [s.name for s in log.metric_specs()]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise SchemaViolation("metrics", f"duplicate metric names: {', '.join(dupes)}")
    for spec in log.metrics:
        if spec.introduced_by == "starting_point":
            raise SchemaViolation(
                "metrics", f"log-level metric {spec.name!r} must name its introducing update"
            )


def parse(data: bytes | str) -> FeedbackLog:
    """Bytes -> log. Raises DocumentSyntaxError, SchemaViolation, or UnsupportedVersion."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise SchemaViolation(".", "document root must be an object")
    log = from_document(doc)
    errors = lint.error_findings(log)
    if errors:
        first = errors[0]
        raise SchemaViolation(first.path, first.message, findings=errors)
    return log


# --- markdown export ---------------------------------------------------------

_COLUMNS = ("Which?", "Where?", "When?", "Why?", "Effect?")


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\r\n", "<br>").replace("\n", "<br>").strip()


def _render_reading(log: FeedbackLog, r: MetricReading) -> str:
    try:
        unit = log.metric_spec(r.metric_name).unit
    except Exception:
        unit = ""
    sep = "" if unit.startswith("%") else (" " if unit else "")
    text = f"{r.metric_name}: {format_value(r.value)}{sep}{unit}"
    if r.note:
        text += f" ({r.note})"
    return text


def _effect_cell(log: FeedbackLog, entry: UpdateEntry) -> str:
    parts = []
    if entry.effect_note:
        parts.append(entry.effect_note)
    parts.extend(_render_reading(log, r) for r in entry.effect_readings)
    return "; ".join(parts)


def _who_and_why(el: Elicitation) -> str:
    who = ", ".join(f"{s.label} ({s.category_display()})" for s in el.stakeholders)
    return f"{who}. {el.reason}".strip()


def _metric_lines(log: FeedbackLog, snapshot: PipelineSnapshot) -> list[str]:
    lines = []
    if snapshot.metrics_note:
        lines.append(snapshot.metrics_note)
    for spec in snapshot.metrics:
        entry = f"- {spec.name} ({spec.direction.value}"
        if spec.unit:
            entry += f", {spec.unit}"
        entry += ")"
        if spec.description:
            entry += f": {spec.description}"
        if spec.target is not None:
            entry += f" [target {spec.target.comparator} {format_value(spec.target.value)}]"
        lines.append(entry)
    for reading in snapshot.readings:
        lines.append(f"- {_render_reading(log, reading)}")
    if not lines:
        lines.append("(none)")
    return lines


def export_markdown(log: FeedbackLog) -> str:
    """Render the template layout; one table row per candidate update."""
    out = [f"# {log.title}", ""]
    out += [
        f"- Pipeline: {log.pipeline_name}",
        f"- Owner: {log.owner.display_name or log.owner.id}",
        f"- Status: {log.status.value}",
        "",
    ]
    out += ["## Starting Point", ""]
    out += [f"**Data:** {log.starting_point.data_description}", ""]
    out += [f"**Model:** {log.starting_point.model_description}", ""]
    out += ["**Metrics:**", ""]
    out += _metric_lines(log, log.starting_point)
    out.append("")
    for k, rec in enumerate(log.records, start=1):
        out += [f"## Record {k}", ""]
        out += ["### Elicitation", ""]
        out += [f"**Who and why?** {_who_and_why(rec.elicitation)}", ""]
        out += [f"**How?** {rec.elicitation.presentation}", ""]
        out += ["### Feedback", ""]
        out += [rec.feedback_text, ""]
        out += ["### Incorporation", ""]
        out.append("| " + " | ".join(_COLUMNS) + " |")
        out.append("|" + " --- |" * len(_COLUMNS))
        for entry in rec.candidate_updates:
            cells = [
                _md_cell(entry.which),
                _md_cell(" and ".join(kind_label(k) for k in sorted(entry.kinds))),
                _md_cell(STAGE_LABELS[entry.stage]),
                _md_cell(entry.why),
                _md_cell(_effect_cell(log, entry)),
            ]
            out.append("| " + " | ".join(cells) + " |")
        out.append("")
        out += ["### Summary", ""]
        chosen = sorted(rec.chosen_update_ids, key=lambda u: int(u[1:]))
        if chosen:
            out.append(f"Implemented: {', '.join(chosen)}.")
            out.append("")
        if rec.inaction_justification:
            out.append(f"Justification for inaction: {rec.inaction_justification}")
            out.append("")
        out += [rec.summary_text, ""]
    if log.final_summary is not None:
        out += ["## Final Summary", ""]
        out += [f"**Data:** {log.final_summary.data_description}", ""]
        out += [f"**Model:** {log.final_summary.model_description}", ""]
        out += ["**Metric performance:**", ""]
        out += _metric_lines(log, log.final_summary)
        out.append("")
    return "\n".join(out).rstrip("\n") + "\n"


# --- html export -------------------------------------------------------------

_HTML_STYLE = (
    "body{font-family:sans-serif;max-width:60em;margin:2em auto;padding:0 1em;"
    "color:#1c1c1c}table{border-collapse:collapse;width:100%}"
    "th,td{border:1px solid #999;padding:.4em .6em;text-align:left;vertical-align:top}"
    "th{background:#eee}.implemented td{background:#eef7ee}"
    "h2{border-bottom:1px solid #ccc;padding-bottom:.2em}"
)


def _h(text: str) -> str:
    return _html.escape(text, quote=True)


def _unbullet(line: str) -> str:
    return line[2:] if line.startswith("- ") else line


def export_html(log: FeedbackLog) -> str:
    """Self-contained page with the same section layout as the markdown export."""
    out = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{_h(log.title)}</title>",
        f"<style>{_HTML_STYLE}</style>",
        "</head>",
        "<body>",
        f"<h1>{_h(log.title)}</h1>",
        f"<p>Pipeline: {_h(log.pipeline_name)} &middot; Owner: "
        f"{_h(log.owner.display_name or log.owner.id)} &middot; Status: {_h(log.status.value)}</p>",
        "<h2>Starting Point</h2>",
        f"<p><strong>Data:</strong> {_h(log.starting_point.data_description)}</p>",
        f"<p><strong>Model:</strong> {_h(log.starting_point.model_description)}</p>",
        "<p><strong>Metrics:</strong></p>",
        "<ul>"
        + "".join(f"<li>{_h(_unbullet(line))}</li>" for line in _metric_lines(log, log.starting_point))
        + "</ul>",
    ]
    for k, rec in enumerate(log.records, start=1):
        out.append(f"<h2>Record {k}</h2>")
        out.append("<h3>Elicitation</h3>")
        out.append(f"<p><strong>Who and why?</strong> {_h(_who_and_why(rec.elicitation))}</p>")
        out.append(f"<p><strong>How?</strong> {_h(rec.elicitation.presentation)}</p>")
        out.append("<h3>Feedback</h3>")
        out.append(f"<p>{_h(rec.feedback_text)}</p>")
        out.append("<h3>Incorporation</h3>")
        out.append("<table>")
        out.append("<tr>" + "".join(f"<th>{c}</th>" for c in _COLUMNS) + "</tr>")
        for entry in rec.candidate_updates:
            row_class = ' class="implemented"' if entry.status is UpdateStatus.IMPLEMENTED else ""
            cells = [
                entry.which,
                " and ".join(kind_label(k) for k in sorted(entry.kinds)),
                STAGE_LABELS[entry.stage],
                entry.why,
                _effect_cell(log, entry),
            ]
            out.append(f"<tr{row_class}>" + "".join(f"<td>{_h(c)}</td>" for c in cells) + "</tr>")
        out.append("</table>")
        out.append("<h3>Summary</h3>")
        chosen = sorted(rec.chosen_update_ids, key=lambda u: int(u[1:]))
        if chosen:
            out.append(f"<p>Implemented: {_h(', '.join(chosen))}.</p>")
        if rec.inaction_justification:
            out.append(f"<p>Justification for inaction: {_h(rec.inaction_justification)}</p>")
        out.append(f"<p>{_h(rec.summary_text)}</p>")
    if log.final_summary is not None:
        out.append("<h2>Final Summary</h2>")
        out.append(f"<p><strong>Data:</strong> {_h(log.final_summary.data_description)}</p>")
        out.append(f"<p><strong>Model:</strong> {_h(log.final_summary.model_description)}</p>")
        out.append("<p><strong>Metric performance:</strong></p>")
        out.append(
            "<ul>"
            + "".join(
                f"<li>{_h(_unbullet(line))}</li>"
                for line in _metric_lines(log, log.final_summary)
            )
            + "</ul>"
        )
    out.append("</body>")
    out.append("</html>")
    return "\n".join(out) + "\n"
