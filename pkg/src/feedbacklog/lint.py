"""Lint catalog for feedback logs.

Validation never mutates the log. The operations API keeps well-behaved logs
clean by construction; lint exists for documents that arrive from disk or
other tools, plus the informational rules (L2, L9) that flag legitimate but
noteworthy states. Rules:

  L1  starting-point descriptions present           (error)
  L2  starting point declares no metrics            (info; allowed)
  L3  chosen update ids not among candidates        (error)
  L4  completed record missing elicitation/feedback/summary (error)
  L5  update row missing which/kinds/stage/why/effect        (error)
  L6  completed record chose nothing and gives no justification (error)
  L7  identifiable stakeholder without recorded consent        (error)
  L8  finalized log: target-bearing metric lacks a final reading (error)
  L9  log is not finalized yet                      (info)
  L10 reading references a metric introduced later (or never)  (error)

Findings are sorted by (severity, path); errors first.
"""

from __future__ import annotations

from .model import (
    FeedbackLog,
    LintFinding,
    MetricReading,
    Severity,
    Status,
    is_valid_kind,
)


def _finding(rule_id: str, severity: Severity, path: str, message: str) -> LintFinding:
    return LintFinding(rule_id=rule_id, severity=severity, path=path, message=message)


def validate(log: FeedbackLog) -> list[LintFinding]:
    """Run the full rule catalog; works on drafts as well as finalized logs."""
    findings: list[LintFinding] = []
    findings.extend(_l1_starting_texts(log))
    findings.extend(_l2_metricless_start(log))
    findings.extend(_l3_chosen_subset(log))
    findings.extend(_l4_completed_fields(log))
    findings.extend(_l5_update_rows(log))
    findings.extend(_l6_inaction_justified(log))
    findings.extend(_l7_consent(log))
    findings.extend(_l8_final_readings(log))
    findings.extend(_l9_not_finalized(log))
    findings.extend(_l10_reading_order(log))
    return sorted(findings, key=LintFinding.sort_key)


def error_findings(log: FeedbackLog) -> list[LintFinding]:
    return [f for f in validate(log) if f.severity is Severity.ERROR]


def _l1_starting_texts(log):
    out = []
    if not log.starting_point.data_description.strip():
        out.append(
            _finding(
                "L1",
                Severity.ERROR,
                "starting_point.data_description",
                "starting point has no data description",
            )
        )
    if not log.starting_point.model_description.strip():
        out.append(
            _finding(
                "L1",
                Severity.ERROR,
                "starting_point.model_description",
                "starting point has no model description",
            )
        )
    return out


def _l2_metricless_start(log):
    if log.starting_point.metrics:
        return []
    return [
        _finding(
            "L2",
            Severity.INFO,
            "starting_point.metrics",
            "starting point declares no metrics",
        )
    ]


def _l3_chosen_subset(log):
    out = []
    for i, rec in enumerate(log.records):
        known = {u.id for u in rec.candidate_updates}
        stray = sorted(rec.chosen_update_ids - known)
        if stray:
            out.append(
                _finding(
                    "L3",
                    Severity.ERROR,
                    f"records[{i}].chosen_update_ids",
                    f"chosen update ids not among candidates: {', '.join(stray)}",
                )
            )
    return out


def _l4_completed_fields(log):
    out = []
    for i, rec in enumerate(log.records):
        if not rec.completed:
            continue
        el = rec.elicitation
        checks = [
            (bool(el.stakeholders), f"records[{i}].elicitation.stakeholders",
             "completed record names no stakeholders"),
            (bool(el.reason.strip()), f"records[{i}].elicitation.reason",
             "completed record has no elicitation reason"),
            (bool(el.presentation.strip()), f"records[{i}].elicitation.presentation",
             "completed record does not say how information was presented"),
            (bool(rec.feedback_text.strip()), f"records[{i}].feedback_text",
             "completed record has no feedback text"),
            (bool(rec.summary_text.strip()), f"records[{i}].summary_text",
             "completed record has no summary"),
        ]
        for ok, path, message in checks:
            if not ok:
                out.append(_finding("L4", Severity.ERROR, path, message))
    return out


def _l5_update_rows(log):
    out = []
    for i, rec in enumerate(log.records):
        for j, entry in enumerate(rec.candidate_updates):
            base = f"records[{i}].candidate_updates[{j}]"
            if not entry.which.strip():
                out.append(_finding("L5", Severity.ERROR, f"{base}.which",
                                    "update row has no description"))
            if not entry.kinds or any(not is_valid_kind(k) for k in entry.kinds):
                out.append(_finding("L5", Severity.ERROR, f"{base}.kinds",
                                    "update row has no valid kind"))
            if entry.stage is None:
                out.append(_finding("L5", Severity.ERROR, f"{base}.stage",
                                    "update row has no pipeline stage"))
            if not entry.why.strip():
                out.append(_finding("L5", Severity.ERROR, f"{base}.why",
                                    "update row has no rationale"))
            if not entry.has_effect():
                out.append(_finding("L5", Severity.ERROR, f"{base}.effect",
                                    "update row reports no effect"))
    return out


def _l6_inaction_justified(log):
    out = []
    for i, rec in enumerate(log.records):
        if rec.completed and not rec.chosen_update_ids and not rec.inaction_justification.strip():
            out.append(
                _finding(
                    "L6",
                    Severity.ERROR,
                    f"records[{i}].inaction_justification",
                    "completed record implements nothing and gives no justification",
                )
            )
    return out


def _l7_consent(log):
    out = []
    for i, rec in enumerate(log.records):
        for k, s in enumerate(rec.elicitation.stakeholders):
            if s.identifiable and not s.consent_recorded:
                out.append(
                    _finding(
                        "L7",
                        Severity.ERROR,
                        f"records[{i}].elicitation.stakeholders[{k}]",
                        f"identifiable stakeholder {s.label!r} has no recorded consent",
                    )
                )
    return out


def _l8_final_readings(log):
    if log.status is not Status.FINALIZED or log.final_summary is None:
        return []
    out = []
    final_names = {r.metric_name for r in log.final_summary.readings}
    for spec in log.metric_specs():
        if spec.target is not None and spec.name not in final_names:
            out.append(
                _finding(
                    "L8",
                    Severity.ERROR,
                    "final_summary.readings",
                    f"target-bearing metric {spec.name!r} has no final reading",
                )
            )
    return out


def _l9_not_finalized(log):
    if log.status is Status.FINALIZED:
        return []
    return [
        _finding("L9", Severity.INFO, "status", "log is not finalized")
    ]


def _reading_sites(log) -> list[tuple[str, MetricReading]]:
    sites = []
    for k, r in enumerate(log.starting_point.readings):
        sites.append((f"starting_point.readings[{k}]", r))
    for k, r in enumerate(log.readings):
        sites.append((f"readings[{k}]", r))
    for i, rec in enumerate(log.records):
        for j, entry in enumerate(rec.candidate_updates):
            for k, r in enumerate(entry.effect_readings):
                sites.append(
                    (f"records[{i}].candidate_updates[{j}].effect_readings[{k}]", r)
                )
    if log.final_summary is not None:
        for k, r in enumerate(log.final_summary.readings):
            sites.append((f"final_summary.readings[{k}]", r))
    return sites


def _l10_reading_order(log):
    out = []
    specs = {s.name: s for s in log.metric_specs()}
    for path, reading in _reading_sites(log):
        spec = specs.get(reading.metric_name)
        if spec is None:
            out.append(
                _finding(
                    "L10",
                    Severity.ERROR,
                    path,
                    f"reading references undeclared metric {reading.metric_name!r}",
                )
            )
            continue
        if reading.context.ordinal() < spec.introduction_ordinal():
            out.append(
                _finding(
                    "L10",
                    Severity.ERROR,
                    path,
                    f"reading at {reading.context.encode()} precedes the "
                    f"introduction of {reading.metric_name!r}",
                )
            )
    return out
