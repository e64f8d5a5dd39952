"""Command-line front end: author logs, lint, scan, checklist, export, serve.

Exit codes: 0 success (info/warning findings allowed), 1 validation or lint
errors (including rejected operations), 2 usage errors, 3 I/O or access
failures. ``--json`` switches every subcommand to machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, docformat, lint, sample_logs
from .errors import (
    AccessDenied,
    FeedbackLogError,
    MalformedQuery,
    RootNotFound,
    StaleRevision,
    UnknownLog,
)
from .model import (
    Elicitation,
    MetricReading,
    MetricSpec,
    PersonRef,
    PipelineSnapshot,
    ReadingContext,
    StakeholderRef,
    Target,
    UpdateEntry,
    new_log,
)
from .registry import (
    LOCAL_ADMIN,
    LogLink,
    Registry,
    SearchQuery,
    SectionAssignment,
    anonymize,
)
from .scanner import ScanConfig, checklist as build_checklist, scan
from .service import DEFAULT_BIND, _body_update_entry, build_server

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3

_STATE_GLYPHS = {
    "implemented_in_code": "[x]",
    "pending": "[ ]",
    "not_applicable": "[-]",
}


class _UsageError(Exception):
    pass


def _registry_root(args) -> str:
    return args.registry or os.environ.get("FBLOG_REGISTRY") or "./fblog-registry"


def _open_registry(args) -> Registry:
    return Registry(_registry_root(args))


def _actor(args, fallback: str | None = None) -> str | None:
    # without an explicit actor the CLI acts as a local admin: whoever can
    # read the registry directory already has the files
    return args.actor or os.environ.get("FBLOG_ACTOR") or fallback or LOCAL_ADMIN


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2))
    elif human:
        print(human)


def _read_payload(path: str) -> dict:
    text = sys.stdin.read() if path == "-" else Path(path).read_text("utf-8")
    return json.loads(text)


def _parse_person(value: str) -> PersonRef:
    pid, sep, display = value.partition(":")
    return PersonRef(pid, display if sep else pid)


def _parse_stakeholder(value: str) -> StakeholderRef:
    parts = value.split("|")
    if len(parts) < 2:
        raise _UsageError(
            f"stakeholder {value!r} must be 'LABEL|CATEGORY[|identifiable[|consented]]'"
        )
    flags = {p.strip().lower() for p in parts[2:]}
    return StakeholderRef(
        label=parts[0],
        category=parts[1],
        identifiable="identifiable" in flags,
        consent_recorded="consented" in flags,
    )


def _parse_reading(value: str, context: ReadingContext | None = None) -> MetricReading:
    name, sep, rest = value.partition("=")
    if not sep or not name:
        raise _UsageError(f"reading {value!r} must be 'METRIC=VALUE[:NOTE]'")
    number, _, note = rest.partition(":")
    try:
        parsed = float(number)
    except ValueError:
        raise _UsageError(f"reading value {number!r} is not a number") from None
    reading = MetricReading(name, parsed, note=note)
    if context is not None:
        reading.context = context
    return reading


def _parse_target(value: str) -> Target:
    comparator, sep, number = value.partition(":")
    if not sep:
        raise _UsageError(f"target {value!r} must be 'COMPARATOR:VALUE', e.g. '>:50'")
    try:
        return Target(comparator, float(number))
    except ValueError:
        raise _UsageError(f"target value {number!r} is not a number") from None


def _parse_context(value: str) -> ReadingContext:
    try:
        return ReadingContext.parse(value)
    except FeedbackLogError:
        raise _UsageError(
            f"context {value!r} must be one of starting_point, baseline:R<n>, "
            "after_update:R<n>/U<m>, final"
        ) from None


def _findings_lines(findings) -> str:
    if not findings:
        return "no findings"
    width = max(len(f.rule_id) for f in findings)
    return "\n".join(
        f"{f.rule_id:<{width}}  {f.severity.value:<7}  {f.path}: {f.message}"
        for f in findings
    )


# --- subcommand implementations ----------------------------------------------

def _cmd_init(args) -> int:
    owner = _parse_person(args.owner)
    registry = _open_registry(args)
    registry.add_org_member(owner)
    log = new_log(
        title=args.title,
        pipeline_name=args.pipeline or args.title,
        owner=owner,
        starting_point=PipelineSnapshot(
            data_description=args.data,
            model_description=args.model,
            metrics_note=args.metrics_note or "",
        ),
        existing_ids=registry.all_ids(),
    )
    registry.put(log, _actor(args, owner.id))
    _emit(args, {"id": log.id, "revision": log.revision}, log.id)
    return EXIT_OK


def _mutate(args, registry: Registry, log_id: str, fn) -> dict:
    actor = _actor(args)
    log = registry.get(log_id, actor)
    extra = fn(log) or {}
    registry.put(log, actor)
    return {"revision": log.revision, **extra}


def _cmd_record_open(args) -> int:
    registry = _open_registry(args)
    elicitation = Elicitation(
        stakeholders=[_parse_stakeholder(s) for s in args.stakeholder],
        reason=args.reason or "",
        presentation=args.presentation or "",
    )
    out: dict = {}

    def apply(log):
        out["record_id"] = log.open_record(elicitation)

    payload = _mutate(args, registry, args.log_id, apply)
    payload.update(out)
    _emit(args, payload, out["record_id"])
    return EXIT_OK


def _cmd_record_feedback(args) -> int:
    registry = _open_registry(args)
    if args.file:
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text("utf-8")
    else:
        text = args.text or ""
    payload = _mutate(
        args, registry, args.log_id, lambda log: log.set_feedback(args.record_id, text)
    )
    _emit(args, payload, f"feedback recorded on {args.record_id}")
    return EXIT_OK


def _cmd_record_update(args) -> int:
    registry = _open_registry(args)
    if args.file:
        entry = _body_update_entry(_read_payload(args.file))
    else:
        if not (args.which and args.kind and args.stage and args.why):
            raise _UsageError("record update needs --which/--kind/--stage/--why or --file")
        entry = UpdateEntry(
            which=args.which,
            kinds=set(args.kind),
            stage=args.stage,
            why=args.why,
            effect_readings=[_parse_reading(e) for e in args.effect or []],
            effect_note=args.effect_note or "",
        )
    out: dict = {}

    def apply(log):
        out["update_id"] = log.add_candidate_update(args.record_id, entry)

    payload = _mutate(args, registry, args.log_id, apply)
    payload.update(out)
    _emit(args, payload, out["update_id"])
    return EXIT_OK


def _cmd_record_choose(args) -> int:
    registry = _open_registry(args)
    chosen = {u.strip() for u in args.updates.split(",") if u.strip()}
    rejected = {u.strip() for u in (args.reject or "").split(",") if u.strip()}
    combined = [_parse_reading(e) for e in args.effect or []] or None
    payload = _mutate(
        args,
        registry,
        args.log_id,
        lambda log: log.choose_updates(
            args.record_id, chosen, args.summary, combined_effect=combined, rejected_ids=rejected
        ),
    )
    _emit(args, payload, f"{args.record_id} completed; implemented {', '.join(sorted(chosen))}")
    return EXIT_OK


def _cmd_record_inaction(args) -> int:
    registry = _open_registry(args)
    payload = _mutate(
        args,
        registry,
        args.log_id,
        lambda log: log.record_inaction(args.record_id, args.justification),
    )
    _emit(args, payload, f"{args.record_id} completed with no implemented updates")
    return EXIT_OK


def _cmd_metric_add(args) -> int:
    registry = _open_registry(args)
    introduced: str | tuple[str, str] = "starting_point"
    if args.introduced_by:
        rid, sep, uid = args.introduced_by.partition("/")
        if not sep:
            raise _UsageError("--introduced-by must look like R1/U2")
        introduced = (rid, uid)
    spec = MetricSpec(
        name=args.name,
        description=args.description or "",
        direction=args.direction,
        unit=args.unit or "",
        target=_parse_target(args.target) if args.target else None,
        introduced_by=introduced,
    )
    payload = _mutate(args, registry, args.log_id, lambda log: log.add_metric(spec))
    _emit(args, payload, f"metric {args.name} added")
    return EXIT_OK


def _cmd_metric_read(args) -> int:
    registry = _open_registry(args)
    reading = MetricReading(
        args.name, float(args.value), _parse_context(args.context), note=args.note or ""
    )
    payload = _mutate(args, registry, args.log_id, lambda log: log.add_reading(reading))
    _emit(args, payload, f"{args.name} = {args.value} at {args.context}")
    return EXIT_OK


def _cmd_metric_delta(args) -> int:
    registry = _open_registry(args)
    log = registry.get(args.log_id, _actor(args))
    delta = log.metric_delta(
        args.metric, _parse_context(args.from_context), _parse_context(args.to_context)
    )
    text = f"{delta:+g}"
    _emit(
        args,
        {
            "metric": args.metric,
            "from": args.from_context,
            "to": args.to_context,
            "delta": delta,
        },
        text,
    )
    return EXIT_OK


def _cmd_validate(args) -> int:
    registry = _open_registry(args)
    log = registry.get(args.log_id, _actor(args))
    findings = lint.validate(log)
    errors = [f for f in findings if f.severity.value == "error"]
    human = _findings_lines(findings) + f"\n{len(errors)} errors"
    _emit(
        args,
        {
            "findings": [
                {
                    "rule_id": f.rule_id,
                    "severity": f.severity.value,
                    "path": f.path,
                    "message": f.message,
                }
                for f in findings
            ],
            "errors": len(errors),
        },
        human,
    )
    return EXIT_VALIDATION if errors else EXIT_OK


def _cmd_scan(args) -> int:
    config = ScanConfig(root_path=args.root)
    if args.include:
        config.include_globs = tuple(args.include)
    if args.exclude:
        config.exclude_globs = tuple(args.exclude)
    if args.max_bytes:
        config.max_file_bytes = args.max_bytes
    result = scan(config)
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    human = "\n".join(
        f"{a.file_path}:{a.line_number}: {a.log_id}#{a.record_id}/{a.update_id}"
        + (" done" if a.done_flag else "")
        for a in result.annotations
    ) or "no annotations"
    _emit(
        args,
        {
            "annotations": [
                {
                    "file_path": a.file_path,
                    "line_number": a.line_number,
                    "log_id": a.log_id,
                    "record_id": a.record_id,
                    "update_id": a.update_id,
                    "done_flag": a.done_flag,
                }
                for a in result.annotations
            ],
            "warnings": result.warnings,
        },
        human,
    )
    return EXIT_OK


def _cmd_checklist(args) -> int:
    registry = _open_registry(args)
    log = registry.get(args.log_id, _actor(args))
    annotations = []
    warnings: list[str] = []
    if args.scan_root:
        result = scan(ScanConfig(root_path=args.scan_root))
        annotations = result.annotations
        warnings = result.warnings
    items, findings = build_checklist(log, annotations)
    lines = [
        f"{_STATE_GLYPHS[i.state]} {i.record_id}/{i.update_id} {i.which}"
        f" ({len(i.evidence)} evidence)"
        for i in items
    ]
    lines += [f"! {f.kind}: {f.message}" for f in findings]
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    _emit(
        args,
        {
            "items": [
                {
                    "record_id": i.record_id,
                    "update_id": i.update_id,
                    "which": i.which,
                    "state": i.state,
                    "evidence": [
                        {"file_path": a.file_path, "line_number": a.line_number}
                        for a in i.evidence
                    ],
                }
                for i in items
            ],
            "findings": [
                {"kind": f.kind, "severity": f.severity.value, "message": f.message}
                for f in findings
            ],
            "warnings": warnings,
        },
        "\n".join(lines) or "no chosen updates",
    )
    return EXIT_OK


def _cmd_export(args) -> int:
    registry = _open_registry(args)
    log = registry.get(args.log_id, _actor(args))
    content = (
        docformat.export_markdown(log)
        if args.format == "md"
        else docformat.export_html(log)
    )
    if args.output:
        Path(args.output).write_text(content, "utf-8")
        _emit(args, {"format": args.format, "written": args.output}, f"wrote {args.output}")
    else:
        _emit(args, {"format": args.format, "content": content}, content.rstrip("\n"))
    return EXIT_OK


def _cmd_link_add(args) -> int:
    registry = _open_registry(args)
    registry.add_link(
        LogLink(
            from_log_id=args.from_log,
            to_log_id=args.to_log,
            relation=args.relation,
            note=args.note or "",
        ),
        _actor(args),
    )
    _emit(args, {"ok": True}, f"{args.from_log} -{args.relation}-> {args.to_log}")
    return EXIT_OK


def _cmd_link_chain(args) -> int:
    registry = _open_registry(args)
    chain = registry.provenance_chain(args.log_id)
    _emit(args, {"chain": chain}, "\n".join(chain) or "no provenance")
    return EXIT_OK


def _cmd_search(args) -> int:
    registry = _open_registry(args)
    query = SearchQuery.parse(args.query)
    hits = registry.search(query, _actor(args))
    human = "\n".join(
        f"{h.log_id}" + (f" {h.record_id}" if h.record_id else "") + f" {h.matched_field}: "
        + (h.snippet if len(h.snippet) <= 100 else h.snippet[:97] + "...")
        for h in hits
    ) or "no hits"
    _emit(
        args,
        {
            "hits": [
                {
                    "log_id": h.log_id,
                    "record_id": h.record_id,
                    "matched_field": h.matched_field,
                    "snippet": h.snippet,
                }
                for h in hits
            ]
        },
        human,
    )
    return EXIT_OK


def _cmd_assign(args) -> int:
    registry = _open_registry(args)
    assignee = _parse_person(args.assignee)
    actor = _actor(args)
    if args.done:
        registry.complete_section(args.log_id, args.section_path, assignee.id, actor)
        state = "done"
    else:
        registry.assign_section(
            SectionAssignment(
                log_id=args.log_id, section_path=args.section_path, assignee=assignee
            ),
            actor,
        )
        state = "open"
    _emit(
        args,
        {"log_id": args.log_id, "section_path": args.section_path, "state": state},
        f"{args.section_path} -> {assignee.id} ({state})",
    )
    return EXIT_OK


def _cmd_finalize(args) -> int:
    registry = _open_registry(args)
    snapshot = PipelineSnapshot(
        data_description=args.data,
        model_description=args.model,
        readings=[
            _parse_reading(r, ReadingContext.final()) for r in args.reading or []
        ],
        metrics_note=args.metrics_note or "",
    )
    warnings_box: list = []

    def apply(log):
        warnings_box.extend(log.finalize(snapshot))

    payload = _mutate(args, registry, args.log_id, apply)
    payload["warnings"] = [
        {"rule_id": w.rule_id, "severity": w.severity.value, "path": w.path, "message": w.message}
        for w in warnings_box
    ]
    human = f"{args.log_id} finalized"
    if warnings_box:
        human += "\n" + "\n".join(f"warning: {w.message}" for w in warnings_box)
    _emit(args, payload, human)
    return EXIT_OK


def _cmd_anonymize(args) -> int:
    registry = _open_registry(args)
    actor = _actor(args)
    log = registry.get(args.log_id, actor)
    anon, mapping = anonymize(log)
    content = docformat.serialize(anon).decode("utf-8")
    is_owner = registry.effective_role(actor, args.log_id) == "owner"
    if args.output:
        Path(args.output).write_text(content, "utf-8")
    payload: dict = {"log": docformat.to_document(anon)}
    if is_owner:
        payload["mapping"] = mapping
    human = content.rstrip("\n") if not args.output else f"wrote {args.output}"
    if is_owner and mapping and not args.json:
        print(
            "mapping (owner only): "
            + "; ".join(f"{k} -> {v}" for k, v in mapping.items()),
            file=sys.stderr,
        )
    _emit(args, payload, human)
    return EXIT_OK


def _cmd_import(args) -> int:
    registry = _open_registry(args)
    data = sys.stdin.buffer.read() if args.path == "-" else Path(args.path).read_bytes()
    log = docformat.parse(data)
    owner = log.owner
    registry.add_org_member(owner)
    registry.put(log, _actor(args, owner.id))
    _emit(args, {"id": log.id, "revision": log.revision}, log.id)
    return EXIT_OK


def _cmd_samples(args) -> int:
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    written = []
    registry = _open_registry(args) if args.install else None
    for log in sample_logs.all_sample_logs():
        path = dest / f"{log.id}{docformat.CANONICAL_EXTENSION}"
        path.write_bytes(docformat.serialize(log))
        written.append(str(path))
        if registry is not None:
            registry.add_org_member(log.owner)
            if log.id not in registry.all_ids():
                registry.put(log, log.owner.id)
    _emit(args, {"written": written}, "\n".join(written))
    return EXIT_OK


def _cmd_serve(args) -> int:
    registry = _open_registry(args)
    server = build_server(registry, args.bind, token_file=args.token_file)
    host, port = server.server_address[:2]
    print(f"serving registry {_registry_root(args)} on http://{host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return EXIT_OK


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fblog",
        description="Author, lint, scan, search, and serve stakeholder-feedback logs.",
    )
    parser.add_argument("--version", action="version", version=f"fblog {__version__}")
    parser.add_argument("--registry", help="registry root (default: $FBLOG_REGISTRY or ./fblog-registry)")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--actor", help="person id performing the action (default: $FBLOG_ACTOR)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("init", help="create a new log")
    p.add_argument("--title", required=True)
    p.add_argument("--pipeline")
    p.add_argument("--owner", required=True, metavar="ID[:DISPLAY]")
    p.add_argument("--data", required=True, help="starting-point data description")
    p.add_argument("--model", required=True, help="starting-point model description")
    p.add_argument("--metrics-note")
    p.set_defaults(fn=_cmd_init)

    record = sub.add_parser("record", help="author records").add_subparsers(
        dest="record_command", metavar="ACTION"
    )
    p = record.add_parser("open", help="open a record with its elicitation")
    p.add_argument("log_id")
    p.add_argument(
        "--stakeholder",
        action="append",
        required=True,
        metavar="LABEL|CATEGORY[|identifiable[|consented]]",
    )
    p.add_argument("--reason")
    p.add_argument("--presentation")
    p.set_defaults(fn=_cmd_record_open)
    p = record.add_parser("feedback", help="set the feedback text")
    p.add_argument("log_id")
    p.add_argument("record_id")
    p.add_argument("--text")
    p.add_argument("--file", help="read the text from a file, or - for stdin")
    p.set_defaults(fn=_cmd_record_feedback)
    p = record.add_parser("update", help="append an incorporation-table row")
    p.add_argument("log_id")
    p.add_argument("record_id")
    p.add_argument("--which")
    p.add_argument("--kind", action="append", metavar="KIND")
    p.add_argument("--stage")
    p.add_argument("--why")
    p.add_argument("--effect", action="append", metavar="METRIC=VALUE[:NOTE]")
    p.add_argument("--effect-note")
    p.add_argument("--file", help="canonical entry payload file, or - for stdin")
    p.set_defaults(fn=_cmd_record_update)
    p = record.add_parser("choose", help="complete a record by choosing updates")
    p.add_argument("log_id")
    p.add_argument("record_id")
    p.add_argument("--updates", required=True, metavar="U1,U3")
    p.add_argument("--summary", required=True)
    p.add_argument("--effect", action="append", metavar="METRIC=VALUE[:NOTE]")
    p.add_argument("--reject", metavar="U2,U4")
    p.set_defaults(fn=_cmd_record_choose)
    p = record.add_parser("inaction", help="complete a record with no implemented updates")
    p.add_argument("log_id")
    p.add_argument("record_id")
    p.add_argument("--justification", required=True)
    p.set_defaults(fn=_cmd_record_inaction)

    metric = sub.add_parser("metric", help="declare metrics and readings").add_subparsers(
        dest="metric_command", metavar="ACTION"
    )
    p = metric.add_parser("add", help="declare a metric")
    p.add_argument("log_id")
    p.add_argument("--name", required=True)
    p.add_argument("--description")
    p.add_argument("--direction", default="higher_better", choices=["higher_better", "lower_better"])
    p.add_argument("--unit")
    p.add_argument("--target", metavar="CMP:VALUE", help="e.g. '>:50'")
    p.add_argument("--introduced-by", metavar="R1/U2")
    p.set_defaults(fn=_cmd_metric_add)
    p = metric.add_parser("read", help="record a reading")
    p.add_argument("log_id")
    p.add_argument("--name", required=True)
    p.add_argument("--value", required=True, type=float)
    p.add_argument("--context", required=True)
    p.add_argument("--note")
    p.set_defaults(fn=_cmd_metric_read)
    p = metric.add_parser("delta", help="difference between two readings")
    p.add_argument("log_id")
    p.add_argument("metric")
    p.add_argument("from_context")
    p.add_argument("to_context")
    p.set_defaults(fn=_cmd_metric_delta)

    p = sub.add_parser("validate", help="run the lint catalog")
    p.add_argument("log_id")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("scan", help="scan a source tree for annotations")
    p.add_argument("--root", default=".")
    p.add_argument("--include", action="append", metavar="GLOB")
    p.add_argument("--exclude", action="append", metavar="GLOB")
    p.add_argument("--max-bytes", type=int)
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("checklist", help="incorporation checklist for a log")
    p.add_argument("log_id")
    p.add_argument("--scan-root")
    p.set_defaults(fn=_cmd_checklist)

    p = sub.add_parser("export", help="render a log to markdown or html")
    p.add_argument("log_id")
    p.add_argument("--format", default="md", choices=["md", "html"])
    p.add_argument("--output", metavar="FILE")
    p.set_defaults(fn=_cmd_export)

    link = sub.add_parser("link", help="typed links between logs").add_subparsers(
        dest="link_command", metavar="ACTION"
    )
    p = link.add_parser("add", help="add a directed link")
    p.add_argument("from_log")
    p.add_argument("to_log")
    p.add_argument(
        "--relation",
        required=True,
        choices=["prompted", "refines", "same_pipeline", "supersedes"],
    )
    p.add_argument("--note")
    p.set_defaults(fn=_cmd_link_add)
    p = link.add_parser("chain", help="provenance chain via 'prompted' links")
    p.add_argument("log_id")
    p.set_defaults(fn=_cmd_link_chain)

    p = sub.add_parser("search", help="search stored logs")
    p.add_argument("query")
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("assign", help="assign a log section to a person")
    p.add_argument("log_id")
    p.add_argument("section_path")
    p.add_argument("assignee", metavar="ID[:DISPLAY]")
    p.add_argument("--done", action="store_true", help="mark the assignment done")
    p.set_defaults(fn=_cmd_assign)

    p = sub.add_parser("finalize", help="close a log with its final summary")
    p.add_argument("log_id")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--reading", action="append", metavar="METRIC=VALUE[:NOTE]")
    p.add_argument("--metrics-note")
    p.set_defaults(fn=_cmd_finalize)

    p = sub.add_parser("anonymize", help="pseudonymize identifiable stakeholders")
    p.add_argument("log_id")
    p.add_argument("--output", metavar="FILE")
    p.set_defaults(fn=_cmd_anonymize)

    p = sub.add_parser("import", help="validate and store a canonical log file")
    p.add_argument("path", help="canonical .fblog.json file, or - for stdin")
    p.set_defaults(fn=_cmd_import)

    p = sub.add_parser("samples", help="write the bundled example logs")
    p.add_argument("--dest", default="./samples")
    p.add_argument("--install", action="store_true", help="also store them in the registry")
    p.set_defaults(fn=_cmd_samples)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--bind", default=DEFAULT_BIND)
    p.add_argument("--token-file")
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (None, 0) else EXIT_USAGE
    if not getattr(args, "fn", None):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.fn(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedQuery as exc:
        print(f"usage error: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except (AccessDenied, StaleRevision, UnknownLog, RootNotFound) as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_IO
    except FeedbackLogError as exc:
        findings = getattr(exc, "findings", None)
        if findings:
            print(_findings_lines(findings), file=sys.stderr)
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON payload: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
