"""HTTP/JSON facade over the registry and scanner.

All responses are JSON; errors use ``{"code", "message", "path"}`` (validation
failures additionally carry the lint findings). Authentication is a static
bearer-token file mapping tokens to person ids; an unknown or missing token is
anonymous. Per-log reads require a viewer grant (401 when anonymous, 403 when
known but insufficient); enumerating endpoints filter instead of failing.

Status mapping: 400 malformed body or rejected operation, 401 missing grant
while anonymous, 403 AccessDenied, 404 unknown log/record/update, 409
StaleRevision, 422 ValidationFailed.
"""

from __future__ import annotations

import json
import re
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Callable, Optional
from urllib.parse import parse_qs, urlparse

from . import __version__, docformat, lint
from .errors import (
    AccessDenied,
    DocumentSyntaxError,
    FeedbackLogError,
    MalformedQuery,
    RootNotFound,
    SchemaViolation,
    StaleRevision,
    UnknownLog,
    UnknownMetric,
    UnknownRecord,
    UnknownSection,
    UnknownUpdate,
    ValidationFailed,
)
from .model import (
    Elicitation,
    FeedbackLog,
    LintFinding,
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
from .registry import LogLink, Registry, SectionAssignment, anonymize
from .scanner import ScanConfig, checklist, scan

DEFAULT_BIND = "127.0.0.1:8787"

_NOT_FOUND_CODES = (
    UnknownLog,
    UnknownRecord,
    UnknownUpdate,
    UnknownMetric,
    UnknownSection,
    RootNotFound,
)


class MalformedBody(FeedbackLogError):
    """Request body is not the JSON shape the endpoint expects."""


def load_tokens(token_file: str | Path | None) -> dict[str, str]:
    if token_file is None:
        return {}
    data = json.loads(Path(token_file).read_text("utf-8"))
    if not isinstance(data, dict):
        raise MalformedBody("token file must map token -> person id")
    return {str(k): str(v) for k, v in data.items()}


# --- request-body decoding ----------------------------------------------------

def _need(body: dict, key: str, kind: type) -> Any:
    if not isinstance(body, dict) or key not in body:
        raise MalformedBody(f"missing field {key!r}")
    value = body[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
        raise MalformedBody(f"field {key!r} must be {kind.__name__}")
    return value


def _body_person(doc: Any) -> PersonRef:
    return PersonRef(_need(doc, "id", str), str(doc.get("display_name", "")))


def _body_stakeholder(doc: Any) -> StakeholderRef:
    return StakeholderRef(
        label=_need(doc, "label", str),
        category=_need(doc, "category", str),
        identifiable=bool(doc.get("identifiable", False)),
        consent_recorded=bool(doc.get("consent_recorded", False)),
    )


def _body_elicitation(doc: Any) -> Elicitation:
    stakeholders = _need(doc, "stakeholders", list)
    return Elicitation(
        stakeholders=[_body_stakeholder(s) for s in stakeholders],
        reason=str(doc.get("reason", "")),
        presentation=str(doc.get("presentation", "")),
    )


def _body_reading(doc: Any) -> MetricReading:
    context = ReadingContext.parse(str(doc.get("context", "starting_point")))
    return MetricReading(
        metric_name=_need(doc, "metric_name", str),
        value=_need(doc, "value", float),
        context=context,
        note=str(doc.get("note", "")),
    )


def _body_update_entry(doc: Any) -> UpdateEntry:
    kinds = _need(doc, "kinds", list)
    return UpdateEntry(
        which=_need(doc, "which", str),
        kinds={str(k) for k in kinds},
        stage=_need(doc, "stage", str),
        why=str(doc.get("why", "")),
        effect_readings=[_body_reading(r) for r in doc.get("effect_readings", [])],
        effect_note=str(doc.get("effect_note", "")),
    )


def _body_snapshot(doc: Any) -> PipelineSnapshot:
    return PipelineSnapshot(
        data_description=str(doc.get("data_description", "")),
        model_description=str(doc.get("model_description", "")),
        metrics=[_body_metric_spec(m) for m in doc.get("metrics", [])],
        readings=[_body_reading(r) for r in doc.get("readings", [])],
        metrics_note=str(doc.get("metrics_note", "")),
    )


def _body_metric_spec(doc: Any) -> MetricSpec:
    target = None
    if doc.get("target") is not None:
        target = Target(
            comparator=_need(doc["target"], "comparator", str),
            value=_need(doc["target"], "value", float),
        )
    introduced = doc.get("introduced_by", "starting_point")
    if isinstance(introduced, dict):
        introduced = (_need(introduced, "record_id", str), _need(introduced, "update_id", str))
    return MetricSpec(
        name=_need(doc, "name", str),
        description=str(doc.get("description", "")),
        direction=str(doc.get("direction", "higher_better")),
        unit=str(doc.get("unit", "")),
        target=target,
        introduced_by=introduced,
    )


def _finding_doc(f: LintFinding) -> dict:
    return {
        "rule_id": f.rule_id,
        "severity": f.severity.value,
        "path": f.path,
        "message": f.message,
    }


# --- the app -------------------------------------------------------------------

class Api:
    """Route table and handlers; shared state lives in the registry."""

    def __init__(self, registry: Registry, tokens: dict[str, str] | None = None):
        self.registry = registry
        self.tokens = dict(tokens or {})
        self.routes: list[tuple[str, re.Pattern, Callable]] = [
            ("GET", re.compile(r"^/healthz$"), self.health),
            ("GET", re.compile(r"^/logs$"), self.list_logs),
            ("POST", re.compile(r"^/logs$"), self.create_log),
            ("GET", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)$"), self.get_log),
            ("POST", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/records$"), self.open_record),
            (
                "POST",
                re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/records/(?P<rid>R[0-9]+)/feedback$"),
                self.set_feedback,
            ),
            (
                "POST",
                re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/records/(?P<rid>R[0-9]+)/updates$"),
                self.add_update,
            ),
            (
                "POST",
                re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/records/(?P<rid>R[0-9]+)/choose$"),
                self.choose,
            ),
            (
                "POST",
                re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/records/(?P<rid>R[0-9]+)/inaction$"),
                self.inaction,
            ),
            ("POST", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/metrics$"), self.add_metric),
            ("POST", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/readings$"), self.add_reading),
            ("POST", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/finalize$"), self.finalize),
            ("GET", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/validate$"), self.validate),
            ("GET", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/export$"), self.export),
            ("GET", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/checklist$"), self.checklist),
            ("GET", re.compile(r"^/search$"), self.search),
            ("POST", re.compile(r"^/links$"), self.add_link),
            ("GET", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/provenance$"), self.provenance),
            ("POST", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/assignments$"), self.assignments),
            ("POST", re.compile(r"^/logs/(?P<log_id>[a-z0-9-]+)/anonymize$"), self.anonymize_log),
        ]

    # -- plumbing ----------------------------------------------------------

    def actor_for(self, token: Optional[str]) -> Optional[str]:
        if token is None:
            return None
        return self.tokens.get(token)

    def dispatch(
        self, method: str, path: str, query: dict, body: Any, actor: Optional[str]
    ) -> tuple[int, dict]:
        handler = None
        params: dict[str, str] = {}
        path_known = False
        for route_method, pattern, fn in self.routes:
            match = pattern.match(path)
            if match:
                path_known = True
                if route_method == method:
                    handler = fn
                    params = match.groupdict()
                    break
        if handler is None:
            code = "MethodNotAllowed" if path_known else "NotFound"
            return (405 if path_known else 404), {
                "code": code,
                "message": f"{method} {path}",
                "path": path,
            }
        try:
            return 200, handler(actor=actor, query=query, body=body, **params)
        except ValidationFailed as exc:
            return 422, {
                "code": exc.code,
                "message": exc.message,
                "path": exc.path,
                "findings": [_finding_doc(f) for f in exc.findings],
            }
        except StaleRevision as exc:
            return 409, self._error_doc(exc)
        except AccessDenied as exc:
            if actor is None:
                return 401, {
                    "code": "Unauthorized",
                    "message": "a grant is required; supply a known bearer token",
                    "path": exc.path,
                }
            return 403, self._error_doc(exc)
        except _NOT_FOUND_CODES as exc:
            return 404, self._error_doc(exc)
        except (MalformedBody, MalformedQuery, DocumentSyntaxError, SchemaViolation) as exc:
            return 400, self._error_doc(exc)
        except FeedbackLogError as exc:
            # domain rule rejected the operation (EmptySummary, LogFinalized, ...)
            return 400, self._error_doc(exc)

    @staticmethod
    def _error_doc(exc: FeedbackLogError) -> dict:
        return {"code": exc.code, "message": exc.message, "path": exc.path}

    def _mutate(
        self,
        log_id: str,
        actor: Optional[str],
        body: Any,
        fn: Callable[[FeedbackLog], dict],
    ) -> dict:
        """Load, check the optimistic base revision, apply, store."""
        log = self.registry.get(log_id, actor)
        base = None
        if isinstance(body, dict) and body.get("base_revision") is not None:
            base = body["base_revision"]
            if not isinstance(base, int) or isinstance(base, bool):
                raise MalformedBody("base_revision must be an integer")
        if base is not None and base != log.revision:
            raise StaleRevision(
                f"base revision {base} does not match stored {log.revision}"
            )
        extra = fn(log)
        self.registry.put(log, actor)
        return {"revision": log.revision, **extra}

    # -- handlers ------------------------------------------------------------

    def health(self, actor, query, body) -> dict:
        return {
            "ok": True,
            "version": __version__,
            "log_count": len(self.registry.all_ids()),
        }

    def list_logs(self, actor, query, body) -> dict:
        out = []
        for log_id in self.registry.list_ids(actor):
            log = self.registry.get(log_id, actor)
            out.append(
                {
                    "id": log.id,
                    "title": log.title,
                    "status": log.status.value,
                    "revision": log.revision,
                    "owner": {"id": log.owner.id, "display_name": log.owner.display_name},
                }
            )
        return {"logs": out}

    def create_log(self, actor, query, body) -> dict:
        if actor is None:
            raise AccessDenied("creating a log requires a grant")
        log = new_log(
            title=_need(body, "title", str),
            pipeline_name=str(body.get("pipeline_name", "")),
            owner=_body_person(_need(body, "owner", dict)),
            starting_point=_body_snapshot(_need(body, "starting_point", dict)),
            existing_ids=self.registry.all_ids(),
        )
        self.registry.put(log, actor)
        return {"id": log.id, "revision": log.revision}

    def get_log(self, actor, query, body, log_id) -> dict:
        return docformat.to_document(self.registry.get(log_id, actor))

    def open_record(self, actor, query, body, log_id) -> dict:
        def apply(log: FeedbackLog) -> dict:
            rid = log.open_record(_body_elicitation(_need(body, "elicitation", dict)))
            return {"record_id": rid}

        return self._mutate(log_id, actor, body, apply)

    def set_feedback(self, actor, query, body, log_id, rid) -> dict:
        def apply(log: FeedbackLog) -> dict:
            log.set_feedback(rid, _need(body, "text", str))
            return {}

        return self._mutate(log_id, actor, body, apply)

    def add_update(self, actor, query, body, log_id, rid) -> dict:
        def apply(log: FeedbackLog) -> dict:
            uid = log.add_candidate_update(rid, _body_update_entry(_need(body, "entry", dict)))
            return {"update_id": uid}

        return self._mutate(log_id, actor, body, apply)

    def choose(self, actor, query, body, log_id, rid) -> dict:
        def apply(log: FeedbackLog) -> dict:
            combined = body.get("combined_effect")
            log.choose_updates(
                rid,
                {str(u) for u in _need(body, "update_ids", list)},
                _need(body, "summary_text", str),
                combined_effect=None
                if combined is None
                else [_body_reading(r) for r in combined],
                rejected_ids={str(u) for u in body.get("rejected_ids", [])},
            )
            return {}

        return self._mutate(log_id, actor, body, apply)

    def inaction(self, actor, query, body, log_id, rid) -> dict:
        def apply(log: FeedbackLog) -> dict:
            log.record_inaction(rid, _need(body, "justification", str))
            return {}

        return self._mutate(log_id, actor, body, apply)

    def add_metric(self, actor, query, body, log_id) -> dict:
        def apply(log: FeedbackLog) -> dict:
            log.add_metric(_body_metric_spec(_need(body, "spec", dict)))
            return {}

        return self._mutate(log_id, actor, body, apply)

    def add_reading(self, actor, query, body, log_id) -> dict:
        def apply(log: FeedbackLog) -> dict:
            log.add_reading(_body_reading(_need(body, "reading", dict)))
            return {}

        return self._mutate(log_id, actor, body, apply)

    def finalize(self, actor, query, body, log_id) -> dict:
        warnings: list[LintFinding] = []

        def apply(log: FeedbackLog) -> dict:
            warnings.extend(log.finalize(_body_snapshot(_need(body, "final_summary", dict))))
            return {"warnings": [_finding_doc(f) for f in warnings]}

        return self._mutate(log_id, actor, body, apply)

    def validate(self, actor, query, body, log_id) -> dict:
        log = self.registry.get(log_id, actor)
        return {"findings": [_finding_doc(f) for f in lint.validate(log)]}

    def export(self, actor, query, body, log_id) -> dict:
        fmt = (query.get("format") or ["md"])[0]
        if fmt not in ("md", "html"):
            raise MalformedBody(f"unsupported export format {fmt!r}")
        log = self.registry.get(log_id, actor)
        content = docformat.export_markdown(log) if fmt == "md" else docformat.export_html(log)
        return {"format": fmt, "content": content}

    def checklist(self, actor, query, body, log_id) -> dict:
        log = self.registry.get(log_id, actor)
        scan_root = (query.get("scan_root") or [None])[0]
        annotations = []
        warnings: list[str] = []
        scanned = False
        if scan_root:
            result = scan(ScanConfig(root_path=scan_root))
            annotations = result.annotations
            warnings = result.warnings
            scanned = True
        items, findings = checklist(log, annotations)
        return {
            "scanned": scanned,
            "items": [
                {
                    "record_id": i.record_id,
                    "update_id": i.update_id,
                    "which": i.which,
                    "state": i.state,
                    "evidence": [
                        {
                            "file_path": a.file_path,
                            "line_number": a.line_number,
                            "done_flag": a.done_flag,
                        }
                        for a in i.evidence
                    ],
                }
                for i in items
            ],
            "findings": [
                {
                    "kind": f.kind,
                    "severity": f.severity.value,
                    "message": f.message,
                    "annotation": {
                        "file_path": f.annotation.file_path,
                        "line_number": f.annotation.line_number,
                        "log_id": f.annotation.log_id,
                        "record_id": f.annotation.record_id,
                        "update_id": f.annotation.update_id,
                    },
                }
                for f in findings
            ],
            "warnings": warnings,
        }

    def search(self, actor, query, body) -> dict:
        q = (query.get("q") or [""])[0]
        hits = self.registry.search(q, actor)
        return {
            "hits": [
                {
                    "log_id": h.log_id,
                    "record_id": h.record_id,
                    "matched_field": h.matched_field,
                    "snippet": h.snippet,
                }
                for h in hits
            ]
        }

    def add_link(self, actor, query, body) -> dict:
        if actor is None:
            raise AccessDenied("linking requires a grant")
        link = LogLink(
            from_log_id=_need(body, "from_log_id", str),
            to_log_id=_need(body, "to_log_id", str),
            relation=_need(body, "relation", str),
            note=str(body.get("note", "")),
        )
        self.registry.add_link(link, actor)
        return {"ok": True}

    def provenance(self, actor, query, body, log_id) -> dict:
        self.registry.get(log_id, actor)  # viewer check
        return {"chain": self.registry.provenance_chain(log_id)}

    def assignments(self, actor, query, body, log_id) -> dict:
        section_path = _need(body, "section_path", str)
        assignee = _body_person(_need(body, "assignee", dict))
        if str(body.get("state", "open")) == "done":
            self.registry.complete_section(log_id, section_path, assignee.id, actor)
        else:
            self.registry.assign_section(
                SectionAssignment(log_id=log_id, section_path=section_path, assignee=assignee),
                actor,
            )
        return {
            "assignments": [
                {
                    "section_path": a.section_path,
                    "assignee": {"id": a.assignee.id, "display_name": a.assignee.display_name},
                    "state": a.state,
                }
                for a in self.registry.assignments_for(log_id)
            ]
        }

    def anonymize_log(self, actor, query, body, log_id) -> dict:
        log = self.registry.get(log_id, actor)
        anon, mapping = anonymize(log)
        out: dict = {"log": docformat.to_document(anon)}
        if self.registry.effective_role(actor, log_id) == "owner":
            out["mapping"] = mapping
        return out


class _Handler(BaseHTTPRequestHandler):
    api: Api  # set on the server class

    server_version = "feedbacklog/" + __version__

    def log_message(self, format, *args):  # silence default stderr chatter
        pass

    def _token(self) -> Optional[str]:
        header = self.headers.get("Authorization", "")
        if header.startswith("Bearer "):
            return header[len("Bearer "):].strip()
        return None

    def _respond(self, status: int, payload: dict, request_id: str) -> None:
        raw = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(raw)))
        self.send_header("X-Request-Id", request_id)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Authorization, Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(raw)

    def _handle(self, method: str) -> None:
        request_id = uuid.uuid4().hex
        parsed = urlparse(self.path)
        query = parse_qs(parsed.query)
        body: Any = None
        length = int(self.headers.get("Content-Length") or 0)
        if length:
            raw = self.rfile.read(length)
            try:
                body = json.loads(raw.decode("utf-8"))
            except (json.JSONDecodeError, UnicodeDecodeError):
                self._respond(
                    400,
                    {"code": "MalformedBody", "message": "body is not valid JSON", "path": ""},
                    request_id,
                )
                return
        api = self.server.api  # type: ignore[attr-defined]
        actor = api.actor_for(self._token())
        status, payload = api.dispatch(method, parsed.path, query, body, actor)
        self._respond(status, payload, request_id)

    def do_GET(self) -> None:
        self._handle("GET")

    def do_POST(self) -> None:
        self._handle("POST")

    def do_OPTIONS(self) -> None:
        self._respond(200, {"ok": True}, uuid.uuid4().hex)


class ApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], api: Api):
        super().__init__(address, _Handler)
        self.api = api


def build_server(
    registry: Registry,
    bind_address: str = DEFAULT_BIND,
    token_file: str | Path | None = None,
    tokens: dict[str, str] | None = None,
) -> ApiServer:
    host, _, port = bind_address.partition(":")
    api = Api(registry, tokens if tokens is not None else load_tokens(token_file))
    return ApiServer((host or "127.0.0.1", int(port or 8787)), api)


def serve(
    registry: Registry,
    bind_address: str = DEFAULT_BIND,
    token_file: str | Path | None = None,
    tokens: dict[str, str] | None = None,
) -> ApiServer:
    """Start serving on a daemon thread and return the running server."""
    server = build_server(registry, bind_address, token_file, tokens)
    thread = threading.Thread(target=server.serve_forever, name="fblog-api", daemon=True)
    thread.start()
    return server
