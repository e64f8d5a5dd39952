"""Multi-log store with links, search, access control, and anonymization.

Layout under the registry root:

    logs/<id>.fblog.json   one canonical file per log (the source of truth)
    links.json             typed directed edges between logs
    access.json            org members and explicit grants
    assignments.json       section assignments
    index.json             search index cache, rebuilt on demand

Writes are atomic (temp file + rename) and optimistic: a put must carry a
revision strictly greater than the stored one. Access follows a maximal-read /
minimal-write default: every org member can view every log, the owner grant is
created with the log, and anything further is an explicit grant.
"""

from __future__ import annotations

import copy
import json
import os
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from . import docformat, lint
from .errors import (
    AccessDenied,
    DuplicateLink,
    MalformedQuery,
    SelfLink,
    StaleRevision,
    UnknownLog,
    UnknownSection,
    ValidationFailed,
)
from .model import FeedbackLog, PersonRef, Stage

RELATIONS = ("prompted", "refines", "same_pipeline", "supersedes")
ROLES = ("viewer", "editor", "owner")
_ROLE_RANK = {None: -1, "viewer": 0, "editor": 1, "owner": 2}

#: sentinel actor for local tooling that already has filesystem access; the
#: HTTP service never resolves a token to it unless the operator says so.
LOCAL_ADMIN = "__local__"

FILTER_KEYS = ("stakeholder", "category", "kind", "stage", "metric", "status", "owner")

_STAGE_ALIASES = {
    "pre_training": Stage.DATA_COLLECTION,
    "pre-training": Stage.DATA_COLLECTION,
    "data_collection_pre_training": Stage.DATA_COLLECTION,
    "training": Stage.MODEL_DEVELOPMENT,
    "model_development_training": Stage.MODEL_DEVELOPMENT,
    "post_training": Stage.MODEL_DEPLOYMENT,
    "post-training": Stage.MODEL_DEPLOYMENT,
    "model_deployment_post_training": Stage.MODEL_DEPLOYMENT,
}

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)?")
_SECTION_RE = re.compile(r"^([a-z_]+)(?:\[([0-9]+)\])?$")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class LogLink:
    from_log_id: str
    to_log_id: str
    relation: str
    note: str = ""


@dataclass(frozen=True)
class AccessGrant:
    person_id: str
    scope: str  # "global" or a log id
    role: str  # viewer | editor | owner


@dataclass
class SectionAssignment:
    log_id: str
    section_path: str
    assignee: PersonRef
    state: str = "open"  # open | done


@dataclass(frozen=True)
class SearchHit:
    log_id: str
    record_id: Optional[str]
    matched_field: str
    snippet: str


@dataclass
class SearchQuery:
    terms: list[str] = field(default_factory=list)
    filters: list[tuple[str, str]] = field(default_factory=list)

    @staticmethod
    def parse(text: str) -> "SearchQuery":
        query = SearchQuery()
        for raw in text.split():
            key, sep, value = raw.partition(":")
            if sep and re.fullmatch(r"[a-z_]+", key):
                if key not in FILTER_KEYS:
                    raise MalformedQuery(f"unknown filter key {key!r}")
                if not value:
                    raise MalformedQuery(f"filter {key!r} has no value")
                query.filters.append((key, value.lower()))
            else:
                query.terms.extend(tokenize(raw))
        return query


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _dump_json(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


class Registry:
    """File-backed store; safe to share behind the HTTP service."""

    def __init__(self, root: str | Path, org_members: Iterable[PersonRef] = ()):
        self.root = Path(root)
        self._write_lock = threading.Lock()
        (self.root / "logs").mkdir(parents=True, exist_ok=True)
        if not self._access_path().exists():
            self._save_access({"org_members": [], "grants": []})
        for person in org_members:
            self.add_org_member(person)

    # -- paths and low-level state -------------------------------------

    def _log_path(self, log_id: str) -> Path:
        return self.root / "logs" / f"{log_id}{docformat.CANONICAL_EXTENSION}"

    def _links_path(self) -> Path:
        return self.root / "links.json"

    def _access_path(self) -> Path:
        return self.root / "access.json"

    def _assignments_path(self) -> Path:
        return self.root / "assignments.json"

    def _index_path(self) -> Path:
        return self.root / "index.json"

    def _load_access(self) -> dict:
        if not self._access_path().exists():
            return {"org_members": [], "grants": []}
        return json.loads(self._access_path().read_text("utf-8"))

    def _save_access(self, data: dict) -> None:
        _atomic_write(self._access_path(), _dump_json(data))

    def _load_links(self) -> list[LogLink]:
        if not self._links_path().exists():
            return []
        raw = json.loads(self._links_path().read_text("utf-8"))
        return [LogLink(**entry) for entry in raw]

    def _save_links(self, links: list[LogLink]) -> None:
        data = [
            {
                "from_log_id": l.from_log_id,
                "to_log_id": l.to_log_id,
                "relation": l.relation,
                "note": l.note,
            }
            for l in sorted(links, key=lambda l: (l.from_log_id, l.to_log_id, l.relation))
        ]
        _atomic_write(self._links_path(), _dump_json(data))

    def _load_assignments(self) -> list[SectionAssignment]:
        if not self._assignments_path().exists():
            return []
        raw = json.loads(self._assignments_path().read_text("utf-8"))
        return [
            SectionAssignment(
                log_id=a["log_id"],
                section_path=a["section_path"],
                assignee=PersonRef(a["assignee"]["id"], a["assignee"]["display_name"]),
                state=a["state"],
            )
            for a in raw
        ]

    def _save_assignments(self, assignments: list[SectionAssignment]) -> None:
        data = [
            {
                "log_id": a.log_id,
                "section_path": a.section_path,
                "assignee": {"id": a.assignee.id, "display_name": a.assignee.display_name},
                "state": a.state,
            }
            for a in sorted(assignments, key=lambda a: (a.log_id, a.section_path, a.assignee.id))
        ]
        _atomic_write(self._assignments_path(), _dump_json(data))

    # -- access control --------------------------------------------------

    def org_members(self) -> list[PersonRef]:
        return [
            PersonRef(p["id"], p["display_name"])
            for p in self._load_access()["org_members"]
        ]

    def grants(self) -> list[AccessGrant]:
        return [AccessGrant(**g) for g in self._load_access()["grants"]]

    def add_org_member(self, person: PersonRef) -> None:
        data = self._load_access()
        if all(p["id"] != person.id for p in data["org_members"]):
            data["org_members"].append(
                {"id": person.id, "display_name": person.display_name}
            )
            self._save_access(data)

    def grant(self, person_id: str, scope: str, role: str, actor: str) -> None:
        """Explicit grant; owner grants replace the previous owner (one per log)."""
        if role not in ROLES:
            raise MalformedQuery(f"unknown role {role!r}")
        if scope != "global" and not self._log_path(scope).exists():
            raise UnknownLog(f"no log {scope!r}")
        if scope != "global" and _ROLE_RANK[self.effective_role(actor, scope)] < _ROLE_RANK["owner"]:
            raise AccessDenied(f"{actor!r} is not the owner of {scope!r}")
        if scope == "global" and actor != LOCAL_ADMIN and not self._is_member(actor):
            raise AccessDenied(f"{actor!r} is not an org member")
        data = self._load_access()
        grants = [AccessGrant(**g) for g in data["grants"]]
        if role == "owner" and scope != "global":
            grants = [g for g in grants if not (g.scope == scope and g.role == "owner")]
        entry = AccessGrant(person_id=person_id, scope=scope, role=role)
        if entry not in grants:
            grants.append(entry)
        data["grants"] = [
            {"person_id": g.person_id, "scope": g.scope, "role": g.role} for g in grants
        ]
        self._save_access(data)

    def _is_member(self, person_id: Optional[str]) -> bool:
        if person_id is None:
            return False
        return any(p["id"] == person_id for p in self._load_access()["org_members"])

    def effective_role(self, person_id: Optional[str], log_id: str) -> Optional[str]:
        """Max role over global and log-scoped grants; members view everything."""
        if person_id is None:
            return None
        if person_id == LOCAL_ADMIN:
            return "owner"
        best = "viewer" if self._is_member(person_id) else None
        for g in self.grants():
            if g.person_id != person_id:
                continue
            if g.scope == "global" or g.scope == log_id:
                if _ROLE_RANK[g.role] > _ROLE_RANK[best]:
                    best = g.role
        return best

    def _require(self, person_id: Optional[str], log_id: str, role: str) -> None:
        if _ROLE_RANK[self.effective_role(person_id, log_id)] < _ROLE_RANK[role]:
            raise AccessDenied(
                f"{person_id!r} lacks {role} access to {log_id!r}"
            )

    # -- log storage -------------------------------------------------------

    def put(self, log: FeedbackLog, actor: str) -> None:
        """Validate, check the revision, and atomically write the log."""
        errors = lint.error_findings(log)
        if errors:
            raise ValidationFailed(errors)
        with self._write_lock:
            path = self._log_path(log.id)
            if path.exists():
                self._require(actor, log.id, "editor")
                stored = docformat.parse(path.read_bytes())
                if log.revision <= stored.revision:
                    raise StaleRevision(
                        f"revision {log.revision} is not newer than stored "
                        f"{stored.revision} for {log.id!r}"
                    )
            else:
                role = self.effective_role(actor, log.id)
                creator_ok = (
                    _ROLE_RANK[role] >= _ROLE_RANK["editor"]
                    or (self._is_member(actor) and actor == log.owner.id)
                )
                if not creator_ok:
                    raise AccessDenied(
                        f"{actor!r} may not create log {log.id!r}"
                    )
                self.grant_owner_unchecked(log.owner.id, log.id)
            _atomic_write(path, docformat.serialize(log))

    def grant_owner_unchecked(self, person_id: str, log_id: str) -> None:
        data = self._load_access()
        grants = [g for g in data["grants"] if not (g["scope"] == log_id and g["role"] == "owner")]
        grants.append({"person_id": person_id, "scope": log_id, "role": "owner"})
        data["grants"] = grants
        self._save_access(data)

    def get(self, log_id: str, actor: str) -> FeedbackLog:
        path = self._log_path(log_id)
        if not path.exists():
            raise UnknownLog(f"no log {log_id!r}")
        self._require(actor, log_id, "viewer")
        return docformat.parse(path.read_bytes())

    def list_ids(self, actor: str) -> list[str]:
        ids = sorted(
            p.name[: -len(docformat.CANONICAL_EXTENSION)]
            for p in (self.root / "logs").glob(f"*{docformat.CANONICAL_EXTENSION}")
        )
        return [
            i
            for i in ids
            if _ROLE_RANK[self.effective_role(actor, i)] >= _ROLE_RANK["viewer"]
        ]

    def all_ids(self) -> list[str]:
        return sorted(
            p.name[: -len(docformat.CANONICAL_EXTENSION)]
            for p in (self.root / "logs").glob(f"*{docformat.CANONICAL_EXTENSION}")
        )

    def _load_log_unchecked(self, log_id: str) -> FeedbackLog:
        path = self._log_path(log_id)
        if not path.exists():
            raise UnknownLog(f"no log {log_id!r}")
        return docformat.parse(path.read_bytes())

    # -- links and provenance ---------------------------------------------

    def add_link(self, link: LogLink, actor: str) -> None:
        if link.relation not in RELATIONS:
            raise MalformedQuery(f"unknown relation {link.relation!r}")
        if link.from_log_id == link.to_log_id:
            raise SelfLink(f"cannot link {link.from_log_id!r} to itself")
        for log_id in (link.from_log_id, link.to_log_id):
            if not self._log_path(log_id).exists():
                raise UnknownLog(f"no log {log_id!r}")
        self._require(actor, link.from_log_id, "editor")
        with self._write_lock:
            links = self._load_links()
            if any(
                (l.from_log_id, l.to_log_id, l.relation)
                == (link.from_log_id, link.to_log_id, link.relation)
                for l in links
            ):
                raise DuplicateLink(
                    f"{link.from_log_id} -{link.relation}-> {link.to_log_id} already exists"
                )
            links.append(link)
            self._save_links(links)

    def links(self) -> list[LogLink]:
        return self._load_links()

    def provenance_chain(self, log_id: str) -> list[str]:
        """Logs that (transitively) prompted this one, nearest first, cycle-safe."""
        if not self._log_path(log_id).exists():
            raise UnknownLog(f"no log {log_id!r}")
        incoming: dict[str, list[str]] = {}
        for link in self._load_links():
            if link.relation == "prompted":
                incoming.setdefault(link.to_log_id, []).append(link.from_log_id)
        chain: list[str] = []
        visited = {log_id}
        frontier = [log_id]
        while frontier:
            nxt: list[str] = []
            for node in frontier:
                for parent in sorted(incoming.get(node, [])):
                    if parent in visited:
                        continue
                    visited.add(parent)
                    chain.append(parent)
                    nxt.append(parent)
            frontier = nxt
        return chain

    # -- section assignments ------------------------------------------------

    def assign_section(self, assignment: SectionAssignment, actor: str) -> None:
        self._require(actor, assignment.log_id, "editor")
        log = self._load_log_unchecked(assignment.log_id)
        resolve_section_path(log, assignment.section_path)
        with self._write_lock:
            assignments = self._load_assignments()
            for existing in assignments:
                if (
                    existing.log_id == assignment.log_id
                    and existing.section_path == assignment.section_path
                    and existing.assignee.id == assignment.assignee.id
                ):
                    return
            assignments.append(assignment)
            self._save_assignments(assignments)

    def complete_section(self, log_id: str, section_path: str, assignee_id: str, actor: str) -> None:
        """Mark open -> done; completing twice is a no-op."""
        self._require(actor, log_id, "editor")
        with self._write_lock:
            assignments = self._load_assignments()
            found = False
            for a in assignments:
                if (
                    a.log_id == log_id
                    and a.section_path == section_path
                    and a.assignee.id == assignee_id
                ):
                    a.state = "done"
                    found = True
            if not found:
                raise UnknownSection(
                    f"no assignment for {section_path!r} on {log_id!r}"
                )
            self._save_assignments(assignments)

    def assignments_for(self, log_id: str) -> list[SectionAssignment]:
        return [a for a in self._load_assignments() if a.log_id == log_id]

    # -- search ---------------------------------------------------------------

    def search(self, query: str | SearchQuery, actor: str) -> list[SearchHit]:
        if isinstance(query, str):
            query = SearchQuery.parse(query)
        hits: list[SearchHit] = []
        index = self._ensure_index()
        for log_id in self.list_ids(actor):
            log = self._load_log_unchecked(log_id)
            hits.extend(_search_log(log, query, index.get(log_id, {})))
        return sorted(
            hits,
            key=lambda h: (
                h.log_id,
                int(h.record_id[1:]) if h.record_id else -1,
                h.matched_field,
            ),
        )

    def _ensure_index(self) -> dict:
        """token -> field-path map per log, rebuilt when revisions drift."""
        stamp = {}
        for log_id in self.all_ids():
            log = self._load_log_unchecked(log_id)
            stamp[log_id] = log.revision
        cached = None
        if self._index_path().exists():
            try:
                cached = json.loads(self._index_path().read_text("utf-8"))
            except json.JSONDecodeError:
                cached = None
        if cached is not None and cached.get("revisions") == stamp:
            return cached["logs"]
        built = {}
        for log_id in stamp:
            log = self._load_log_unchecked(log_id)
            per_log: dict[str, list[str]] = {}
            for path, record_id, text in _text_fields(log):
                for token in set(tokenize(text)):
                    per_log.setdefault(token, []).append(path)
            built[log_id] = per_log
        _atomic_write(
            self._index_path(), _dump_json({"revisions": stamp, "logs": built})
        )
        return built


def _text_fields(log: FeedbackLog):
    """All searchable (path, record_id, text) locations in document order."""
    yield ("title", None, log.title)
    yield ("pipeline_name", None, log.pipeline_name)
    yield ("owner.display_name", None, log.owner.display_name)
    yield ("starting_point.data_description", None, log.starting_point.data_description)
    yield ("starting_point.model_description", None, log.starting_point.model_description)
    if log.starting_point.metrics_note:
        yield ("starting_point.metrics_note", None, log.starting_point.metrics_note)
    for m, spec in enumerate(log.starting_point.metrics):
        yield (f"starting_point.metrics[{m}]", None, f"{spec.name} {spec.description}")
    for m, spec in enumerate(log.metrics):
        yield (f"metrics[{m}]", None, f"{spec.name} {spec.description}")
    for i, rec in enumerate(log.records):
        base = f"records[{i}]"
        for k, s in enumerate(rec.elicitation.stakeholders):
            yield (f"{base}.elicitation.stakeholders[{k}]", rec.id, s.label)
        yield (f"{base}.elicitation.reason", rec.id, rec.elicitation.reason)
        yield (f"{base}.elicitation.presentation", rec.id, rec.elicitation.presentation)
        yield (f"{base}.feedback_text", rec.id, rec.feedback_text)
        for j, entry in enumerate(rec.candidate_updates):
            ubase = f"{base}.candidate_updates[{j}]"
            yield (f"{ubase}.which", rec.id, entry.which)
            yield (f"{ubase}.why", rec.id, entry.why)
            if entry.effect_note:
                yield (f"{ubase}.effect_note", rec.id, entry.effect_note)
        yield (f"{base}.summary_text", rec.id, rec.summary_text)
        if rec.inaction_justification:
            yield (f"{base}.inaction_justification", rec.id, rec.inaction_justification)
    if log.final_summary is not None:
        yield ("final_summary.data_description", None, log.final_summary.data_description)
        yield ("final_summary.model_description", None, log.final_summary.model_description)


def _log_level_filters_match(log: FeedbackLog, filters: list[tuple[str, str]]) -> bool:
    for key, value in filters:
        if key == "status" and log.status.value != value:
            return False
        if key == "owner" and value not in (
            log.owner.id.lower(),
            *tokenize(log.owner.display_name),
        ):
            return False
        if key == "metric" and all(
            s.name.lower() != value for s in log.metric_specs()
        ):
            return False
    return True


def _stage_matches(stage: Stage, value: str) -> bool:
    alias = _STAGE_ALIASES.get(value)
    return alias is stage


def _search_log(log: FeedbackLog, query: SearchQuery, token_index: dict) -> list[SearchHit]:
    log_filters = [(k, v) for k, v in query.filters if k in ("status", "owner", "metric")]
    record_filters = [(k, v) for k, v in query.filters if k in ("stakeholder", "category")]
    update_filters = [(k, v) for k, v in query.filters if k in ("kind", "stage")]

    if not _log_level_filters_match(log, log_filters):
        return []

    def record_matches(rec) -> bool:
        for key, value in record_filters:
            if key == "stakeholder":
                if not any(
                    value in tokenize(s.label) or s.label.lower() == value
                    for s in rec.elicitation.stakeholders
                ):
                    return False
            if key == "category":
                if not any(
                    s.category.lower() == value
                    or (s.category.startswith("other:") and value == "other")
                    for s in rec.elicitation.stakeholders
                ):
                    return False
        return True

    def update_matches(entry) -> bool:
        for key, value in update_filters:
            if key == "kind":
                kinds = {k.lower() for k in entry.kinds}
                if value not in kinds and not (
                    value == "other" and any(k.startswith("other:") for k in entry.kinds)
                ):
                    return False
            if key == "stage" and not _stage_matches(entry.stage, value):
                return False
        return True

    # anchors: the finest-granularity locations the filters pin down
    anchors: list[SearchHit] = []
    if update_filters:
        for i, rec in enumerate(log.records):
            if not record_matches(rec):
                continue
            for j, entry in enumerate(rec.candidate_updates):
                if update_matches(entry):
                    anchors.append(
                        SearchHit(
                            log_id=log.id,
                            record_id=rec.id,
                            matched_field=f"records[{i}].candidate_updates[{j}]",
                            snippet=entry.which,
                        )
                    )
        if not anchors:
            return []
    elif record_filters:
        for i, rec in enumerate(log.records):
            if record_matches(rec):
                anchors.append(
                    SearchHit(
                        log_id=log.id,
                        record_id=rec.id,
                        matched_field=f"records[{i}].elicitation",
                        snippet=", ".join(
                            s.label for s in rec.elicitation.stakeholders
                        ),
                    )
                )
        if not anchors:
            return []

    if not query.terms:
        if anchors:
            return anchors
        if query.filters:
            # purely log-level filters: one hit naming the log
            return [
                SearchHit(
                    log_id=log.id,
                    record_id=None,
                    matched_field="title",
                    snippet=log.title,
                )
            ]
        return []

    # every term must appear somewhere in the log (index pre-check) ...
    for term in query.terms:
        if term not in token_index:
            return []
    # ... and hits are the fields containing all terms
    term_hits = []
    for path, record_id, text in _text_fields(log):
        tokens = set(tokenize(text))
        if all(term in tokens for term in query.terms):
            term_hits.append(
                SearchHit(
                    log_id=log.id,
                    record_id=record_id,
                    matched_field=path,
                    snippet=text,
                )
            )
    if not term_hits:
        return []
    if anchors or record_filters or update_filters:
        # conjunctive with sub-log filters: term hits restricted to anchor records
        anchor_records = {a.record_id for a in anchors}
        term_hits = [h for h in term_hits if h.record_id in anchor_records]
    return term_hits


def resolve_section_path(log: FeedbackLog, section_path: str) -> None:
    """Check a dotted path like records[1].incorporation against the log."""
    if not section_path:
        raise UnknownSection("empty section path")
    segments = section_path.split(".")
    head = segments[0]
    match = _SECTION_RE.match(head)
    if not match:
        raise UnknownSection(f"unparseable section path {section_path!r}")
    name, index = match.group(1), match.group(2)
    if name == "starting_point" and index is None:
        rest = segments[1:]
        if rest and rest[0] not in ("data_description", "model_description", "metrics", "readings"):
            raise UnknownSection(f"no section {section_path!r}")
        return
    if name == "final_summary" and index is None:
        if log.final_summary is None:
            raise UnknownSection("log has no final summary")
        return
    if name == "records" and index is not None:
        i = int(index)
        if i >= len(log.records):
            raise UnknownSection(f"no record at index {i}")
        rest = segments[1:]
        if not rest:
            return
        if rest[0] in ("elicitation", "feedback", "incorporation", "summary"):
            return
        raise UnknownSection(f"no section {section_path!r}")
    if name in ("title", "pipeline_name", "metrics", "readings") and index is None:
        return
    raise UnknownSection(f"no section {section_path!r}")


_TEXT_ATTRS_RECORD = ("feedback_text", "summary_text", "inaction_justification")


def anonymize(log: FeedbackLog) -> tuple[FeedbackLog, dict[str, str]]:
    """Replace identifiable stakeholders with category pseudonyms.

    Returns the anonymized copy and the label -> pseudonym mapping; the mapping
    is for the log owner only and must not be stored next to the log. The
    original labels are also scrubbed from every prose field, so serialized
    output contains no trace of them. Idempotent: a second pass is a no-op.
    """
    out = copy.deepcopy(log)
    mapping: dict[str, str] = {}
    counter = 0
    for rec in out.records:
        for s in rec.elicitation.stakeholders:
            if not s.identifiable:
                continue
            if s.label not in mapping:
                counter += 1
                mapping[s.label] = f"Stakeholder-{counter} ({s.category_display()})"
            s.label = mapping[s.label]
            s.identifiable = False
    if not mapping:
        return out, mapping

    ordered = sorted(mapping, key=len, reverse=True)

    def scrub(text: str) -> str:
        for label in ordered:
            text = text.replace(label, mapping[label])
        return text

    out.title = scrub(out.title)
    out.pipeline_name = scrub(out.pipeline_name)
    for snapshot in filter(None, (out.starting_point, out.final_summary)):
        snapshot.data_description = scrub(snapshot.data_description)
        snapshot.model_description = scrub(snapshot.model_description)
        snapshot.metrics_note = scrub(snapshot.metrics_note)
        for spec in snapshot.metrics:
            spec.description = scrub(spec.description)
        for reading in snapshot.readings:
            reading.note = scrub(reading.note)
    for spec in out.metrics:
        spec.description = scrub(spec.description)
    for reading in out.readings:
        reading.note = scrub(reading.note)
    for rec in out.records:
        rec.elicitation.reason = scrub(rec.elicitation.reason)
        rec.elicitation.presentation = scrub(rec.elicitation.presentation)
        for attr in _TEXT_ATTRS_RECORD:
            setattr(rec, attr, scrub(getattr(rec, attr)))
        for entry in rec.candidate_updates:
            entry.which = scrub(entry.which)
            entry.why = scrub(entry.why)
            entry.effect_note = scrub(entry.effect_note)
            for reading in entry.effect_readings:
                reading.note = scrub(reading.note)
    return out, mapping
