"""Source-tree scanner for feedback annotations and the incorporation checklist.

Practitioners mark code that implements a chosen update with a comment line
containing, anywhere in the line:

    FBLOG: <log-id>#R<n>/U<m> [done]

The grammar is raw-text and comment-syntax-agnostic, so it works in any
language. ``scan`` collects annotations; ``checklist`` reconciles them against
a log to derive one incorporation status per chosen update: updates whose
kinds are all ecosystem-side have nothing to implement in code and report
``not_applicable`` unless evidence exists.
"""

from __future__ import annotations

import fnmatch
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import RootNotFound
from .model import FeedbackLog, MODEL_KINDS, Severity

#: bit-exact grammar: keyword, single space, slug#R<digits>/U<digits>, optional " done"
ANNOTATION_RE = re.compile(
    r"FBLOG: ([a-z0-9](?:[a-z0-9-]*[a-z0-9])?)#(R[0-9]+)/(U[0-9]+)( done)?(?![A-Za-z0-9])"
)

DEFAULT_EXCLUDES = (
    ".git/**",
    ".hg/**",
    ".svn/**",
    "node_modules/**",
    "__pycache__/**",
    ".venv/**",
    "venv/**",
    "build/**",
    "dist/**",
    ".tox/**",
    ".mypy_cache/**",
    ".pytest_cache/**",
)


@dataclass(frozen=True, order=True)
class Annotation:
    file_path: str  # relative to the scan root, posix separators
    line_number: int  # 1-based
    log_id: str
    record_id: str
    update_id: str
    done_flag: bool = False


@dataclass
class ScanConfig:
    root_path: str
    include_globs: tuple[str, ...] = ("**",)
    exclude_globs: tuple[str, ...] = DEFAULT_EXCLUDES
    max_file_bytes: int = 1024 * 1024


@dataclass
class ScanResult:
    annotations: list[Annotation] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


class ChecklistState:
    IMPLEMENTED = "implemented_in_code"
    PENDING = "pending"
    NOT_APPLICABLE = "not_applicable"


@dataclass
class ChecklistItem:
    record_id: str
    update_id: str
    which: str
    state: str = ChecklistState.PENDING
    evidence: list[Annotation] = field(default_factory=list)


@dataclass
class ChecklistFinding:
    kind: str  # stale_reference | unchosen_update | other_log
    severity: Severity
    message: str
    annotation: Annotation


def _matches_any(rel_path: str, globs: tuple[str, ...]) -> bool:
    for pattern in globs:
        if fnmatch.fnmatch(rel_path, pattern):
            return True
        # also match directory-prefix patterns like ".git/**" against any depth
        if pattern.endswith("/**") and rel_path.startswith(pattern[:-2]):
            return True
        if "/" not in pattern and any(
            fnmatch.fnmatch(part, pattern) for part in rel_path.split("/")
        ):
            return True
    return False


def _looks_binary(head: bytes) -> bool:
    return b"\x00" in head


def scan(config: ScanConfig) -> ScanResult:
    """Collect annotations under the root; never aborts on per-file errors."""
    root = Path(config.root_path)
    if not root.is_dir():
        raise RootNotFound(f"scan root {config.root_path!r} does not exist")
    result = ScanResult()
    files = sorted(p for p in root.rglob("*") if p.is_file())
    for path in files:
        rel = path.relative_to(root).as_posix()
        if _matches_any(rel, config.exclude_globs):
            continue
        if not _matches_any(rel, config.include_globs):
            continue
        try:
            size = path.stat().st_size
            if size > config.max_file_bytes:
                result.warnings.append(f"{rel}: skipped, {size} bytes exceeds limit")
                continue
            data = path.read_bytes()
        except OSError as exc:
            result.warnings.append(f"{rel}: unreadable ({exc})")
            continue
        if _looks_binary(data[:8192]):
            continue
        text = data.decode("utf-8", errors="replace")
        for lineno, line in enumerate(text.splitlines(), start=1):
            match = ANNOTATION_RE.search(line)
            if match:
                result.annotations.append(
                    Annotation(
                        file_path=rel,
                        line_number=lineno,
                        log_id=match.group(1),
                        record_id=match.group(2),
                        update_id=match.group(3),
                        done_flag=match.group(4) is not None,
                    )
                )
            elif "FBLOG:" in line:
                result.warnings.append(
                    f"{rel}:{lineno}: malformed annotation: {line.strip()!r}"
                )
    result.annotations.sort(key=lambda a: (a.file_path, a.line_number))
    return result


def checklist(
    log: FeedbackLog, annotations: list[Annotation]
) -> tuple[list[ChecklistItem], list[ChecklistFinding]]:
    """One item per chosen update; every annotation becomes evidence or a finding."""
    items: dict[tuple[str, str], ChecklistItem] = {}
    for rec in log.records:
        for entry in rec.candidate_updates:
            if entry.id not in rec.chosen_update_ids:
                continue
            ecosystem_only = not (entry.kinds & MODEL_KINDS)
            items[(rec.id, entry.id)] = ChecklistItem(
                record_id=rec.id,
                update_id=entry.id,
                which=entry.which,
                state=ChecklistState.NOT_APPLICABLE
                if ecosystem_only
                else ChecklistState.PENDING,
            )
    findings: list[ChecklistFinding] = []
    known = {
        (rec.id, entry.id)
        for rec in log.records
        for entry in rec.candidate_updates
    }
    for ann in annotations:
        if ann.log_id != log.id:
            findings.append(
                ChecklistFinding(
                    kind="other_log",
                    severity=Severity.INFO,
                    message=f"annotation refers to a different log {ann.log_id!r}",
                    annotation=ann,
                )
            )
            continue
        key = (ann.record_id, ann.update_id)
        if key not in known:
            findings.append(
                ChecklistFinding(
                    kind="stale_reference",
                    severity=Severity.WARNING,
                    message=(
                        f"annotation references unknown update "
                        f"{ann.record_id}/{ann.update_id}"
                    ),
                    annotation=ann,
                )
            )
            continue
        if key not in items:
            findings.append(
                ChecklistFinding(
                    kind="unchosen_update",
                    severity=Severity.WARNING,
                    message=(
                        f"annotation on considered-but-not-chosen update "
                        f"{ann.record_id}/{ann.update_id}"
                    ),
                    annotation=ann,
                )
            )
            continue
        item = items[key]
        item.evidence.append(ann)
        item.state = ChecklistState.IMPLEMENTED
    return list(items.values()), findings
