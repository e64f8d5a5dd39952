from __future__ import annotations

import pytest

from feedbacklog import sample_logs
from feedbacklog.model import PersonRef
from feedbacklog.registry import Registry


@pytest.fixture
def asthma():
    return sample_logs.asthma_log()


@pytest.fixture
def image():
    return sample_logs.image_recognition_log()


@pytest.fixture
def recommender():
    return sample_logs.recommender_log()


@pytest.fixture
def sexual_health():
    return sample_logs.sexual_health_log()


@pytest.fixture
def corpus():
    return sample_logs.all_sample_logs()


@pytest.fixture
def populated_registry(tmp_path):
    """Registry with the sample corpus, owners as members, plus an auditor."""
    registry = Registry(
        tmp_path / "registry",
        org_members=[
            PersonRef("asthma-owner", "Asthma Agent Lead"),
            PersonRef("image-owner", "Image Recognition Lead"),
            PersonRef("reco-owner", "Recommendations Lead"),
            PersonRef("sh-owner", "Sexual Health Triage Lead"),
            PersonRef("auditor", "Internal Auditor"),
        ],
    )
    for log in sample_logs.all_sample_logs():
        registry.put(log, log.owner.id)
    return registry


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if getattr(report, "when", "call") != "call" and outcome == "passed":
                continue
            name = nodeid.split("::")[-1]
            lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(set(lines)):
            terminalreporter.write_line(f"{status}  {name}")
