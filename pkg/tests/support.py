"""Shared test helpers: a random valid-log generator and independent oracles.

The generator builds logs exclusively through the operations API, so every
generated log satisfies the model invariants by construction. The oracles
(search, scan) are deliberately separate implementations working on the
canonical document tree / raw files, so index- or rule-backed results can be
checked against plain brute force.
"""

from __future__ import annotations

import random
import re

from feedbacklog.model import (
    Elicitation,
    FeedbackLog,
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

WORDS = (
    "alpha beta gamma delta sensor triage ranking caption churn uplift "
    "robustness latency fairness recall coverage drift audit consent "
    "clinic resonance treatment outreach onboarding forecast"
).split()

KINDS = [
    "dataset",
    "loss_function",
    "parameter_space",
    "prompt",
    "documentation",
    "interface_ux",
    "accountability_structure",
    "deployment_details",
    "metrics",
    "other:governance board review",
]

STAGES = [
    "data_collection_pre_training",
    "model_development_training",
    "model_deployment_post_training",
]

CATEGORIES = ["end_user", "regulator", "domain_expert", "internal", "other:community panel"]

UNITS = ["%", "ms", "points", ""]


def _words(rng: random.Random, low: int, high: int) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(low, high)))


def _sentence(rng: random.Random) -> str:
    return _words(rng, 3, 9).capitalize() + "."


def _stakeholder(rng: random.Random) -> StakeholderRef:
    identifiable = rng.random() < 0.3
    return StakeholderRef(
        label=_words(rng, 1, 2).title(),
        category=rng.choice(CATEGORIES),
        identifiable=identifiable,
        consent_recorded=identifiable or rng.random() < 0.2,
    )


def _metric_spec(rng: random.Random, name: str, introduced_by) -> MetricSpec:
    higher = rng.random() < 0.7
    target = None
    if rng.random() < 0.5:
        comparator = rng.choice([">", ">="]) if higher else rng.choice(["<", "<="])
        target = Target(comparator, rng.randint(0, 100))
    return MetricSpec(
        name=name,
        description=_sentence(rng),
        direction="higher_better" if higher else "lower_better",
        unit=rng.choice(UNITS),
        target=target,
        introduced_by=introduced_by,
    )


def random_log(rng: random.Random) -> FeedbackLog:
    """A structurally valid log with 0-3 records, metrics, readings, links."""
    metric_names = iter(f"m{i}_{rng.choice(WORDS)}" for i in range(100))
    starting_metrics = [
        _metric_spec(rng, next(metric_names), "starting_point")
        for _ in range(rng.randint(0, 2))
    ]
    starting = PipelineSnapshot(
        data_description=_sentence(rng),
        model_description=_sentence(rng),
        metrics=starting_metrics,
        metrics_note=_sentence(rng) if not starting_metrics and rng.random() < 0.7 else "",
    )
    log = new_log(
        title=_words(rng, 2, 4).title() + f" {rng.randint(1, 9999)}",
        pipeline_name=_words(rng, 2, 3),
        owner=PersonRef(f"owner-{rng.randint(1, 99)}", _words(rng, 1, 2).title()),
        starting_point=starting,
    )
    for spec in starting.metrics:
        if rng.random() < 0.5:
            log.starting_point.readings.append(
                MetricReading(spec.name, rng.randint(0, 100), ReadingContext.starting_point(), note="")
            )

    n_records = rng.randint(0, 3)
    for r_index in range(1, n_records + 1):
        rid = log.open_record(
            Elicitation(
                stakeholders=[_stakeholder(rng) for _ in range(rng.randint(1, 2))],
                reason=_sentence(rng),
                presentation=_sentence(rng),
            )
        )
        log.set_feedback(rid, _sentence(rng))

        def usable_metrics(next_uid: int) -> list[MetricSpec]:
            limit = (r_index, next_uid)
            return [s for s in log.metric_specs() if s.introduction_ordinal() <= limit]

        n_updates = rng.randint(1, 3)
        for u_index in range(1, n_updates + 1):
            readings = []
            pool = usable_metrics(u_index)
            if pool and rng.random() < 0.5:
                spec = rng.choice(pool)
                readings.append(MetricReading(spec.name, rng.randint(0, 100)))
            entry = UpdateEntry(
                which=_sentence(rng),
                kinds=set(rng.sample(KINDS, rng.randint(1, 3))),
                stage=rng.choice(STAGES),
                why=_sentence(rng),
                effect_readings=readings,
                effect_note="" if readings and rng.random() < 0.5 else _sentence(rng),
            )
            uid = log.add_candidate_update(rid, entry)
            if rng.random() < 0.25:
                log.add_metric(_metric_spec(rng, next(metric_names), (rid, uid)))

        baseline_pool = [
            s for s in log.metric_specs() if s.introduction_ordinal() <= (r_index, 0)
        ]
        if baseline_pool and rng.random() < 0.4:
            log.add_reading(
                MetricReading(
                    rng.choice(baseline_pool).name,
                    rng.randint(0, 100),
                    ReadingContext.baseline(rid),
                    note=_sentence(rng) if rng.random() < 0.3 else "",
                )
            )

        complete = rng.random() < 0.85 or r_index < n_records
        if complete:
            if rng.random() < 0.15:
                log.record_inaction(rid, _sentence(rng))
            else:
                uids = [u.id for u in log.record(rid).candidate_updates]
                chosen = set(rng.sample(uids, rng.randint(1, len(uids))))
                unchosen = [u for u in uids if u not in chosen]
                rejected = set(
                    u for u in unchosen if rng.random() < 0.4
                )
                log.choose_updates(
                    rid,
                    chosen,
                    _sentence(rng),
                    rejected_ids=rejected,
                )

    if log.records and all(r.completed for r in log.records) and rng.random() < 0.4:
        final_readings = [
            MetricReading(
                spec.name, rng.randint(0, 100), ReadingContext.final(),
                note=_sentence(rng) if rng.random() < 0.3 else "",
            )
            for spec in log.metric_specs()
            if spec.target is not None or rng.random() < 0.4
        ]
        log.finalize(
            PipelineSnapshot(
                data_description=_sentence(rng),
                model_description=_sentence(rng),
                readings=final_readings,
            )
        )
    return log


# --- brute-force search oracle --------------------------------------------------
#
# Works on the canonical document tree, so it shares no code with the registry
# implementation beyond the tokenizer grammar and the published semantics.

_TOKEN = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)?")

_STAGE_ALIAS = {
    "pre_training": "data_collection_pre_training",
    "pre-training": "data_collection_pre_training",
    "data_collection_pre_training": "data_collection_pre_training",
    "training": "model_development_training",
    "model_development_training": "model_development_training",
    "post_training": "model_deployment_post_training",
    "post-training": "model_deployment_post_training",
    "model_deployment_post_training": "model_deployment_post_training",
}


def _tokens(text: str) -> set[str]:
    return set(_TOKEN.findall(text.lower()))


def _doc_text_fields(doc: dict):
    yield ("title", None, doc["title"])
    yield ("pipeline_name", None, doc["pipeline_name"])
    yield ("owner.display_name", None, doc["owner"]["display_name"])
    sp = doc["starting_point"]
    yield ("starting_point.data_description", None, sp["data_description"])
    yield ("starting_point.model_description", None, sp["model_description"])
    if sp["metrics_note"]:
        yield ("starting_point.metrics_note", None, sp["metrics_note"])
    for m, spec in enumerate(sp["metrics"]):
        yield (f"starting_point.metrics[{m}]", None, f"{spec['name']} {spec['description']}")
    for m, spec in enumerate(doc["metrics"]):
        yield (f"metrics[{m}]", None, f"{spec['name']} {spec['description']}")
    for i, rec in enumerate(doc["records"]):
        base = f"records[{i}]"
        rid = rec["id"]
        for k, s in enumerate(rec["elicitation"]["stakeholders"]):
            yield (f"{base}.elicitation.stakeholders[{k}]", rid, s["label"])
        yield (f"{base}.elicitation.reason", rid, rec["elicitation"]["reason"])
        yield (f"{base}.elicitation.presentation", rid, rec["elicitation"]["presentation"])
        yield (f"{base}.feedback_text", rid, rec["feedback_text"])
        for j, entry in enumerate(rec["candidate_updates"]):
            ubase = f"{base}.candidate_updates[{j}]"
            yield (f"{ubase}.which", rid, entry["which"])
            yield (f"{ubase}.why", rid, entry["why"])
            if entry["effect_note"]:
                yield (f"{ubase}.effect_note", rid, entry["effect_note"])
        yield (f"{base}.summary_text", rid, rec["summary_text"])
        if rec["inaction_justification"]:
            yield (f"{base}.inaction_justification", rid, rec["inaction_justification"])
    if doc["final_summary"] is not None:
        yield ("final_summary.data_description", None, doc["final_summary"]["data_description"])
        yield ("final_summary.model_description", None, doc["final_summary"]["model_description"])


def brute_force_search(docs: list[dict], terms: list[str], filters: list[tuple[str, str]]):
    """Reference results: list of (log_id, record_id, matched_field, snippet)."""
    hits = []
    for doc in docs:
        hits.extend(_brute_force_one(doc, [t.lower() for t in terms], filters))
    hits.sort(key=lambda h: (h[0], int(h[1][1:]) if h[1] else -1, h[2]))
    return hits


def _brute_force_one(doc, terms, filters):
    log_filters = [(k, v) for k, v in filters if k in ("status", "owner", "metric")]
    record_filters = [(k, v) for k, v in filters if k in ("stakeholder", "category")]
    update_filters = [(k, v) for k, v in filters if k in ("kind", "stage")]

    all_specs = doc["starting_point"]["metrics"] + doc["metrics"]
    for key, value in log_filters:
        if key == "status" and doc["status"] != value:
            return []
        if key == "owner" and value != doc["owner"]["id"].lower() and value not in _tokens(
            doc["owner"]["display_name"]
        ):
            return []
        if key == "metric" and all(s["name"].lower() != value for s in all_specs):
            return []

    def rec_ok(rec):
        for key, value in record_filters:
            if key == "stakeholder" and not any(
                value in _tokens(s["label"]) or s["label"].lower() == value
                for s in rec["elicitation"]["stakeholders"]
            ):
                return False
            if key == "category" and not any(
                s["category"].lower() == value
                or (s["category"].startswith("other:") and value == "other")
                for s in rec["elicitation"]["stakeholders"]
            ):
                return False
        return True

    def upd_ok(entry):
        for key, value in update_filters:
            if key == "kind":
                kinds = {k.lower() for k in entry["kinds"]}
                if value not in kinds and not (
                    value == "other" and any(k.startswith("other:") for k in entry["kinds"])
                ):
                    return False
            if key == "stage" and _STAGE_ALIAS.get(value) != entry["stage"]:
                return False
        return True

    anchors = []
    if update_filters:
        for i, rec in enumerate(doc["records"]):
            if not rec_ok(rec):
                continue
            for j, entry in enumerate(rec["candidate_updates"]):
                if upd_ok(entry):
                    anchors.append(
                        (doc["id"], rec["id"], f"records[{i}].candidate_updates[{j}]", entry["which"])
                    )
        if not anchors:
            return []
    elif record_filters:
        for i, rec in enumerate(doc["records"]):
            if rec_ok(rec):
                anchors.append(
                    (
                        doc["id"],
                        rec["id"],
                        f"records[{i}].elicitation",
                        ", ".join(s["label"] for s in rec["elicitation"]["stakeholders"]),
                    )
                )
        if not anchors:
            return []

    if not terms:
        if anchors:
            return anchors
        if filters:
            return [(doc["id"], None, "title", doc["title"])]
        return []

    term_hits = []
    for path, rid, text in _doc_text_fields(doc):
        toks = _tokens(text)
        if all(t in toks for t in terms):
            term_hits.append((doc["id"], rid, path, text))
    if not term_hits:
        return []
    if record_filters or update_filters:
        anchor_records = {a[1] for a in anchors}
        term_hits = [h for h in term_hits if h[1] in anchor_records]
    return term_hits


# --- brute-force annotation oracle ----------------------------------------------

_ORACLE_LINE = re.compile(
    "FBLOG: "  # keyword and single space
    "([a-z0-9](?:[a-z0-9-]*[a-z0-9])?)"  # slug
    "#(R[0-9]+)/(U[0-9]+)"
    "( done)?"
    "(?![A-Za-z0-9])"
)


def brute_force_scan(root):
    """Reference annotation list: (rel_path, lineno, log, rid, uid, done)."""
    import os

    found = []
    for dirpath, _dirnames, filenames in os.walk(root):
        for name in filenames:
            full = os.path.join(dirpath, name)
            rel = os.path.relpath(full, root).replace(os.sep, "/")
            with open(full, "rb") as handle:
                raw = handle.read()
            if b"\x00" in raw[:8192]:
                continue
            for lineno, line in enumerate(raw.decode("utf-8", "replace").splitlines(), 1):
                match = _ORACLE_LINE.search(line)
                if match:
                    found.append(
                        (rel, lineno, match.group(1), match.group(2), match.group(3), match.group(4) is not None)
                    )
    found.sort(key=lambda t: (t[0], t[1]))
    return found
