"""Bundled example logs used by tests, the demo registry, and documentation.

Four logs covering the main usage shapes: a metric-less starting point
(asthma agent), a fully finalized log with quantitative update effects
(image recognition), an ecosystem/UX update (content recommendation), and a
pre-training data-collection change (sexual health triage). All are built
through the operations API and then given fixed timestamps so repeated builds
serialize to identical bytes.
"""

from __future__ import annotations

from datetime import datetime, timezone

from .model import (
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


def _freeze(log: FeedbackLog, day: int) -> FeedbackLog:
    stamp = datetime(2023, 7, day, 9, 0, 0, tzinfo=timezone.utc)
    log.created_at = stamp
    log.updated_at = stamp
    return log


def asthma_log() -> FeedbackLog:
    """Conversational agent for asthma patients; two clinician records."""
    log = new_log(
        title="Asthma Conversational Agent",
        pipeline_name="Conversational agent for asthma patients",
        owner=PersonRef("asthma-owner", "Asthma Agent Lead"),
        starting_point=PipelineSnapshot(
            data_description=(
                "Data of asthma patients, with target as indicator for onset of "
                "asthma arrests."
            ),
            model_description=(
                "Conversational Agent that combines pre-scripted options and "
                "model score outputs."
            ),
            metrics_note=(
                "No statistical metric yet, objective is to converse with a "
                "patient and aid them in managing their conditions."
            ),
        ),
    )
    r1 = log.open_record(
        Elicitation(
            stakeholders=[StakeholderRef("Clinician", "domain_expert")],
            reason=(
                "Need clinician insight to understand what details an effective "
                "conversational agent should capture."
            ),
            presentation=(
                "Intent of project explained. Clinician was specifically asked to "
                "capture all relevant details of an asthma consultation through a "
                "mock patient-physician interview."
            ),
        )
    )
    log.set_feedback(
        r1,
        "Received list of questions that clinicians/patients typically ask "
        "during clinic sessions.",
    )
    log.add_candidate_update(
        r1,
        UpdateEntry(
            which="Add details to metrics",
            kinds={"metrics"},
            stage="model_deployment_post_training",
            why="Model remains flexible",
            effect_note="Model able to provide required details",
        ),
    )
    log.add_candidate_update(
        r1,
        UpdateEntry(
            which="Make dataset of details and fine tune model",
            kinds={"dataset"},
            stage="model_development_training",
            why="Model updated to new information",
            effect_note="Unstable training results",
        ),
    )
    log.choose_updates(
        r1,
        {"U1"},
        "Ecosystem update as part of metrics: added requirements to model to "
        "be able to answer certain questions.",
    )
    r2 = log.open_record(
        Elicitation(
            stakeholders=[StakeholderRef("Clinician", "domain_expert")],
            reason=(
                "Understanding that the optimal conversational chatbot does not "
                "face the same constraints as a clinician and so can ask more "
                "detailed questions or spend more time on explanations."
            ),
            presentation=(
                "Clinician asked to explain all information they would like to "
                "ask/provide, time-permitting."
            ),
        )
    )
    log.set_feedback(
        r2,
        "Clinician provided a list of questions to obtain basic patient "
        "information, which can make a significant difference to health "
        "outcomes, and does not get communicated during clinician visits "
        "because of time limitations.",
    )
    log.add_candidate_update(
        r2,
        UpdateEntry(
            which="Include basic details in dataset",
            kinds={"dataset"},
            stage="model_development_training",
            why="Model updated to new information without manual engineering",
            effect_note="Model reliably provides complete answers",
        ),
    )
    log.choose_updates(
        r2,
        {"U1"},
        "Created a base of fundamental information that can be queried and "
        "explained to make it easier for patients to learn the basics of "
        "their condition.",
    )
    return _freeze(log, 10)


def image_recognition_log() -> FeedbackLog:
    """Finalized log for an automotive image-recognition model.

    Tracks a robustness metric introduced by R1/U2 with target > 50, a 34%
    baseline before R2, per-update effects of 39/47/48, and a 55% final value.
    """
    log = new_log(
        title="Image Recognition",
        pipeline_name="Image recognition for automotive vehicles",
        owner=PersonRef("image-owner", "Image Recognition Lead"),
        starting_point=PipelineSnapshot(
            data_description=(
                "Imagenet1K for training and validation datasets, consisting of "
                "1000 image classes."
            ),
            model_description="Convolutional Neural Network (ResNet50).",
            metrics_note="None defined yet.",
        ),
    )
    r1 = log.open_record(
        Elicitation(
            stakeholders=[StakeholderRef("External assessor", "regulator")],
            reason=(
                "Hypothetical external assessor vested in the model. Require "
                "regulatory approval to use image recognition model in practice."
            ),
            presentation=(
                "Asked for minimum benchmark performance, similar to the 80 "
                "percent disparate impact rule."
            ),
        )
    )
    log.set_feedback(
        r1,
        "Received a dataset containing adversarial examples of automotive "
        "vehicles, along with a minimum accuracy required for this dataset to "
        "test the model's robustness.",
    )
    log.add_candidate_update(
        r1,
        UpdateEntry(
            which="Imagenet-A with relevant automotive classes",
            kinds={"dataset"},
            stage="data_collection_pre_training",
            why="Tests model robustness",
            effect_note="Testing dataset for model",
        ),
    )
    log.add_candidate_update(
        r1,
        UpdateEntry(
            which="Minimum accuracy >50%",
            kinds={"metrics"},
            stage="model_development_training",
            why="Required for regulatory approval",
            effect_note="Benchmark when testing model",
        ),
    )
    log.add_metric(
        MetricSpec(
            name="robustness",
            description=(
                "Accuracy on the Imagenet-A testing dataset restricted to "
                "automotive classes."
            ),
            unit="%",
            target=Target(">", 50),
            introduced_by=("R1", "U2"),
        )
    )
    log.choose_updates(
        r1,
        {"U1", "U2"},
        "Dataset update: provided new dataset to test the model's robustness "
        "when recognising automotive vehicles. Ecosystem update as part of "
        "metrics: added requirement that model should achieve >50% accuracy "
        "(robustness) on test dataset.",
    )
    r2 = log.open_record(
        Elicitation(
            stakeholders=[StakeholderRef("Compliance team", "internal")],
            reason=(
                "Need to ensure model meets external requirements set by "
                "industry regulators, as well as internal company policies."
            ),
            presentation=(
                "Presented with current performance on testing dataset "
                "recommended by regulator, along with example predictions."
            ),
        )
    )
    log.set_feedback(
        r2,
        "Current robustness (34%) isn't sufficient to meet requirements. In "
        "addition, the model is overconfident in its predictions which may "
        "cause serious accidents that are unacceptable under company policy.",
    )
    log.add_reading(
        MetricReading(
            "robustness",
            34,
            ReadingContext.baseline(r2),
            note="Robustness before the second round of updates.",
        )
    )
    log.add_candidate_update(
        r2,
        UpdateEntry(
            which="ResNet-101",
            kinds={"parameter_space"},
            stage="data_collection_pre_training",
            why="Identify complex features",
            effect_readings=[MetricReading("robustness", 39)],
            effect_note="Robustness 39%",
        ),
    )
    log.add_candidate_update(
        r2,
        UpdateEntry(
            which="MEAL V2",
            kinds={"loss_function"},
            stage="model_development_training",
            why="Soften labels",
            effect_readings=[MetricReading("robustness", 47)],
            effect_note="Robustness: 47%",
        ),
    )
    log.add_candidate_update(
        r2,
        UpdateEntry(
            which="CutMix",
            kinds={"dataset"},
            stage="data_collection_pre_training",
            why="Background invariance",
            effect_readings=[MetricReading("robustness", 48)],
            effect_note="Robustness: 48%",
        ),
    )
    log.choose_updates(
        r2,
        {"U1", "U3"},
        "Used ResNet-101 model with CutMix for data augmentation, since when "
        "both updates are used the robustness is 55%, which exceeds the "
        "minimum requirement of 50%.",
    )
    log.finalize(
        PipelineSnapshot(
            data_description=(
                "Imagenet1K augmented with CutMix for training, Imagenet-A with "
                "relevant automotive classes for testing."
            ),
            model_description="Convolutional Neural Network (ResNet-101).",
            readings=[
                MetricReading(
                    "robustness",
                    55,
                    ReadingContext.final(),
                    note="55% robustness on Imagenet-A testing dataset",
                )
            ],
        )
    )
    return _freeze(log, 11)


def recommender_log() -> FeedbackLog:
    """Streaming-platform recommender; a UX-plus-dataset update from engineers."""
    log = new_log(
        title="TV Content Recommendation",
        pipeline_name="Personalised TV content recommendations",
        owner=PersonRef("reco-owner", "Recommendations Lead"),
        starting_point=PipelineSnapshot(
            data_description=(
                "User watch history of TV content (films, TV series, sports "
                "events), including time of day something was watched and the "
                "percentage of the content that was watched. User details, such "
                "as time being subscribed to the service."
            ),
            model_description=(
                "Model uses a Convolutional Neural Network architecture to "
                "provide personalised recommendations for what to watch next."
            ),
            metrics=[
                MetricSpec(
                    name="click_through_rate",
                    description="Click-through rates of top-N provided recommendations.",
                    unit="%",
                ),
                MetricSpec(
                    name="watch_percentage",
                    description="Watch percentage of the recommended content.",
                    unit="%",
                ),
            ],
        ),
    )
    r1 = log.open_record(
        Elicitation(
            stakeholders=[
                StakeholderRef("Machine Learning Engineers and Data Scientists", "internal")
            ],
            reason=(
                "Poor performance on metrics, suggesting users were not watching "
                "the content that was recommended."
            ),
            presentation=(
                "Model metrics in the form of click through rates and watch "
                "percentages, and a test interface to view what content gets "
                "recommended based on different watch histories."
            ),
        )
    )
    log.set_feedback(
        r1,
        "The evaluation metrics used were not adequate. If someone had watched "
        "what was recommended to them, but only watched the first half, this "
        "would be deemed a successful recommendation. Yet there is no "
        "indication that the user appreciated the recommendation or enjoyed "
        "the content.",
    )
    log.add_candidate_update(
        r1,
        UpdateEntry(
            which="'Like' buttons were added to content recommendations",
            kinds={"interface_ux", "dataset"},
            stage="model_deployment_post_training",
            why="To provide user supervision for the recommendation algorithm",
            effect_note="Increased user click through rate and watch time",
        ),
    )
    log.choose_updates(
        r1,
        {"U1"},
        "In order to better discern whether a particular recommendation was "
        "effective, the users of the TV service were given the ability to "
        "'Like' or 'Dislike' particular content. This feedback was "
        "incorporated as a feature to the machine learning model, which "
        "tailored the machine learning model according to what the user liked "
        "and disliked. Users started to watch the recommended content more "
        "than they did previously.",
    )
    return _freeze(log, 12)


def sexual_health_log() -> FeedbackLog:
    """Chlamydia-treatment triage; accessibility change during data collection."""
    log = new_log(
        title="Sexual Health",
        pipeline_name="Chlamydia treatment eligibility triage",
        owner=PersonRef("sh-owner", "Sexual Health Triage Lead"),
        starting_point=PipelineSnapshot(
            data_description=(
                "NHS standards provide mandatory questions which determine "
                "whether treatment can be given or not. For example, certain "
                "treatments are forbidden when patients are pregnant, or suffer "
                "from certain allergies. Qualitative data: user requirements "
                "from generative user research, including those who are gender "
                "diverse or may have a learning disability. Quantitative data: "
                "number of misunderstandings from each question/answer option "
                "during user testing."
            ),
            model_description=(
                "Model objective is to decide which chlamydia positive patients "
                "are eligible to get chlamydia treatment. Through a range of "
                "online questions with multiple choice answer options "
                "(personalised risk assessment), it checks on medication use, "
                "allergies, and other variables that could impact the decision."
            ),
            metrics=[
                MetricSpec(
                    name="rct_safety_effectiveness",
                    description=(
                        "Randomized Control Trial conducted across the UK to "
                        "measure safety and effectiveness in comparison to "
                        "regular offline care."
                    ),
                ),
                MetricSpec(
                    name="prescription_accuracy",
                    description=(
                        "Number of true positives and negatives, false positives "
                        "and negatives of prescriptions that the model suggested, "
                        "compared to offline prescriptions by a clinician."
                    ),
                ),
                MetricSpec(
                    name="time_to_treatment",
                    description="Time between testing positive and receiving treatment.",
                    direction="lower_better",
                    unit="days",
                ),
                MetricSpec(
                    name="patients_treated",
                    description="Number of people receiving treatment.",
                ),
                MetricSpec(
                    name="clinician_time_per_patient",
                    description="Time clinicians spent on patient (offline and online support).",
                    direction="lower_better",
                    unit="minutes",
                ),
            ],
        ),
    )
    r1 = log.open_record(
        Elicitation(
            stakeholders=[
                StakeholderRef("Patients with chlamydia", "end_user"),
                StakeholderRef("Sexual health clinicians", "domain_expert"),
                StakeholderRef("Health psychologists", "domain_expert"),
            ],
            reason=(
                "Legal requirements, safety risks (e.g. prescribing this "
                "treatment to people who are allergic/pregnant can severely "
                "impact health)."
            ),
            presentation=(
                "Exploratory but also visually (at a later stage showing the "
                "questions and decision tree) to capture all relevant details "
                "and questions that needed to be included in the risk "
                "assessment/online consultation."
            ),
        )
    )
    log.set_feedback(
        r1,
        "For vulnerable demographic groups, unaccompanied online consultations "
        "can be dangerous because the patient might not interpret the question "
        "correctly and may not know the information requested.",
    )
    log.add_candidate_update(
        r1,
        UpdateEntry(
            which="'I don't know' option was added to applicable questions",
            kinds={"other:Forms and decision charts"},
            stage="data_collection_pre_training",
            why="To ensure individuals who are unsure do not select a misleading option",
            effect_note="To be measured, but expect fewer false negatives",
        ),
    )
    log.choose_updates(
        r1,
        {"U1"},
        "This prompted the inclusion of a 'don't know' answer option which "
        "would lead to a help screen. In some cases, users are asked to call "
        "the helpline and discuss with a sexual health expert, allowing the "
        "interview process to proceed in a way that is more reliable.",
    )
    return _freeze(log, 13)


def all_sample_logs() -> list[FeedbackLog]:
    return [
        asthma_log(),
        image_recognition_log(),
        recommender_log(),
        sexual_health_log(),
    ]
