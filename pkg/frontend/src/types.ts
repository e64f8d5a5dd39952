// Wire types for the feedbacklog HTTP API (canonical document shapes).

export interface PersonDoc {
  id: string
  display_name: string
}

export interface StakeholderDoc {
  label: string
  category: string
  identifiable: boolean
  consent_recorded: boolean
}

export interface ElicitationDoc {
  stakeholders: StakeholderDoc[]
  reason: string
  presentation: string
}

export interface TargetDoc {
  comparator: string
  value: number
}

export interface MetricSpecDoc {
  name: string
  description: string
  direction: string
  unit: string
  target: TargetDoc | null
  introduced_by: 'starting_point' | { record_id: string; update_id: string }
}

export interface ReadingDoc {
  metric_name: string
  value: number
  context: string
  note: string
}

export interface SnapshotDoc {
  data_description: string
  model_description: string
  metrics: MetricSpecDoc[]
  readings: ReadingDoc[]
  metrics_note: string
}

export interface UpdateDoc {
  id: string
  which: string
  kinds: string[]
  stage: string
  why: string
  effect_readings: ReadingDoc[]
  effect_note: string
  status: 'considered' | 'implemented' | 'rejected'
}

export interface RecordDoc {
  id: string
  elicitation: ElicitationDoc
  feedback_text: string
  candidate_updates: UpdateDoc[]
  chosen_update_ids: string[]
  summary_text: string
  inaction_justification: string
  completed: boolean
}

export interface LogDoc {
  schema_version: number
  id: string
  title: string
  pipeline_name: string
  owner: PersonDoc
  status: 'draft' | 'active' | 'finalized'
  starting_point: SnapshotDoc
  records: RecordDoc[]
  final_summary: SnapshotDoc | null
  metrics: MetricSpecDoc[]
  readings: ReadingDoc[]
  revision: number
  created_at: string
  updated_at: string
}

export interface LogListEntry {
  id: string
  title: string
  status: string
  revision: number
  owner: PersonDoc
}

export interface Finding {
  rule_id: string
  severity: 'error' | 'warning' | 'info'
  path: string
  message: string
}

export interface ChecklistEvidence {
  file_path: string
  line_number: number
  done_flag: boolean
}

export interface ChecklistItem {
  record_id: string
  update_id: string
  which: string
  state: 'implemented_in_code' | 'pending' | 'not_applicable'
  evidence: ChecklistEvidence[]
}

export interface ChecklistFinding {
  kind: string
  severity: string
  message: string
  annotation: {
    file_path: string
    line_number: number
    log_id: string
    record_id: string
    update_id: string
  }
}

export interface ChecklistResponse {
  scanned: boolean
  items: ChecklistItem[]
  findings: ChecklistFinding[]
  warnings: string[]
}

export interface SearchHit {
  log_id: string
  record_id: string | null
  matched_field: string
  snippet: string
}

export interface LinkDoc {
  from_log_id: string
  to_log_id: string
  relation: string
  note: string
}

export interface AssignmentDoc {
  section_path: string
  assignee: PersonDoc
  state: 'open' | 'done'
}

export interface ApiErrorBody {
  code: string
  message: string
  path: string
  findings?: Finding[]
}
