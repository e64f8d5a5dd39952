// Log detail view: sections in template order (Starting Point, Record k with
// Elicitation / Feedback / Incorporation / Summary, Final Summary), a lint
// findings banner, and assignment badges. Chosen incorporation rows are
// visually distinguished from merely considered ones.

import type {
  AssignmentDoc,
  Finding,
  LogDoc,
  MetricSpecDoc,
  ReadingDoc,
  RecordDoc,
  SnapshotDoc,
} from '../types'
import { categoryDisplay, esc, formatValue, kindLabel, stageLabel } from '../render'

function unitFor(log: LogDoc, metricName: string): string {
  const specs = [...log.starting_point.metrics, ...log.metrics]
  return specs.find((s) => s.name === metricName)?.unit ?? ''
}

function renderReading(log: LogDoc, reading: ReadingDoc): string {
  const unit = unitFor(log, reading.metric_name)
  const sep = unit.startsWith('%') ? '' : unit ? ' ' : ''
  let text = `${reading.metric_name}: ${formatValue(reading.value)}${sep}${unit}`
  if (reading.note) text += ` (${reading.note})`
  return text
}

function renderSpec(spec: MetricSpecDoc): string {
  let text = `${spec.name} (${spec.direction}${spec.unit ? `, ${spec.unit}` : ''})`
  if (spec.description) text += `: ${spec.description}`
  if (spec.target) text += ` [target ${spec.target.comparator} ${formatValue(spec.target.value)}]`
  return text
}

function renderSnapshot(log: LogDoc, snapshot: SnapshotDoc, metricsHeading: string): string {
  const metricLines: string[] = []
  if (snapshot.metrics_note) metricLines.push(esc(snapshot.metrics_note))
  for (const spec of snapshot.metrics) metricLines.push(esc(renderSpec(spec)))
  for (const reading of snapshot.readings) metricLines.push(esc(renderReading(log, reading)))
  if (metricLines.length === 0) metricLines.push('(none)')
  return `
    <p><strong>Data:</strong> ${esc(snapshot.data_description)}</p>
    <p><strong>Model:</strong> ${esc(snapshot.model_description)}</p>
    <p><strong>${metricsHeading}:</strong></p>
    <ul>${metricLines.map((line) => `<li>${line}</li>`).join('')}</ul>`
}

function effectCell(log: LogDoc, update: RecordDoc['candidate_updates'][number]): string {
  const parts: string[] = []
  if (update.effect_note) parts.push(update.effect_note)
  for (const reading of update.effect_readings) parts.push(renderReading(log, reading))
  return parts.join('; ')
}

export function renderIncorporationTable(log: LogDoc, record: RecordDoc): string {
  const chosen = new Set(record.chosen_update_ids)
  const rows = record.candidate_updates
    .map((update) => {
      const cls = chosen.has(update.id) ? ' class="row-implemented"' : ' class="row-considered"'
      const badge = chosen.has(update.id)
        ? '<span class="badge badge-implemented">implemented</span>'
        : update.status === 'rejected'
          ? '<span class="badge badge-rejected">rejected</span>'
          : '<span class="badge badge-considered">considered</span>'
      const cells = [
        `${esc(update.which)} ${badge}`,
        esc(update.kinds.map(kindLabel).sort().join(' and ')),
        esc(stageLabel(update.stage)),
        esc(update.why),
        esc(effectCell(log, update)),
      ]
      return `<tr data-update="${esc(update.id)}"${cls}>${cells
        .map((cell) => `<td>${cell}</td>`)
        .join('')}</tr>`
    })
    .join('')
  return `
    <table class="incorporation">
      <thead><tr><th>Which?</th><th>Where?</th><th>When?</th><th>Why?</th><th>Effect?</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`
}

export function renderFindingsBanner(findings: Finding[]): string {
  if (findings.length === 0) return ''
  const errors = findings.filter((f) => f.severity === 'error')
  const cls = errors.length > 0 ? 'banner banner-error' : 'banner banner-info'
  const items = findings
    .map(
      (f) =>
        `<li><code>${esc(f.rule_id)}</code> <em>${esc(f.severity)}</em> ${esc(f.path)}: ${esc(
          f.message,
        )}</li>`,
    )
    .join('')
  return `<div class="${cls}" data-testid="lint-banner"><strong>${findings.length} lint finding(s)</strong><ul>${items}</ul></div>`
}

export function renderAssignmentBadges(assignments: AssignmentDoc[]): string {
  if (assignments.length === 0) return ''
  const chips = assignments
    .map(
      (a) =>
        `<span class="badge badge-${a.state}" title="${esc(a.section_path)}">${esc(
          a.section_path,
        )} → ${esc(a.assignee.id)} (${a.state})</span>`,
    )
    .join(' ')
  return `<div class="assignments" data-testid="assignments">${chips}</div>`
}

function renderRecord(log: LogDoc, record: RecordDoc, index: number): string {
  const who = record.elicitation.stakeholders
    .map((s) => `${esc(s.label)} (${esc(categoryDisplay(s.category))})`)
    .join(', ')
  const chosen = [...record.chosen_update_ids].sort(
    (a, b) => Number(a.slice(1)) - Number(b.slice(1)),
  )
  return `
  <section class="record" id="${esc(record.id)}" data-record="${esc(record.id)}">
    <h2>Record ${index + 1}${record.completed ? '' : ' <span class="badge badge-open">open</span>'}</h2>
    <h3>Elicitation</h3>
    <p><strong>Who and why?</strong> ${who}. ${esc(record.elicitation.reason)}</p>
    <p><strong>How?</strong> ${esc(record.elicitation.presentation)}</p>
    <h3>Feedback</h3>
    <p>${esc(record.feedback_text)}</p>
    <h3>Incorporation</h3>
    ${renderIncorporationTable(log, record)}
    <h3>Summary</h3>
    ${chosen.length > 0 ? `<p>Implemented: ${esc(chosen.join(', '))}.</p>` : ''}
    ${
      record.inaction_justification
        ? `<p>Justification for inaction: ${esc(record.inaction_justification)}</p>`
        : ''
    }
    <p>${esc(record.summary_text)}</p>
  </section>`
}

export interface LogDetailContext {
  findings?: Finding[]
  assignments?: AssignmentDoc[]
  canEdit?: boolean
}

export function renderLogDetail(log: LogDoc, context: LogDetailContext = {}): string {
  const parts: string[] = []
  parts.push(`<article class="log" data-log="${esc(log.id)}">`)
  parts.push(
    `<header><h1>${esc(log.title)}</h1>
     <p class="meta">Pipeline: ${esc(log.pipeline_name)} · Owner: ${esc(
       log.owner.display_name || log.owner.id,
     )} · Status: <span class="status status-${log.status}">${log.status}</span> · rev ${log.revision}</p></header>`,
  )
  parts.push(renderFindingsBanner(context.findings ?? []))
  parts.push(renderAssignmentBadges(context.assignments ?? []))
  parts.push('<section id="starting-point"><h2>Starting Point</h2>')
  parts.push(renderSnapshot(log, log.starting_point, 'Metrics'))
  parts.push('</section>')
  log.records.forEach((record, index) => parts.push(renderRecord(log, record, index)))
  if (log.final_summary) {
    parts.push('<section id="final-summary"><h2>Final Summary</h2>')
    parts.push(renderSnapshot(log, log.final_summary, 'Metric performance'))
    parts.push('</section>')
  }
  if (context.canEdit && log.status !== 'finalized') {
    parts.push(
      `<p><a class="button" href="#/logs/${esc(log.id)}/new-record" data-testid="open-wizard">Add record</a></p>`,
    )
  }
  parts.push('</article>')
  return parts.join('\n')
}
