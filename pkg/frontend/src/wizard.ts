// Record wizard: elicitation → feedback → incorporation table → summary.
// Step order encodes the documented authoring process even though the API
// accepts out-of-order edits. Client-side validation is a strict subset
// mirror of the server's rules (consent, non-empty fields, every row reports
// an effect, choose xor inaction); anything the client misses surfaces inline
// from the API error instead.

import { ApiClient, ApiError, UpdateEntryPayload } from './api'
import { esc, kindLabel, KINDS, STAGES, stageLabel } from './render'
import type { StakeholderDoc } from './types'

export type WizardStep = 'elicitation' | 'feedback' | 'incorporation' | 'summary'

export const WIZARD_STEPS: WizardStep[] = ['elicitation', 'feedback', 'incorporation', 'summary']

export interface UpdateDraft {
  which: string
  kinds: string[]
  stage: string
  why: string
  effect_note: string
}

export interface WizardState {
  logId: string
  step: WizardStep
  stakeholders: StakeholderDoc[]
  reason: string
  presentation: string
  feedback: string
  updates: UpdateDraft[]
  chosen: string[] // draft ids "U1".."Un" by position
  summary: string
  justification: string
  errors: Partial<Record<string, string>>
  submitting: boolean
  conflict: boolean
  result?: { recordId: string }
}

export function newWizard(logId: string): WizardState {
  return {
    logId,
    step: 'elicitation',
    stakeholders: [{ label: '', category: 'end_user', identifiable: false, consent_recorded: false }],
    reason: '',
    presentation: '',
    feedback: '',
    updates: [emptyUpdate()],
    chosen: [],
    summary: '',
    justification: '',
    errors: {},
    submitting: false,
    conflict: false,
  }
}

export function emptyUpdate(): UpdateDraft {
  return { which: '', kinds: [], stage: STAGES[1], why: '', effect_note: '' }
}

export function draftUpdateId(index: number): string {
  return `U${index + 1}`
}

// --- validation (mirror of the server rules, never looser) -------------------

export function validateStep(state: WizardState, step: WizardStep): Partial<Record<string, string>> {
  const errors: Partial<Record<string, string>> = {}
  if (step === 'elicitation') {
    if (state.stakeholders.length === 0) {
      errors['stakeholders'] = 'name at least one stakeholder'
    }
    state.stakeholders.forEach((s, index) => {
      if (!s.label.trim()) errors[`stakeholders.${index}.label`] = 'label is required'
      if (s.identifiable && !s.consent_recorded) {
        errors[`stakeholders.${index}.consent`] =
          'identifiable stakeholders need recorded consent'
      }
    })
    if (!state.reason.trim()) errors['reason'] = 'say why these stakeholders were consulted'
    if (!state.presentation.trim()) errors['presentation'] = 'say how information was presented'
  }
  if (step === 'feedback') {
    if (!state.feedback.trim()) errors['feedback'] = 'feedback text is required'
  }
  if (step === 'incorporation') {
    if (state.updates.length === 0) errors['updates'] = 'add at least one considered update'
    state.updates.forEach((u, index) => {
      if (!u.which.trim()) errors[`updates.${index}.which`] = 'describe the update'
      if (u.kinds.length === 0) errors[`updates.${index}.kinds`] = 'pick at least one kind'
      if (!u.stage) errors[`updates.${index}.stage`] = 'pick the pipeline stage'
      if (!u.why.trim()) errors[`updates.${index}.why`] = 'give the rationale'
      if (!u.effect_note.trim()) errors[`updates.${index}.effect`] = 'every row reports an effect'
    })
  }
  if (step === 'summary') {
    if (state.chosen.length > 0) {
      if (!state.summary.trim()) errors['summary'] = 'summarize the chosen updates'
    } else {
      // choose xor inaction: zero chosen updates require a justification
      if (!state.justification.trim()) {
        errors['justification'] = 'choosing no updates requires a justification for inaction'
      }
    }
  }
  return errors
}

export function canAdvance(state: WizardState): boolean {
  return Object.keys(validateStep(state, state.step)).length === 0
}

export function canSubmit(state: WizardState): boolean {
  return WIZARD_STEPS.every((step) => Object.keys(validateStep(state, step)).length === 0)
}

export function nextStep(state: WizardState): WizardState {
  const errors = validateStep(state, state.step)
  if (Object.keys(errors).length > 0) return { ...state, errors }
  const index = WIZARD_STEPS.indexOf(state.step)
  if (index === WIZARD_STEPS.length - 1) return state
  return { ...state, errors: {}, step: WIZARD_STEPS[index + 1] }
}

export function previousStep(state: WizardState): WizardState {
  const index = WIZARD_STEPS.indexOf(state.step)
  if (index === 0) return state
  return { ...state, errors: {}, step: WIZARD_STEPS[index - 1] }
}

// --- submission ---------------------------------------------------------------

const CODE_TO_FIELD: Record<string, string> = {
  ConsentMissing: 'stakeholders.0.consent',
  EmptySummary: 'summary',
  EmptyJustification: 'justification',
  InvalidState: 'summary',
  RecordCompleted: 'summary',
  LogFinalized: 'summary',
}

export function fieldForApiError(error: ApiError): string {
  if (error.body.code === 'InvalidEntry' && error.body.path) {
    return `updates.0.${error.body.path}`
  }
  if (error.body.findings && error.body.findings.length > 0) {
    return error.body.findings[0].path
  }
  return CODE_TO_FIELD[error.body.code] ?? 'summary'
}

/**
 * Drive the record endpoints in template order. Returns the updated state;
 * on an API rejection the error lands inline at the offending field.
 */
export async function submitWizard(api: ApiClient, state: WizardState): Promise<WizardState> {
  let working: WizardState = { ...state, submitting: true, errors: {}, conflict: false }
  try {
    const opened = await api.openRecord(state.logId, {
      stakeholders: state.stakeholders,
      reason: state.reason,
      presentation: state.presentation,
    })
    const recordId = opened.record_id
    await api.setFeedback(state.logId, recordId, state.feedback)
    for (const update of state.updates) {
      const payload: UpdateEntryPayload = {
        which: update.which,
        kinds: update.kinds,
        stage: update.stage,
        why: update.why,
        effect_note: update.effect_note,
      }
      await api.addUpdate(state.logId, recordId, payload)
    }
    if (state.chosen.length > 0) {
      await api.chooseUpdates(state.logId, recordId, state.chosen, state.summary)
    } else {
      await api.recordInaction(state.logId, recordId, state.justification)
    }
    return { ...working, submitting: false, result: { recordId } }
  } catch (err) {
    if (err instanceof ApiError) {
      const errors: Partial<Record<string, string>> = {}
      errors[fieldForApiError(err)] = `${err.body.code}: ${err.body.message}`
      if (err.body.findings) {
        for (const finding of err.body.findings) {
          errors[finding.path] = `${finding.rule_id}: ${finding.message}`
        }
      }
      return { ...working, submitting: false, conflict: err.isConflict, errors }
    }
    throw err
  }
}

// --- rendering ------------------------------------------------------------------

function inlineError(state: WizardState, field: string): string {
  const message = state.errors[field]
  return message ? `<p class="field-error" data-error-for="${esc(field)}">${esc(message)}</p>` : ''
}

function renderElicitationStep(state: WizardState): string {
  const rows = state.stakeholders
    .map(
      (s, index) => `
      <fieldset class="stakeholder" data-index="${index}">
        <input name="stakeholders.${index}.label" placeholder="Name or pseudonym" value="${esc(s.label)}">
        <select name="stakeholders.${index}.category">
          ${['end_user', 'regulator', 'domain_expert', 'internal']
            .map(
              (c) =>
                `<option value="${c}"${c === s.category ? ' selected' : ''}>${c.replace('_', ' ')}</option>`,
            )
            .join('')}
        </select>
        <label><input type="checkbox" name="stakeholders.${index}.identifiable"${
          s.identifiable ? ' checked' : ''
        }> identifiable</label>
        <label><input type="checkbox" name="stakeholders.${index}.consent_recorded"${
          s.consent_recorded ? ' checked' : ''
        }> consent recorded</label>
        ${inlineError(state, `stakeholders.${index}.label`)}
        ${inlineError(state, `stakeholders.${index}.consent`)}
      </fieldset>`,
    )
    .join('')
  return `
    <h3>Elicitation</h3>
    ${rows}
    <button data-action="add-stakeholder">Add stakeholder</button>
    <label>Who and why?
      <textarea name="reason" placeholder="Why these stakeholders? What prompted the request?">${esc(state.reason)}</textarea>
    </label>
    ${inlineError(state, 'reason')}
    <label>How is information presented?
      <textarea name="presentation">${esc(state.presentation)}</textarea>
    </label>
    ${inlineError(state, 'presentation')}`
}

function renderFeedbackStep(state: WizardState): string {
  return `
    <h3>Feedback</h3>
    <label>What insights did the stakeholder(s) provide?
      <textarea name="feedback">${esc(state.feedback)}</textarea>
    </label>
    ${inlineError(state, 'feedback')}`
}

function renderIncorporationStep(state: WizardState): string {
  const rows = state.updates
    .map(
      (u, index) => `
      <fieldset class="update-row" data-index="${index}">
        <legend>${draftUpdateId(index)}</legend>
        <label>Which? <input name="updates.${index}.which" value="${esc(u.which)}"></label>
        ${inlineError(state, `updates.${index}.which`)}
        <label>Where? <select multiple name="updates.${index}.kinds">
          ${KINDS.map(
            (k) =>
              `<option value="${k}"${u.kinds.includes(k) ? ' selected' : ''}>${kindLabel(k)}</option>`,
          ).join('')}
        </select></label>
        ${inlineError(state, `updates.${index}.kinds`)}
        <label>When? <select name="updates.${index}.stage">
          ${STAGES.map(
            (s) =>
              `<option value="${s}"${s === u.stage ? ' selected' : ''}>${stageLabel(s)}</option>`,
          ).join('')}
        </select></label>
        <label>Why? <input name="updates.${index}.why" value="${esc(u.why)}"></label>
        ${inlineError(state, `updates.${index}.why`)}
        <label>Effect? <input name="updates.${index}.effect_note" value="${esc(u.effect_note)}"></label>
        ${inlineError(state, `updates.${index}.effect`)}
      </fieldset>`,
    )
    .join('')
  return `
    <h3>Incorporation</h3>
    ${inlineError(state, 'updates')}
    ${rows}
    <button data-action="add-update">Add considered update</button>`
}

function renderSummaryStep(state: WizardState): string {
  const choices = state.updates
    .map((u, index) => {
      const id = draftUpdateId(index)
      return `<label><input type="checkbox" name="chosen.${id}"${
        state.chosen.includes(id) ? ' checked' : ''
      }> ${id}: ${esc(u.which)}</label>`
    })
    .join('')
  const inactionBlock =
    state.chosen.length === 0
      ? `
    <label class="justification">Justification for inaction (required when nothing is chosen)
      <textarea name="justification">${esc(state.justification)}</textarea>
    </label>
    ${inlineError(state, 'justification')}`
      : `
    <label>Summary of the chosen updates and their effects
      <textarea name="summary">${esc(state.summary)}</textarea>
    </label>
    ${inlineError(state, 'summary')}`
  return `
    <h3>Summary</h3>
    <div class="choices">${choices}</div>
    ${inactionBlock}`
}

export function renderWizard(state: WizardState): string {
  const stepIndex = WIZARD_STEPS.indexOf(state.step)
  const crumbs = WIZARD_STEPS.map(
    (step, index) =>
      `<span class="crumb${index === stepIndex ? ' crumb-active' : ''}">${index + 1}. ${step}</span>`,
  ).join(' → ')
  let body = ''
  if (state.step === 'elicitation') body = renderElicitationStep(state)
  if (state.step === 'feedback') body = renderFeedbackStep(state)
  if (state.step === 'incorporation') body = renderIncorporationStep(state)
  if (state.step === 'summary') body = renderSummaryStep(state)
  const submitDisabled = state.step !== 'summary' || !canSubmit(state) || state.submitting
  const conflictBanner = state.conflict
    ? '<div class="banner banner-error" data-testid="conflict">Someone edited this log meanwhile. Reload and merge your changes.</div>'
    : ''
  return `
  <form class="wizard" data-log="${esc(state.logId)}" data-step="${state.step}">
    ${conflictBanner}
    <nav class="crumbs">${crumbs}</nav>
    ${body}
    <footer>
      <button data-action="prev"${stepIndex === 0 ? ' disabled' : ''}>Back</button>
      <button data-action="next"${stepIndex === WIZARD_STEPS.length - 1 ? ' disabled' : ''}>Next</button>
      <button data-action="submit" type="submit"${submitDisabled ? ' disabled' : ''}>Complete record</button>
    </footer>
  </form>`
}
