import { beforeEach, describe, expect, it } from 'vitest'

import { ApiClient } from '../src/api'
import { renderLogDetail } from '../src/views/logDetail'
import {
  canAdvance,
  canSubmit,
  newWizard,
  nextStep,
  renderWizard,
  submitWizard,
  validateStep,
  WizardState,
} from '../src/wizard'
import type { LogDoc } from '../src/types'
import { FakeService } from './fakeService'

import asthmaFixture from './fixtures/asthma-conversational-agent.json'

function filledWizard(logId = 'asthma-conversational-agent'): WizardState {
  const state = newWizard(logId)
  state.stakeholders = [
    { label: 'Care Team', category: 'internal', identifiable: false, consent_recorded: false },
  ]
  state.reason = 'rollout review'
  state.presentation = 'shared the latest transcript samples'
  state.feedback = 'agent answers drift off-topic for medication questions'
  state.updates = [
    {
      which: 'retrain intent classifier',
      kinds: ['dataset'],
      stage: 'model_development_training',
      why: 'cover medication intents',
      effect_note: 'to be measured',
    },
    {
      which: 'add documentation for fallback',
      kinds: ['documentation'],
      stage: 'model_deployment_post_training',
      why: 'clarify behaviour',
      effect_note: 'support tickets should drop',
    },
  ]
  state.chosen = ['U1']
  state.summary = 'retrained the intent classifier'
  return state
}

describe('wizard validation mirror', () => {
  it('blocks advancing while the elicitation is incomplete', () => {
    const state = newWizard('x')
    expect(canAdvance(state)).toBe(false)
    const after = nextStep(state)
    expect(after.step).toBe('elicitation')
    expect(after.errors['stakeholders.0.label']).toBeTruthy()
  })

  it('mirrors the consent invariant', () => {
    const state = filledWizard()
    state.stakeholders[0].identifiable = true
    state.stakeholders[0].consent_recorded = false
    const errors = validateStep(state, 'elicitation')
    expect(errors['stakeholders.0.consent']).toMatch(/consent/)
  })

  it('requires every incorporation row to report an effect', () => {
    const state = filledWizard()
    state.updates[0].effect_note = ''
    const errors = validateStep(state, 'incorporation')
    expect(errors['updates.0.effect']).toBeTruthy()
  })

  it('choosing zero updates demands a justification before submit', () => {
    const state = filledWizard()
    state.chosen = []
    state.justification = ''
    expect(canSubmit(state)).toBe(false)
    const html = renderWizard({ ...state, step: 'summary' })
    expect(html).toContain('Justification for inaction')
    expect(html).toMatch(/data-action="submit"[^>]*disabled/)
    state.justification = 'regulatory review still pending'
    expect(canSubmit(state)).toBe(true)
  })

  it('submit stays disabled off the summary step', () => {
    const state = filledWizard()
    expect(canSubmit(state)).toBe(true)
    const html = renderWizard(state) // still on elicitation
    expect(html).toMatch(/data-action="submit"[^>]*disabled/)
  })
})

describe('wizard submission', () => {
  let fake: FakeService
  let api: ApiClient

  beforeEach(() => {
    fake = new FakeService([asthmaFixture as unknown as LogDoc])
    api = new ApiClient('http://fake', 'token', fake.fetch)
  })

  it('persists a completed record via the API and re-renders it', async () => {
    const result = await submitWizard(api, filledWizard())
    expect(result.result?.recordId).toBe('R3')

    const log = await api.getLog('asthma-conversational-agent')
    const record = log.records.find((r) => r.id === 'R3')!
    expect(record.completed).toBe(true)
    expect(record.chosen_update_ids).toEqual(['U1'])
    const statuses = record.candidate_updates.map((u) => u.status)
    expect(statuses).toEqual(['implemented', 'considered'])

    const html = renderLogDetail(log)
    expect(html).toContain('retrain intent classifier')
    const implementedRow = html.split('\n').find((l) => l.includes('retrain intent classifier'))
    expect(implementedRow).toContain('row-implemented')
    const consideredRow = html.split('\n').find((l) => l.includes('add documentation for fallback'))
    expect(consideredRow).toContain('row-considered')
  })

  it('supports the inaction path', async () => {
    const state = filledWizard()
    state.chosen = []
    state.justification = 'waiting on the safety board'
    const result = await submitWizard(api, state)
    expect(result.result).toBeTruthy()
    const log = await api.getLog('asthma-conversational-agent')
    const record = log.records.at(-1)!
    expect(record.completed).toBe(true)
    expect(record.chosen_update_ids).toEqual([])
    expect(record.inaction_justification).toBe('waiting on the safety board')
  })

  it('surfaces an API rejection inline at the offending field', async () => {
    const state = filledWizard()
    state.summary = '   ' // bypasses a client check only the server normalizes
    const result = await submitWizard(api, state)
    expect(result.result).toBeUndefined()
    expect(result.errors['summary']).toContain('EmptySummary')
    const html = renderWizard({ ...result, step: 'summary' })
    expect(html).toContain('data-error-for="summary"')
    expect(html).toContain('EmptySummary')
  })

  it('maps consent rejections to the stakeholder field', async () => {
    const state = filledWizard()
    state.stakeholders[0].identifiable = true // skip client validation on purpose
    const result = await submitWizard(api, state)
    expect(result.errors['stakeholders.0.consent']).toContain('ConsentMissing')
  })

  it('flags 409 conflicts for reload-and-merge', async () => {
    const log = await api.getLog('asthma-conversational-agent')
    // simulate a concurrent edit: the fake's revision moves on
    await api.openRecord('asthma-conversational-agent', {
      stakeholders: [
        { label: 'Other', category: 'internal', identifiable: false, consent_recorded: false },
      ],
      reason: 'r',
      presentation: 'p',
    })
    try {
      await api.openRecord(
        'asthma-conversational-agent',
        {
          stakeholders: [
            { label: 'Me', category: 'internal', identifiable: false, consent_recorded: false },
          ],
          reason: 'r',
          presentation: 'p',
        },
        log.revision,
      )
      expect.unreachable('expected a conflict')
    } catch (err: any) {
      expect(err.isConflict).toBe(true)
    }
  })
})
