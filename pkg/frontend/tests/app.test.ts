// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from 'vitest'

import { App } from '../src/app'
import type { LogDoc } from '../src/types'
import { FakeService } from './fakeService'

import imageFixture from './fixtures/image-recognition.json'
import asthmaFixture from './fixtures/asthma-conversational-agent.json'

function mount(fake: FakeService): { app: App; root: HTMLElement } {
  const root = document.createElement('div')
  document.body.appendChild(root)
  const app = new App(root, { baseUrl: 'http://fake', token: 't' }, fake.fetch)
  return { app, root }
}

describe('app shell', () => {
  beforeEach(() => {
    document.body.innerHTML = ''
    window.location.hash = ''
  })

  it('lists logs on the default route', async () => {
    const fake = new FakeService([
      imageFixture as unknown as LogDoc,
      asthmaFixture as unknown as LogDoc,
    ])
    const { app, root } = mount(fake)
    await app.route()
    expect(root.innerHTML).toContain('Image Recognition')
    expect(root.innerHTML).toContain('href="#/logs/asthma-conversational-agent"')
  })

  it('renders a log page with checklist panel on deep link', async () => {
    const fake = new FakeService([imageFixture as unknown as LogDoc])
    const { app, root } = mount(fake)
    window.location.hash = '#/logs/image-recognition'
    await app.route()
    expect(root.innerHTML).toContain('55% robustness')
    expect(root.innerHTML).toContain('data-testid="checklist-panel"')
    expect(root.innerHTML).toContain('No scan root configured')
  })

  it('shows a not-found page for missing logs', async () => {
    const fake = new FakeService([])
    const { app, root } = mount(fake)
    window.location.hash = '#/logs/ghost'
    await app.route()
    expect(root.innerHTML).toContain('Not found')
  })

  it('drives the wizard through the DOM and re-renders the detail view', async () => {
    const fake = new FakeService([asthmaFixture as unknown as LogDoc])
    const { app, root } = mount(fake)
    window.location.hash = '#/logs/asthma-conversational-agent/new-record'
    await app.route()
    expect(root.querySelector('form.wizard')).toBeTruthy()

    const type = (selector: string, value: string) => {
      const field = root.querySelector(selector) as HTMLInputElement | HTMLTextAreaElement
      field.value = value
      field.dispatchEvent(new Event('input', { bubbles: true }))
    }
    const click = (selector: string) => {
      const el = root.querySelector(selector) as HTMLElement
      el.dispatchEvent(new MouseEvent('click', { bubbles: true }))
    }

    type('[name="stakeholders.0.label"]', 'Care Team')
    type('[name="reason"]', 'rollout review')
    type('[name="presentation"]', 'sample transcripts')
    click('[data-action="next"]')
    type('[name="feedback"]', 'drifts off-topic')
    click('[data-action="next"]')
    type('[name="updates.0.which"]', 'retrain intent classifier')
    const kinds = root.querySelector('[name="updates.0.kinds"]') as HTMLSelectElement
    kinds.options[0].selected = true // dataset
    kinds.dispatchEvent(new Event('input', { bubbles: true }))
    type('[name="updates.0.why"]', 'cover medication intents')
    type('[name="updates.0.effect_note"]', 'tbd')
    click('[data-action="next"]')

    // zero chosen: justification field gates the submit button
    expect(root.innerHTML).toContain('Justification for inaction')
    const choose = root.querySelector('[name="chosen.U1"]') as HTMLInputElement
    choose.checked = true
    choose.dispatchEvent(new Event('input', { bubbles: true }))
    type('[name="summary"]', 'retrained the classifier')

    const submit = root.querySelector('[data-action="submit"]') as HTMLButtonElement
    expect(submit.disabled).toBe(false)
    await app.submitWizardAndRefresh()

    expect(root.innerHTML).toContain('Record 3')
    expect(root.innerHTML).toContain('retrain intent classifier')
    expect(root.innerHTML).toContain('row-implemented')
  })
})
