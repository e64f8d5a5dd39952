// Hash-routed single-page app. Deep links are stable: #/logs, #/logs/<id>,
// #/logs/<id>/new-record, #/search/<query>, #/graph. All data flows through
// the ApiClient; the only client-side persistence is the session token.

import { ApiClient, ApiError } from './api'
import { esc } from './render'
import { renderLogDetail } from './views/logDetail'
import { renderChecklistPanel, renderLinkGraph, renderLogList, renderSearchResults } from './views/panels'
import {
  canSubmit,
  draftUpdateId,
  emptyUpdate,
  newWizard,
  nextStep,
  previousStep,
  renderWizard,
  submitWizard,
  WizardState,
} from './wizard'
import type { ChecklistResponse, LinkDoc } from './types'

export interface AppConfig {
  baseUrl: string
  token: string
  scanRoot?: string
}

export class App {
  api: ApiClient
  wizard: WizardState | null = null
  checklist: ChecklistResponse | null = null

  constructor(
    private root: HTMLElement,
    private config: AppConfig,
    fetchFn?: (input: string, init?: RequestInit) => Promise<Response>,
  ) {
    this.api = new ApiClient(config.baseUrl, config.token, fetchFn)
    this.root.addEventListener('click', (event) => this.onClick(event))
    this.root.addEventListener('input', (event) => this.onInput(event))
    this.root.addEventListener('submit', (event) => event.preventDefault())
    window.addEventListener('hashchange', () => void this.route())
  }

  async route(): Promise<void> {
    const hash = window.location.hash || '#/logs'
    const parts = hash.replace(/^#\//, '').split('/')
    try {
      if (parts[0] === 'logs' && parts.length === 1) {
        await this.showLogList()
      } else if (parts[0] === 'logs' && parts.length === 2) {
        await this.showLog(parts[1])
      } else if (parts[0] === 'logs' && parts[2] === 'new-record') {
        this.wizard = this.wizard?.logId === parts[1] ? this.wizard : newWizard(parts[1])
        this.renderWizardPage()
      } else if (parts[0] === 'search') {
        await this.showSearch(decodeURIComponent(parts.slice(1).join('/')))
      } else if (parts[0] === 'graph') {
        await this.showGraph()
      } else {
        this.root.innerHTML = '<p class="empty">Page not found.</p>'
      }
    } catch (err) {
      this.renderError(err)
    }
  }

  private chrome(content: string): void {
    this.root.innerHTML = `
      <nav class="topbar">
        <a href="#/logs">Logs</a>
        <a href="#/graph">Link graph</a>
        <form class="searchbar" data-role="search">
          <input name="q" placeholder="search: clinician, kind:dataset stage:training, ...">
        </form>
      </nav>
      <main>${content}</main>`
  }

  async showLogList(): Promise<void> {
    const { logs } = await this.api.listLogs()
    this.chrome(renderLogList(logs))
  }

  async showLog(logId: string): Promise<void> {
    const log = await this.api.getLog(logId)
    const { findings } = await this.api.validate(logId)
    let checklist: ChecklistResponse | null = null
    try {
      checklist = await this.api.checklist(logId, this.config.scanRoot)
    } catch {
      checklist = null
    }
    const detail = renderLogDetail(log, { findings, canEdit: true })
    this.chrome(`${detail}${renderChecklistPanel(checklist)}`)
  }

  renderWizardPage(): void {
    if (!this.wizard) return
    this.chrome(renderWizard(this.wizard))
  }

  async showSearch(query: string): Promise<void> {
    const { hits } = query ? await this.api.search(query) : { hits: [] }
    this.chrome(
      `<h1>Search</h1>${renderSearchResults(hits, query)}`,
    )
  }

  async showGraph(): Promise<void> {
    const { logs } = await this.api.listLogs()
    const links: LinkDoc[] = []
    for (const entry of logs) {
      const { chain } = await this.api.provenance(entry.id)
      for (const parent of chain) {
        links.push({ from_log_id: parent, to_log_id: entry.id, relation: 'prompted', note: '' })
      }
    }
    this.chrome(`<h1>Link graph</h1>${renderLinkGraph(logs.map((l) => l.id), links)}`)
  }

  renderError(err: unknown): void {
    if (err instanceof ApiError) {
      if (err.status === 404) {
        this.chrome(`<div class="banner banner-error"><h1>Not found</h1><p>${esc(err.body.message)}</p></div>`)
        return
      }
      if (err.status === 401 || err.status === 403) {
        this.chrome(
          `<div class="banner banner-error"><h1>No access</h1><p>${esc(
            err.body.message,
          )}</p><p>Set a valid token in the session bar.</p></div>`,
        )
        return
      }
      this.chrome(`<div class="banner banner-error">${esc(err.message)}</div>`)
      return
    }
    this.chrome(`<div class="banner banner-error">Unexpected error: ${esc(String(err))}</div>`)
  }

  // -- event wiring -----------------------------------------------------

  private onClick(event: Event): void {
    const target = event.target as HTMLElement
    const action = target.closest('[data-action]')?.getAttribute('data-action')
    if (!action || !this.wizard) {
      if (action === 'refresh-checklist') {
        void this.route()
      }
      return
    }
    event.preventDefault()
    if (action === 'prev') {
      this.wizard = previousStep(this.wizard)
      this.renderWizardPage()
    } else if (action === 'next') {
      this.wizard = nextStep(this.wizard)
      this.renderWizardPage()
    } else if (action === 'add-stakeholder') {
      this.wizard.stakeholders.push({
        label: '',
        category: 'end_user',
        identifiable: false,
        consent_recorded: false,
      })
      this.renderWizardPage()
    } else if (action === 'add-update') {
      this.wizard.updates.push(emptyUpdate())
      this.renderWizardPage()
    } else if (action === 'submit') {
      void this.submitWizardAndRefresh()
    }
  }

  async submitWizardAndRefresh(): Promise<void> {
    if (!this.wizard) return
    const state = await submitWizard(this.api, this.wizard)
    this.wizard = state
    if (state.result) {
      const logId = state.logId
      this.wizard = null
      window.location.hash = `#/logs/${logId}`
      await this.showLog(logId)
    } else {
      this.renderWizardPage()
    }
  }

  private onInput(event: Event): void {
    const target = event.target as HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement
    if (!this.wizard || !target.name) return
    const state = this.wizard
    const name = target.name
    if (name === 'reason') state.reason = target.value
    else if (name === 'presentation') state.presentation = target.value
    else if (name === 'feedback') state.feedback = target.value
    else if (name === 'summary') state.summary = target.value
    else if (name === 'justification') state.justification = target.value
    else if (name.startsWith('stakeholders.')) {
      const [, indexText, field] = name.split('.')
      const stakeholder = state.stakeholders[Number(indexText)]
      if (!stakeholder) return
      if (field === 'label') stakeholder.label = target.value
      else if (field === 'category') stakeholder.category = target.value
      else if (field === 'identifiable' || field === 'consent_recorded') {
        stakeholder[field] = (target as HTMLInputElement).checked
      }
    } else if (name.startsWith('updates.')) {
      const [, indexText, field] = name.split('.')
      const update = state.updates[Number(indexText)]
      if (!update) return
      if (field === 'kinds') {
        const select = target as HTMLSelectElement
        update.kinds = Array.from(select.selectedOptions).map((o) => o.value)
      } else if (field === 'which' || field === 'stage' || field === 'why' || field === 'effect_note') {
        update[field] = target.value
      }
    } else if (name.startsWith('chosen.')) {
      const id = name.split('.')[1]
      const checked = (target as HTMLInputElement).checked
      const chosen = new Set(state.chosen)
      if (checked) chosen.add(id)
      else chosen.delete(id)
      state.chosen = Array.from(chosen).sort(
        (a, b) => Number(a.slice(1)) - Number(b.slice(1)),
      )
      // re-render: toggling between choose and inaction swaps the bottom block
      this.renderWizardPage()
      return
    }
    // keep the submit gate live without re-rendering (preserves focus)
    const submitButton = this.root.querySelector(
      '.wizard [data-action="submit"]',
    ) as HTMLButtonElement | null
    if (submitButton) {
      submitButton.disabled =
        state.step !== 'summary' || !canSubmit(state) || state.submitting
    }
  }
}

export { draftUpdateId }
