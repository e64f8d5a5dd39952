// Thin typed client over the feedbacklog HTTP API. All UI data flows through
// here; the fetch implementation is injectable so tests can fake the server.

import type {
  ApiErrorBody,
  AssignmentDoc,
  ChecklistResponse,
  ElicitationDoc,
  Finding,
  LogDoc,
  LogListEntry,
  SearchHit,
} from './types'

export class ApiError extends Error {
  status: number
  body: ApiErrorBody

  constructor(status: number, body: ApiErrorBody) {
    super(`${body.code}: ${body.message}`)
    this.status = status
    this.body = body
  }

  get isConflict(): boolean {
    return this.status === 409
  }
}

export interface UpdateEntryPayload {
  which: string
  kinds: string[]
  stage: string
  why: string
  effect_note?: string
  effect_readings?: { metric_name: string; value: number; note?: string }[]
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string = '',
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { 'Content-Type': 'application/json' }
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    })
    const payload = await response.json()
    if (!response.ok) {
      throw new ApiError(response.status, payload as ApiErrorBody)
    }
    return payload as T
  }

  health(): Promise<{ ok: boolean; version: string; log_count: number }> {
    return this.request('GET', '/healthz')
  }

  listLogs(): Promise<{ logs: LogListEntry[] }> {
    return this.request('GET', '/logs')
  }

  getLog(logId: string): Promise<LogDoc> {
    return this.request('GET', `/logs/${logId}`)
  }

  validate(logId: string): Promise<{ findings: Finding[] }> {
    return this.request('GET', `/logs/${logId}/validate`)
  }

  exportLog(logId: string, format: 'md' | 'html'): Promise<{ format: string; content: string }> {
    return this.request('GET', `/logs/${logId}/export?format=${format}`)
  }

  checklist(logId: string, scanRoot?: string): Promise<ChecklistResponse> {
    const query = scanRoot ? `?scan_root=${encodeURIComponent(scanRoot)}` : ''
    return this.request('GET', `/logs/${logId}/checklist${query}`)
  }

  search(query: string): Promise<{ hits: SearchHit[] }> {
    return this.request('GET', `/search?q=${encodeURIComponent(query)}`)
  }

  provenance(logId: string): Promise<{ chain: string[] }> {
    return this.request('GET', `/logs/${logId}/provenance`)
  }

  openRecord(
    logId: string,
    elicitation: ElicitationDoc,
    baseRevision?: number,
  ): Promise<{ record_id: string; revision: number }> {
    return this.request('POST', `/logs/${logId}/records`, {
      elicitation,
      base_revision: baseRevision,
    })
  }

  setFeedback(logId: string, recordId: string, text: string): Promise<{ revision: number }> {
    return this.request('POST', `/logs/${logId}/records/${recordId}/feedback`, { text })
  }

  addUpdate(
    logId: string,
    recordId: string,
    entry: UpdateEntryPayload,
  ): Promise<{ update_id: string; revision: number }> {
    return this.request('POST', `/logs/${logId}/records/${recordId}/updates`, { entry })
  }

  chooseUpdates(
    logId: string,
    recordId: string,
    updateIds: string[],
    summaryText: string,
  ): Promise<{ revision: number }> {
    return this.request('POST', `/logs/${logId}/records/${recordId}/choose`, {
      update_ids: updateIds,
      summary_text: summaryText,
    })
  }

  recordInaction(
    logId: string,
    recordId: string,
    justification: string,
  ): Promise<{ revision: number }> {
    return this.request('POST', `/logs/${logId}/records/${recordId}/inaction`, {
      justification,
    })
  }

  addAssignment(
    logId: string,
    sectionPath: string,
    assigneeId: string,
    state: 'open' | 'done' = 'open',
  ): Promise<{ assignments: AssignmentDoc[] }> {
    return this.request('POST', `/logs/${logId}/assignments`, {
      section_path: sectionPath,
      assignee: { id: assigneeId },
      state,
    })
  }

  addLink(fromLogId: string, toLogId: string, relation: string): Promise<{ ok: boolean }> {
    return this.request('POST', '/links', {
      from_log_id: fromLogId,
      to_log_id: toLogId,
      relation,
    })
  }
}
