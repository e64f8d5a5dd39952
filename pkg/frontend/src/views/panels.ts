// Secondary panels: log list, checklist, search results, link graph.

import type { ChecklistResponse, LinkDoc, LogListEntry, SearchHit } from '../types'
import { esc } from '../render'

export function renderLogList(entries: LogListEntry[]): string {
  if (entries.length === 0) {
    return '<p class="empty">No logs visible. Check your token.</p>'
  }
  const rows = entries
    .map(
      (entry) => `
      <tr>
        <td><a href="#/logs/${esc(entry.id)}">${esc(entry.title)}</a></td>
        <td><span class="status status-${entry.status}">${esc(entry.status)}</span></td>
        <td>${esc(entry.owner.display_name || entry.owner.id)}</td>
        <td>${entry.revision}</td>
      </tr>`,
    )
    .join('')
  return `
    <table class="log-list">
      <thead><tr><th>Log</th><th>Status</th><th>Owner</th><th>Revision</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`
}

const CHECKLIST_GLYPHS: Record<string, string> = {
  implemented_in_code: '✓',
  pending: '○',
  not_applicable: '–',
}

export function renderChecklistPanel(response: ChecklistResponse | null): string {
  if (response === null) {
    return `<div class="panel" data-testid="checklist-panel">
      <h3>Incorporation checklist</h3>
      <p class="hint">No scan root configured; items show as pending. Set a scan root to pick up FBLOG annotations from code.</p>
    </div>`
  }
  const items = response.items
    .map((item) => {
      const evidence = item.evidence
        .map(
          (e) =>
            `<a class="evidence" href="#" title="open file">${esc(e.file_path)}:${e.line_number}</a>`,
        )
        .join(', ')
      return `<li class="state-${item.state}" data-item="${item.record_id}/${item.update_id}">
        <span class="glyph">${CHECKLIST_GLYPHS[item.state]}</span>
        <strong>${item.record_id}/${item.update_id}</strong> ${esc(item.which)}
        <em class="state">${item.state.replace(/_/g, ' ')}</em>
        ${evidence ? `<span class="evidence-list">${evidence}</span>` : ''}
      </li>`
    })
    .join('')
  const chips = response.findings
    .map(
      (f) =>
        `<span class="chip chip-${esc(f.kind)}" data-testid="checklist-warning">${esc(f.kind)}: ${esc(
          f.message,
        )} (${esc(f.annotation.file_path)}:${f.annotation.line_number})</span>`,
    )
    .join(' ')
  const hint = response.scanned
    ? ''
    : '<p class="hint">No scan root configured; items show as pending.</p>'
  return `<div class="panel" data-testid="checklist-panel">
    <h3>Incorporation checklist</h3>
    ${hint}
    <ul class="checklist">${items}</ul>
    ${chips ? `<div class="chips">${chips}</div>` : ''}
    <button data-action="refresh-checklist">Rescan</button>
  </div>`
}

export function renderSearchResults(hits: SearchHit[], query: string): string {
  if (!query) return ''
  if (hits.length === 0) return `<p class="empty">No hits for <code>${esc(query)}</code>.</p>`
  const rows = hits
    .map((hit) => {
      const target = hit.record_id
        ? `#/logs/${esc(hit.log_id)}#${esc(hit.record_id)}`
        : `#/logs/${esc(hit.log_id)}`
      return `<li><a href="${target}">${esc(hit.log_id)}${
        hit.record_id ? ` · ${esc(hit.record_id)}` : ''
      }</a> <code>${esc(hit.matched_field)}</code><br><span class="snippet">${esc(
        hit.snippet,
      )}</span></li>`
    })
    .join('')
  return `<ol class="search-results">${rows}</ol>`
}

// Link graph: simple layered SVG, prompted edges highlighted so provenance
// reads left to right.
export function renderLinkGraph(logIds: string[], links: LinkDoc[]): string {
  if (logIds.length === 0) return '<p class="empty">No logs.</p>'
  const width = 640
  const rowHeight = 64
  const positions = new Map<string, { x: number; y: number }>()
  logIds.forEach((id, index) => {
    positions.set(id, { x: 160 + (index % 2) * 280, y: 40 + index * rowHeight })
  })
  const edges = links
    .filter((link) => positions.has(link.from_log_id) && positions.has(link.to_log_id))
    .map((link) => {
      const from = positions.get(link.from_log_id)!
      const to = positions.get(link.to_log_id)!
      const cls = link.relation === 'prompted' ? 'edge edge-prompted' : 'edge'
      const mx = (from.x + to.x) / 2
      const my = (from.y + to.y) / 2
      return `<g class="${cls}" data-relation="${esc(link.relation)}">
        <line x1="${from.x}" y1="${from.y}" x2="${to.x}" y2="${to.y}" marker-end="url(#arrow)"></line>
        <text x="${mx}" y="${my - 4}">${esc(link.relation)}</text>
      </g>`
    })
    .join('')
  const nodes = logIds
    .map((id) => {
      const p = positions.get(id)!
      return `<g class="node">
        <rect x="${p.x - 110}" y="${p.y - 16}" width="220" height="32" rx="6"></rect>
        <a href="#/logs/${esc(id)}"><text x="${p.x}" y="${p.y + 4}" text-anchor="middle">${esc(id)}</text></a>
      </g>`
    })
    .join('')
  const height = 60 + logIds.length * rowHeight
  return `<svg class="link-graph" viewBox="0 0 ${width} ${height}" role="img">
    <defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="8" refY="4" orient="auto">
      <path d="M0,0 L8,4 L0,8 z"></path></marker></defs>
    ${edges}
    ${nodes}
  </svg>`
}
