import { describe, expect, it } from 'vitest'

import { renderChecklistPanel, renderLinkGraph, renderLogList, renderSearchResults } from '../src/views/panels'
import type { ChecklistResponse } from '../src/types'

const checklist: ChecklistResponse = {
  scanned: true,
  items: [
    {
      record_id: 'R2',
      update_id: 'U3',
      which: 'CutMix',
      state: 'implemented_in_code',
      evidence: [{ file_path: 'train/augment.py', line_number: 1, done_flag: true }],
    },
    { record_id: 'R2', update_id: 'U1', which: 'ResNet-101', state: 'pending', evidence: [] },
    {
      record_id: 'R1',
      update_id: 'U2',
      which: 'Minimum accuracy >50%',
      state: 'not_applicable',
      evidence: [],
    },
  ],
  findings: [
    {
      kind: 'stale_reference',
      severity: 'warning',
      message: 'annotation references unknown update R9/U9',
      annotation: {
        file_path: 'eval/stale.py',
        line_number: 1,
        log_id: 'image-recognition',
        record_id: 'R9',
        update_id: 'U9',
      },
    },
  ],
  warnings: [],
}

describe('checklist panel', () => {
  it('shows states with file:line evidence', () => {
    const html = renderChecklistPanel(checklist)
    expect(html).toContain('R2/U3')
    expect(html).toContain('implemented in code')
    expect(html).toContain('train/augment.py:1')
    expect(html).toContain('state-pending')
    expect(html).toContain('state-not_applicable')
  })

  it('renders stale annotations as warning chips', () => {
    const html = renderChecklistPanel(checklist)
    expect(html).toContain('data-testid="checklist-warning"')
    expect(html).toContain('R9/U9')
    expect(html).toContain('eval/stale.py:1')
  })

  it('hints when no scan root is configured', () => {
    const html = renderChecklistPanel(null)
    expect(html).toContain('No scan root configured')
    const unscanned = renderChecklistPanel({ scanned: false, items: [], findings: [], warnings: [] })
    expect(unscanned).toContain('No scan root configured')
  })
})

describe('link graph', () => {
  it('highlights prompted edges', () => {
    const html = renderLinkGraph(
      ['user-research', 'tech-spec'],
      [
        { from_log_id: 'user-research', to_log_id: 'tech-spec', relation: 'prompted', note: '' },
        { from_log_id: 'tech-spec', to_log_id: 'user-research', relation: 'refines', note: '' },
      ],
    )
    expect(html).toContain('edge edge-prompted')
    expect(html).toContain('data-relation="prompted"')
    expect(html).toContain('user-research')
    expect((html.match(/<g class="node">/g) ?? []).length).toBe(2)
  })
})

describe('log list and search results', () => {
  it('links each log by id', () => {
    const html = renderLogList([
      {
        id: 'image-recognition',
        title: 'Image Recognition',
        status: 'finalized',
        revision: 15,
        owner: { id: 'image-owner', display_name: 'Image Recognition Lead' },
      },
    ])
    expect(html).toContain('href="#/logs/image-recognition"')
    expect(html).toContain('Image Recognition Lead')
  })

  it('renders hits with deep links to records', () => {
    const html = renderSearchResults(
      [
        {
          log_id: 'asthma-conversational-agent',
          record_id: 'R1',
          matched_field: 'records[0].elicitation.reason',
          snippet: 'Need clinician insight',
        },
      ],
      'clinician',
    )
    expect(html).toContain('#/logs/asthma-conversational-agent#R1')
    expect(html).toContain('Need clinician insight')
  })

  it('reports empty results', () => {
    expect(renderSearchResults([], 'nothing')).toContain('No hits')
  })
})
