// Small HTML-string rendering helpers shared by the views.

export function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
}

const KIND_LABELS: Record<string, string> = {
  dataset: 'Dataset',
  loss_function: 'Loss function',
  parameter_space: 'Parameter space',
  prompt: 'Prompt',
  documentation: 'Documentation',
  interface_ux: 'Interface/UX',
  accountability_structure: 'Accountability structure',
  deployment_details: 'Deployment details',
  metrics: 'Metrics',
}

export const STAGE_LABELS: Record<string, string> = {
  data_collection_pre_training: 'Data Collection (pre-training)',
  model_development_training: 'Model Development (training)',
  model_deployment_post_training: 'Model Deployment (post-training)',
}

export const STAGES = Object.keys(STAGE_LABELS)

export const KINDS = Object.keys(KIND_LABELS)

export function kindLabel(kind: string): string {
  if (kind.startsWith('other:')) return kind.slice(6)
  return KIND_LABELS[kind] ?? kind
}

export function stageLabel(stage: string): string {
  return STAGE_LABELS[stage] ?? stage
}

export function formatValue(value: number): string {
  return Number.isInteger(value) ? String(value) : String(value)
}

export function categoryDisplay(category: string): string {
  if (category.startsWith('other:')) return 'other'
  return category.replace(/_/g, ' ')
}
