// Bootstrap: read the API base URL and session token, mount the app.

import { App } from './app'

function sessionBar(onChange: (baseUrl: string, token: string) => void): HTMLElement {
  const bar = document.createElement('div')
  bar.className = 'sessionbar'
  const baseUrl = localStorage.getItem('fblog.baseUrl') ?? 'http://127.0.0.1:8787'
  const token = localStorage.getItem('fblog.token') ?? ''
  bar.innerHTML = `
    <label>API <input name="baseUrl" value="${baseUrl}" size="28"></label>
    <label>Token <input name="token" value="${token}" size="16" type="password"></label>
    <button>Connect</button>`
  bar.querySelector('button')!.addEventListener('click', () => {
    const base = (bar.querySelector('[name=baseUrl]') as HTMLInputElement).value.replace(/\/$/, '')
    const tok = (bar.querySelector('[name=token]') as HTMLInputElement).value
    localStorage.setItem('fblog.baseUrl', base)
    localStorage.setItem('fblog.token', tok)
    onChange(base, tok)
  })
  return bar
}

function mount(): void {
  const host = document.getElementById('app')
  if (!host) return
  const appRoot = document.createElement('div')

  const start = (baseUrl: string, token: string) => {
    appRoot.innerHTML = ''
    const app = new App(appRoot, { baseUrl, token })
    void app.route()
  }

  host.appendChild(sessionBar(start))
  host.appendChild(appRoot)
  start(
    localStorage.getItem('fblog.baseUrl') ?? 'http://127.0.0.1:8787',
    localStorage.getItem('fblog.token') ?? '',
  )
}

mount()
