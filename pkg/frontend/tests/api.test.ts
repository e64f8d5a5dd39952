import { describe, expect, it } from 'vitest'

import { ApiClient, ApiError } from '../src/api'
import type { LogDoc } from '../src/types'
import { FakeService } from './fakeService'

import imageFixture from './fixtures/image-recognition.json'

describe('api client', () => {
  it('sends the bearer token', async () => {
    let seenAuth = ''
    const fetchFn = async (_input: string, init?: RequestInit) => {
      seenAuth = (init?.headers as Record<string, string>)['Authorization'] ?? ''
      return new Response(JSON.stringify({ ok: true, version: 'x', log_count: 0 }), { status: 200 })
    }
    const api = new ApiClient('http://fake', 'secret-token', fetchFn)
    await api.health()
    expect(seenAuth).toBe('Bearer secret-token')
  })

  it('omits the header without a token', async () => {
    let hadAuth = true
    const fetchFn = async (_input: string, init?: RequestInit) => {
      hadAuth = 'Authorization' in ((init?.headers as Record<string, string>) ?? {})
      return new Response(JSON.stringify({ ok: true, version: 'x', log_count: 0 }), { status: 200 })
    }
    await new ApiClient('http://fake', '', fetchFn).health()
    expect(hadAuth).toBe(false)
  })

  it('raises ApiError with the server error body', async () => {
    const fake = new FakeService([imageFixture as unknown as LogDoc])
    const api = new ApiClient('http://fake', 't', fake.fetch)
    try {
      await api.getLog('missing-log')
      expect.unreachable('expected 404')
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError)
      const apiErr = err as ApiError
      expect(apiErr.status).toBe(404)
      expect(apiErr.body.code).toBe('UnknownLog')
      expect(apiErr.isConflict).toBe(false)
    }
  })

  it('fetches a log document', async () => {
    const fake = new FakeService([imageFixture as unknown as LogDoc])
    const api = new ApiClient('http://fake', 't', fake.fetch)
    const log = await api.getLog('image-recognition')
    expect(log.status).toBe('finalized')
    expect(log.records).toHaveLength(2)
  })
})
