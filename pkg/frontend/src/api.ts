import type { QualityRow, Scenario, SessionView } from './types'

export class RequestFailed extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`)
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { 'Content-Type': 'application/json' },
    ...init,
  })
  if (!res.ok) {
    let detail = res.statusText
    try {
      const body = await res.json()
      if (body && typeof body.detail === 'string') detail = body.detail
    } catch {
      /* non-JSON error body */
    }
    throw new RequestFailed(res.status, detail)
  }
  if (res.status === 204) return undefined as T
  return res.json() as Promise<T>
}

/** Thin typed client for the advisor service; one base URL is the only config. */
export class AdvisorApi {
  constructor(public baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`
  }

  health(): Promise<{ status: string }> {
    return request(this.url('/api/health'))
  }

  showcaseFixture(): Promise<Scenario> {
    return request(this.url('/api/fixtures/showcase'))
  }

  createSession(scenario: Scenario): Promise<SessionView> {
    return request(this.url('/api/sessions'), {
      method: 'POST',
      body: JSON.stringify(scenario),
    })
  }

  getSession(id: string): Promise<SessionView> {
    return request(this.url(`/api/sessions/${id}`))
  }

  play(id: string, seat: number, card: string): Promise<SessionView> {
    return request(this.url(`/api/sessions/${id}/play`), {
      method: 'POST',
      body: JSON.stringify({ seat, card }),
    })
  }

  whatIf(id: string, card: string): Promise<QualityRow> {
    return request(this.url(`/api/sessions/${id}/whatif`), {
      method: 'POST',
      body: JSON.stringify({ card }),
    })
  }

  deleteSession(id: string): Promise<void> {
    return request(this.url(`/api/sessions/${id}`), { method: 'DELETE' })
  }
}
