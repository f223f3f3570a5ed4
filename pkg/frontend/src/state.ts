import { AdvisorApi } from './api'
import type { QualityRow, Scenario, SessionView } from './types'

export type Listener = (store: UiSession) => void

/**
 * Mirror of one server session plus view state.
 *
 * All game math lives server-side; every number shown comes from the last
 * response verbatim.  Mutations lock the store until the server answers and
 * always end in a refetched view, so a stale quality table can never be
 * displayed.
 */
export class UiSession {
  view: SessionView | null = null
  whatIfRow: QualityRow | null = null
  busy = false
  lastError: string | null = null
  log: string[] = []

  private listeners: Listener[] = []

  constructor(public api: AdvisorApi) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener)
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this)
  }

  private async mutate<T>(action: () => Promise<T>): Promise<T | null> {
    if (this.busy) return null
    this.busy = true
    this.lastError = null
    this.emit()
    try {
      return await action()
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err)
      return null
    } finally {
      this.busy = false
      this.emit()
    }
  }

  async start(scenario: Scenario): Promise<void> {
    await this.mutate(async () => {
      this.view = await this.api.createSession(scenario)
      this.whatIfRow = null
      this.log = ['session started']
    })
  }

  /** Record a card; the quality table always comes from the fresh response. */
  async play(seat: number, card: string): Promise<void> {
    if (!this.view) return
    const id = this.view.id
    await this.mutate(async () => {
      const next = await this.api.play(id, seat, card)
      this.view = next
      this.whatIfRow = null
      this.log.push(`seat ${seat} played ${card}`)
    })
  }

  async whatIf(card: string): Promise<void> {
    if (!this.view) return
    const id = this.view.id
    await this.mutate(async () => {
      this.whatIfRow = await this.api.whatIf(id, card)
      this.log.push(`what-if ${card}: ${this.whatIfRow.q_bar}/${this.whatIfRow.deals_total}`)
    })
  }

  cancelWhatIf(): void {
    this.whatIfRow = null
    this.emit()
  }

  /**
   * Undo the last recorded play.
   *
   * The service has no undo endpoint, so the store rebuilds: a fresh session
   * from the same scenario, replaying history minus the final move.
   */
  async undo(): Promise<void> {
    if (!this.view || this.view.history.length === 0) return
    const scenario = this.view.scenario
    const history = this.view.history.slice(0, -1)
    const stale = this.view.id
    await this.mutate(async () => {
      let next = await this.api.createSession(scenario)
      for (const move of history) {
        next = await this.api.play(next.id, move.seat, move.card)
      }
      await this.api.deleteSession(stale).catch(() => undefined)
      this.view = next
      this.whatIfRow = null
      this.log.push('undo')
    })
  }

  async refresh(): Promise<void> {
    if (!this.view) return
    const id = this.view.id
    await this.mutate(async () => {
      this.view = await this.api.getSession(id)
    })
  }
}
