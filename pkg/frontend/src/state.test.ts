import { beforeEach, describe, expect, it, vi } from 'vitest'

import { AdvisorApi } from './api'
import { UiSession } from './state'
import type { QualityRow, Scenario, SessionView } from './types'

function view(partial: Partial<SessionView>): SessionView {
  return {
    id: 's1',
    mode: 'oracle',
    scenario: {
      trump: 'S',
      our_seat: 0,
      declarer_seat: 2,
      our_hand: ['H10', 'HQ', 'H7'],
      unseen: ['CJ', 'SJ', 'HJ', 'S7', 'HA', 'H8'],
      constraints: '2-trumps-1-heart-each',
      declarer_points: 42,
      defender_points: 48,
    },
    our_hand: ['H10', 'HQ', 'H7'],
    history: [],
    trick: [],
    leader: 0,
    to_move: 0,
    deals_total: 12,
    qualities: [],
    recommended: null,
    p_win: null,
    points: { declarer: 42, defenders: 48 },
    terminal: false,
    ...partial,
  }
}

describe('UiSession store', () => {
  let api: AdvisorApi
  let store: UiSession

  beforeEach(() => {
    api = new AdvisorApi('')
    store = new UiSession(api)
  })

  it('start stores the created session view', async () => {
    const created = view({ deals_total: 12 })
    vi.spyOn(api, 'createSession').mockResolvedValue(created)
    await store.start(created.scenario as Scenario)
    expect(store.view?.id).toBe('s1')
    expect(store.lastError).toBeNull()
  })

  it('play replaces the view with the fresh server response', async () => {
    store.view = view({})
    const after = view({ deals_total: 6, history: [{ seat: 0, card: 'HQ' }] })
    vi.spyOn(api, 'play').mockResolvedValue(after)
    await store.play(0, 'HQ')
    expect(store.view?.deals_total).toBe(6)
    expect(store.whatIfRow).toBeNull()
  })

  it('play failure keeps state and records the error', async () => {
    store.view = view({})
    vi.spyOn(api, 'play').mockRejectedValue(new Error('422: illegal'))
    await store.play(0, 'HA')
    expect(store.lastError).toContain('illegal')
    expect(store.view?.deals_total).toBe(12)
  })

  it('what-if stores the row without touching the session view', async () => {
    store.view = view({})
    const row: QualityRow = { card: 'H10', q_bar: 6, deals_total: 12, p_win: 0.5 }
    vi.spyOn(api, 'whatIf').mockResolvedValue(row)
    await store.whatIf('H10')
    expect(store.whatIfRow).toEqual(row)
    expect(store.view?.history).toEqual([])
    store.cancelWhatIf()
    expect(store.whatIfRow).toBeNull()
  })

  it('undo rebuilds the session by replaying all but the last move', async () => {
    store.view = view({
      history: [
        { seat: 0, card: 'HQ' },
        { seat: 1, card: 'H8' },
      ],
    })
    const fresh = view({ id: 's2' })
    const replayed = view({ id: 's2', history: [{ seat: 0, card: 'HQ' }] })
    const create = vi.spyOn(api, 'createSession').mockResolvedValue(fresh)
    const play = vi.spyOn(api, 'play').mockResolvedValue(replayed)
    const remove = vi.spyOn(api, 'deleteSession').mockResolvedValue(undefined)

    await store.undo()

    expect(create).toHaveBeenCalledTimes(1)
    expect(play).toHaveBeenCalledWith('s2', 0, 'HQ')
    expect(play).toHaveBeenCalledTimes(1)
    expect(remove).toHaveBeenCalledWith('s1')
    expect(store.view?.history).toEqual([{ seat: 0, card: 'HQ' }])
  })

  it('mutations are serialized: a busy store ignores reentrant calls', async () => {
    store.view = view({})
    let resolve!: (v: SessionView) => void
    const pending = new Promise<SessionView>((r) => (resolve = r))
    const play = vi.spyOn(api, 'play').mockReturnValue(pending)

    const first = store.play(0, 'HQ')
    const second = store.play(0, 'H7') // ignored while busy
    resolve(view({ history: [{ seat: 0, card: 'HQ' }] }))
    await Promise.all([first, second])

    expect(play).toHaveBeenCalledTimes(1)
  })

  it('notifies subscribers on every state change', async () => {
    const seen: boolean[] = []
    store.subscribe((s) => seen.push(s.busy))
    store.view = view({})
    vi.spyOn(api, 'play').mockResolvedValue(view({}))
    await store.play(0, 'HQ')
    expect(seen).toEqual([true, false])
  })
})
