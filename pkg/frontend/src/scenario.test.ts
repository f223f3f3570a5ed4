import { describe, expect, it } from 'vitest'

import {
  SHOWCASE_PRESET,
  addCard,
  emptyEditor,
  removeCard,
  toScenario,
  validationErrors,
} from './scenario'

describe('scenario editor', () => {
  it('showcase preset is pre-filled and valid', () => {
    expect(SHOWCASE_PRESET.ourHand).toEqual(['H10', 'HQ', 'H7'])
    expect(SHOWCASE_PRESET.unseen).toHaveLength(6)
    expect(validationErrors(SHOWCASE_PRESET)).toEqual([])
    const scenario = toScenario(SHOWCASE_PRESET)
    expect(scenario.constraints).toBe('2-trumps-1-heart-each')
    expect(scenario.declarer_points).toBe(42)
  })

  it('blocks duplicate cards', () => {
    let editor = emptyEditor()
    editor = addCard(editor, 'ourHand', 'HQ').editor
    const dupInHand = addCard(editor, 'ourHand', 'HQ')
    expect(dupInHand.error).toMatch(/already placed/)
    const dupAcrossZones = addCard(editor, 'unseen', 'HQ')
    expect(dupAcrossZones.error).toMatch(/already placed/)
    expect(dupAcrossZones.editor.unseen).toEqual([])
  })

  it('rejects unknown card text', () => {
    const result = addCard(emptyEditor(), 'ourHand', 'H1')
    expect(result.error).toMatch(/unknown card/)
  })

  it('empty hand disables submission', () => {
    expect(validationErrors(emptyEditor())).toContain('our hand is empty')
    expect(() => toScenario(emptyEditor())).toThrow()
  })

  it('requires two opponents worth of unseen cards', () => {
    let editor = emptyEditor()
    editor = addCard(editor, 'ourHand', 'HQ').editor
    editor = addCard(editor, 'unseen', 'HA').editor
    expect(validationErrors(editor).join(' ')).toMatch(/exactly 2 unseen/)
  })

  it('remove returns the card to the pool', () => {
    let editor = addCard(emptyEditor(), 'ourHand', 'HQ').editor
    editor = removeCard(editor, 'ourHand', 'HQ')
    expect(editor.ourHand).toEqual([])
    expect(addCard(editor, 'unseen', 'HQ').error).toBeUndefined()
  })
})
