import type { Scenario } from './types'

export const SUITS = ['C', 'S', 'H', 'D'] as const
export const RANKS = ['A', '10', 'K', 'Q', 'J', '9', '8', '7'] as const

export const FULL_DECK: string[] = SUITS.flatMap((s) => RANKS.map((r) => `${s}${r}`))

export interface EditorState {
  trump: string
  ourSeat: number
  declarerSeat: number
  ourHand: string[]
  unseen: string[]
  constraints: string
  declarerPoints: number
  defenderPoints: number
}

export const SHOWCASE_PRESET: EditorState = {
  trump: 'S',
  ourSeat: 0,
  declarerSeat: 2,
  ourHand: ['H10', 'HQ', 'H7'],
  unseen: ['CJ', 'SJ', 'HJ', 'S7', 'HA', 'H8'],
  constraints: '2-trumps-1-heart-each',
  declarerPoints: 42,
  defenderPoints: 48,
}

export function emptyEditor(): EditorState {
  return {
    trump: 'S',
    ourSeat: 0,
    declarerSeat: 2,
    ourHand: [],
    unseen: [],
    constraints: 'even-split',
    declarerPoints: 0,
    defenderPoints: 0,
  }
}

export function isValidCard(card: string): boolean {
  return FULL_DECK.includes(card)
}

/** Add a card to a zone; duplicates anywhere in the editor are blocked. */
export function addCard(
  editor: EditorState,
  zone: 'ourHand' | 'unseen',
  card: string,
): { editor: EditorState; error?: string } {
  if (!isValidCard(card)) return { editor, error: `unknown card ${card}` }
  if (editor.ourHand.includes(card) || editor.unseen.includes(card)) {
    return { editor, error: `${card} is already placed` }
  }
  return { editor: { ...editor, [zone]: [...editor[zone], card] } }
}

export function removeCard(
  editor: EditorState,
  zone: 'ourHand' | 'unseen',
  card: string,
): EditorState {
  return { ...editor, [zone]: editor[zone].filter((c) => c !== card) }
}

/** All problems that block submission; empty list means the editor is valid. */
export function validationErrors(editor: EditorState): string[] {
  const errors: string[] = []
  if (editor.ourHand.length === 0) errors.push('our hand is empty')
  if (editor.unseen.length !== 2 * editor.ourHand.length) {
    errors.push(
      `need exactly ${2 * editor.ourHand.length} unseen cards for two opponents`,
    )
  }
  const all = [...editor.ourHand, ...editor.unseen]
  if (new Set(all).size !== all.length) errors.push('duplicate cards')
  const bad = all.filter((c) => !isValidCard(c))
  if (bad.length) errors.push(`unknown cards: ${bad.join(', ')}`)
  if (editor.ourSeat === editor.declarerSeat) {
    errors.push('we are a defender; declarer must sit elsewhere')
  }
  return errors
}

export function toScenario(editor: EditorState): Scenario {
  const errors = validationErrors(editor)
  if (errors.length) throw new Error(errors.join('; '))
  return {
    trump: editor.trump,
    our_seat: editor.ourSeat,
    declarer_seat: editor.declarerSeat,
    our_hand: [...editor.ourHand],
    unseen: [...editor.unseen],
    constraints: editor.constraints,
    declarer_points: editor.declarerPoints,
    defender_points: editor.defenderPoints,
  }
}
