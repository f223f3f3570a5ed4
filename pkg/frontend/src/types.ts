export interface QualityRow {
  card: string
  q_bar: number
  deals_total: number
  p_win: number
}

export interface PlayRecord {
  seat: number
  card: string
}

export interface Scenario {
  trump: string
  our_seat: number
  declarer_seat: number
  our_hand: string[]
  unseen: string[]
  constraints: string | object[]
  declarer_points: number
  defender_points: number
}

export interface SessionView {
  id: string
  mode: string
  scenario: Scenario
  our_hand: string[]
  history: PlayRecord[]
  trick: PlayRecord[]
  leader: number
  to_move: number | null
  deals_total: number
  qualities: QualityRow[]
  recommended: string | null
  p_win: number | null
  points: { declarer: number; defenders: number }
  terminal: boolean
  result?: { declarer: number; defenders: number; declarer_wins: boolean }
  played?: QualityRow
}

export interface ApiError {
  status: number
  detail: string
}
