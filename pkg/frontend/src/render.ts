import type { QualityRow, SessionView } from './types'

const SUIT_GLYPHS: Record<string, string> = { C: '♣', S: '♠', H: '♥', D: '♦' }

export function prettyCard(card: string): string {
  const glyph = SUIT_GLYPHS[card[0] ?? ''] ?? card[0] ?? ''
  return `${glyph}${card.slice(1)}`
}

function escapeHtml(text: string): string {
  return text
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;')
}

export function renderQualityTable(view: SessionView): string {
  if (view.terminal) return ''
  if (view.to_move !== view.scenario.our_seat) {
    return '<p class="muted">Waiting for the table; qualities return on our turn.</p>'
  }
  const rows = view.qualities
    .map((q) => {
      const recommended = q.card === view.recommended
      return `<tr class="${recommended ? 'recommended' : ''}" data-card="${q.card}">
        <td>${prettyCard(q.card)}${recommended ? ' ★' : ''}</td>
        <td>${q.q_bar}/${q.deals_total}</td>
        <td>${(q.p_win * 100).toFixed(1)}%</td>
        <td>
          <button data-action="whatif" data-card="${q.card}">what-if</button>
          <button data-action="play" data-card="${q.card}">play</button>
        </td>
      </tr>`
    })
    .join('')
  return `<table class="qualities">
    <thead><tr><th>card</th><th>deals won</th><th>p(win)</th><th></th></tr></thead>
    <tbody>${rows}</tbody>
  </table>`
}

export function renderStatus(view: SessionView): string {
  const seatNames = ['we', 'partner', 'declarer']
  const parts = [
    `<span>deals left: <b>${view.deals_total}</b></span>`,
    `<span>declarer ${view.points.declarer} · defenders ${view.points.defenders}</span>`,
  ]
  if (view.terminal && view.result) {
    const verdict = view.result.declarer_wins ? 'declarer wins' : 'defenders win'
    parts.push(`<span class="verdict">${verdict} (${view.result.declarer}:${view.result.defenders})</span>`)
  } else if (view.to_move !== null) {
    parts.push(`<span>to move: ${seatNames[view.to_move] ?? view.to_move}</span>`)
  }
  if (view.recommended) {
    parts.push(`<span>recommended: <b>${prettyCard(view.recommended)}</b></span>`)
  }
  return parts.join(' · ')
}

export function renderTrick(view: SessionView): string {
  if (!view.trick.length) return '<p class="muted">table is empty</p>'
  const items = view.trick
    .map((p) => `<li>seat ${p.seat}: ${prettyCard(p.card)}</li>`)
    .join('')
  return `<ol class="trick">${items}</ol>`
}

export function renderHistory(view: SessionView): string {
  if (!view.history.length) return '<p class="muted">no cards recorded yet</p>'
  const items = view.history
    .map((p, i) => `<li>#${i + 1} seat ${p.seat}: ${prettyCard(p.card)}</li>`)
    .join('')
  return `<ol class="history">${items}</ol>`
}

export function renderWhatIf(row: QualityRow | null): string {
  if (!row) return ''
  return `<div class="whatif-box">
    <b>what-if ${prettyCard(row.card)}</b>: wins ${row.q_bar} of ${row.deals_total}
    (${(row.p_win * 100).toFixed(1)}%)
    <button data-action="cancel-whatif">dismiss</button>
    <button data-action="commit-whatif" data-card="${row.card}">commit</button>
  </div>`
}

export function renderOpponentControls(view: SessionView): string {
  if (view.terminal || view.to_move === null || view.to_move === view.scenario.our_seat) {
    return ''
  }
  const played = new Set(view.history.map((p) => p.card))
  const options = view.scenario.unseen
    .filter((c) => !played.has(c))
    .map((c) => `<option value="${c}">${prettyCard(c)}</option>`)
    .join('')
  return `<div class="opponent-controls">
    <label>seat ${view.to_move} played
      <select id="opponent-card">${options}</select>
    </label>
    <button data-action="record-opponent" data-seat="${view.to_move}">record</button>
  </div>`
}

export function renderError(message: string | null): string {
  if (!message) return ''
  return `<div class="error">${escapeHtml(message)}</div>`
}
