import { AdvisorApi } from './api'
import {
  EditorState,
  SHOWCASE_PRESET,
  addCard,
  emptyEditor,
  removeCard,
  toScenario,
  validationErrors,
} from './scenario'
import { UiSession } from './state'
import {
  prettyCard,
  renderError,
  renderHistory,
  renderOpponentControls,
  renderQualityTable,
  renderStatus,
  renderTrick,
  renderWhatIf,
} from './render'

const baseUrl =
  (window as unknown as { QSKAT_BASE?: string }).QSKAT_BASE ??
  localStorage.getItem('qskat-base-url') ??
  ''

const api = new AdvisorApi(baseUrl)
const store = new UiSession(api)
let editor: EditorState = emptyEditor()

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id)
  if (!node) throw new Error(`missing element #${id}`)
  return node as T
}

function renderEditor(): void {
  const errors = validationErrors(editor)
  el('editor-hand').innerHTML =
    editor.ourHand.map((c) => `<span class="chip" data-zone="ourHand" data-card="${c}">${prettyCard(c)} ✕</span>`).join('') ||
    '<span class="muted">empty</span>'
  el('editor-unseen').innerHTML =
    editor.unseen.map((c) => `<span class="chip" data-zone="unseen" data-card="${c}">${prettyCard(c)} ✕</span>`).join('') ||
    '<span class="muted">empty</span>'
  el('editor-errors').innerHTML = errors.map((e) => `<li>${e}</li>`).join('')
  el<HTMLButtonElement>('editor-submit').disabled = errors.length > 0 || store.busy
  el<HTMLInputElement>('editor-trump').value = editor.trump
  el<HTMLInputElement>('editor-declarer-points').value = String(editor.declarerPoints)
  el<HTMLInputElement>('editor-defender-points').value = String(editor.defenderPoints)
}

function renderSession(): void {
  const view = store.view
  el('session-error').innerHTML = renderError(store.lastError)
  const busyNote = store.busy ? '<span class="muted"> · waiting for server…</span>' : ''
  if (!view) {
    el('session-status').innerHTML = '<span class="muted">no session</span>' + busyNote
    el('quality-panel').innerHTML = ''
    el('whatif-panel').innerHTML = ''
    el('trick-panel').innerHTML = ''
    el('history-panel').innerHTML = ''
    el('opponent-panel').innerHTML = ''
    return
  }
  el('session-status').innerHTML = renderStatus(view) + busyNote
  el('quality-panel').innerHTML = renderQualityTable(view)
  el('whatif-panel').innerHTML = renderWhatIf(store.whatIfRow)
  el('trick-panel').innerHTML = renderTrick(view)
  el('history-panel').innerHTML = renderHistory(view)
  el('opponent-panel').innerHTML = renderOpponentControls(view)
  el<HTMLButtonElement>('undo-button').disabled =
    store.busy || view.history.length === 0
  for (const button of document.querySelectorAll<HTMLButtonElement>('button[data-action]')) {
    button.disabled = store.busy
  }
}

store.subscribe(renderSession)

document.addEventListener('click', (event) => {
  const target = event.target as HTMLElement
  const action = target.dataset.action
  const view = store.view
  if (action === 'whatif' && target.dataset.card) {
    void store.whatIf(target.dataset.card)
  } else if ((action === 'play' || action === 'commit-whatif') && target.dataset.card && view) {
    void store.play(view.scenario.our_seat, target.dataset.card)
  } else if (action === 'cancel-whatif') {
    store.cancelWhatIf()
  } else if (action === 'record-opponent' && view) {
    const select = el<HTMLSelectElement>('opponent-card')
    void store.play(Number(target.dataset.seat), select.value)
  } else if (target.classList.contains('chip') && target.dataset.zone && target.dataset.card) {
    editor = removeCard(editor, target.dataset.zone as 'ourHand' | 'unseen', target.dataset.card)
    renderEditor()
  }
})

el('editor-add-hand').addEventListener('click', () => {
  const input = el<HTMLInputElement>('editor-card-input')
  const result = addCard(editor, 'ourHand', input.value.trim().toUpperCase())
  editor = result.editor
  el('editor-errors').innerHTML = result.error ? `<li>${result.error}</li>` : ''
  if (!result.error) input.value = ''
  renderEditor()
})

el('editor-add-unseen').addEventListener('click', () => {
  const input = el<HTMLInputElement>('editor-card-input')
  const result = addCard(editor, 'unseen', input.value.trim().toUpperCase())
  editor = result.editor
  el('editor-errors').innerHTML = result.error ? `<li>${result.error}</li>` : ''
  if (!result.error) input.value = ''
  renderEditor()
})

el('editor-preset').addEventListener('click', () => {
  editor = { ...SHOWCASE_PRESET, ourHand: [...SHOWCASE_PRESET.ourHand], unseen: [...SHOWCASE_PRESET.unseen] }
  renderEditor()
})

el('editor-clear').addEventListener('click', () => {
  editor = emptyEditor()
  renderEditor()
})

el('editor-trump').addEventListener('change', () => {
  editor = { ...editor, trump: el<HTMLInputElement>('editor-trump').value }
})

el('editor-declarer-points').addEventListener('change', () => {
  editor = { ...editor, declarerPoints: Number(el<HTMLInputElement>('editor-declarer-points').value) }
})

el('editor-defender-points').addEventListener('change', () => {
  editor = { ...editor, defenderPoints: Number(el<HTMLInputElement>('editor-defender-points').value) }
})

el('editor-submit').addEventListener('click', () => {
  try {
    void store.start(toScenario(editor))
  } catch (err) {
    el('editor-errors').innerHTML = `<li>${err instanceof Error ? err.message : err}</li>`
  }
})

el('undo-button').addEventListener('click', () => {
  void store.undo()
})

renderEditor()
renderSession()
