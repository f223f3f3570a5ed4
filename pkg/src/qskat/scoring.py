"""Score operator, favorable projection, quantum counting and the payoff
model.

The primary win-probability path is exact projection of the final sparse
state; quantum counting is exposed for uniform-amplitude preparations as a
demonstrator of the Grover-iterate phase readout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .encoding import CARD_POINTS, Card, CardLayout, GameType, STACK, TrickOrder
from .qsim import SparseState, expectation

DECK_TOTAL_POINTS = 120  # full 32-card deck; 30 per suit


def deck_points(cards: Iterable[Card]) -> int:
    return sum(c.points for c in cards)


@dataclass(frozen=True)
class ScoreOperator:
    """Diagonal observable: point value of the cards in a party's stacks."""

    layout: CardLayout
    seats: tuple[int, ...]

    def value(self, key: int) -> float:
        lay = self.layout
        total = 0
        for i in range(lay.n_cards):
            if lay.location(key, i) == STACK and lay.holder_code(key, i) in self.seats:
                total += lay.cards[i].points
        return float(total)

    def diagonal(self, support: Iterable[int]) -> dict[int, float]:
        return {k: self.value(k) for k in support}


def expected_score(state: SparseState, layout: CardLayout,
                   seats: int | Sequence[int]) -> float:
    """<state| S |state> for the given seat (or party of seats)."""
    if isinstance(seats, int):
        seats = (seats,)
    op = ScoreOperator(layout, tuple(seats))
    return expectation(state, op.value)


@dataclass(frozen=True)
class FavorableProjector:
    """Marks basis states where a party's stack points strictly exceed half
    of the counted total (exactly half is a loss for the scoring party)."""

    layout: CardLayout
    seats: tuple[int, ...]
    head_start: int = 0
    opponent_head_start: int = 0

    def matches(self, key: int) -> bool:
        mine = ScoreOperator(self.layout, self.seats).value(key) + self.head_start
        in_stacks = sum(
            self.layout.cards[i].points
            for i in range(self.layout.n_cards)
            if self.layout.location(key, i) == STACK
        )
        total = in_stacks + self.head_start + self.opponent_head_start
        return 2 * mine > total

    def diagonal(self, support: Iterable[int]) -> dict[int, float]:
        return {k: 1.0 if self.matches(k) else 0.0 for k in support}


@dataclass(frozen=True)
class WinProbability:
    probability: float
    dimension: int  # favorable support dimension


def win_probability(state: SparseState,
                    projector: FavorableProjector | Callable[[int], bool]) -> WinProbability:
    """Overlap with the favorable subspace plus its support dimension."""
    matches = projector.matches if isinstance(projector, FavorableProjector) else projector
    p = 0.0
    dim = 0
    for key, amp in state.entries.items():
        if matches(key):
            p += amp.real * amp.real + amp.imag * amp.imag
            dim += 1
    return WinProbability(p, dim)


# --- quantum counting --------------------------------------------------------


@dataclass(frozen=True)
class CountEstimate:
    phase: float      # modal t-bit phase in [0, 2*pi)
    estimate: float   # N_tot * sin^2(phase / 2)
    t: int
    n_total: int
    modal_outcome: int
    distribution: tuple[float, ...]

    def resolution_bound(self) -> float:
        """Standard counting-error bound for t phase bits."""
        return self.n_total * (2 * math.pi / 2**self.t + math.pi**2 / 4**self.t)


def quantum_count(marked: Callable[[int], bool], prep_set: Sequence[int],
                  t: int) -> CountEstimate:
    """Phase-estimate the Grover iterate G = A S0 A^dag S_f.

    A prepares the uniform superposition over ``prep_set``; S_f flips the
    sign of marked keys and S0 reflects about the prepared state.  The t
    counting qubits are driven through the standard phase-kickback plus
    inverse-QFT pipeline, evaluated exactly: the register after the
    controlled powers is sum_v |v> G^v |psi> / 2^(t/2), so the outcome
    distribution is the squared norm of its Fourier transform.  The modal
    outcome y gives phase = 2*pi*y/2^t and the count N_tot*sin^2(phase/2);
    the e^{+i theta} and e^{-i theta} eigenvalue branches land on y and
    2^t - y, which collapse to the same estimate under sin^2.
    """
    keys = list(prep_set)
    n = len(keys)
    if n == 0:
        raise ValueError("preparation set must be non-empty")
    if t < 1:
        raise ValueError("need at least one counting qubit")
    if t > 16:
        raise ValueError("counting register beyond the simulator width budget")

    signs = np.array([-1.0 if marked(k) else 1.0 for k in keys])
    psi = np.full(n, 1.0 / math.sqrt(n), dtype=complex)

    def grover(vec: np.ndarray) -> np.ndarray:
        flipped = signs * vec
        return 2.0 * psi * (psi.conj() @ flipped) - flipped

    m = 1 << t
    powers = np.empty((m, n), dtype=complex)
    vec = psi.copy()
    for v in range(m):
        powers[v] = vec
        vec = grover(vec)

    # inverse QFT on the counting register: outcome y picks up
    # sum_v exp(-2*pi*i*v*y/m) G^v |psi> / m
    transformed = np.fft.fft(powers, axis=0) / m
    dist = np.sum(np.abs(transformed) ** 2, axis=1)
    modal = int(np.argmax(dist))
    phase = 2.0 * math.pi * modal / m
    estimate = n * math.sin(phase / 2.0) ** 2
    return CountEstimate(
        phase=phase,
        estimate=estimate,
        t=t,
        n_total=n,
        modal_outcome=modal,
        distribution=tuple(float(p) for p in dist),
    )


# --- game value and payoff ----------------------------------------------------


def game_value(declarer_cards: Iterable[Card], game: GameType) -> int:
    """(matador run + 1) times the base value of the chosen game.

    The run counts consecutive top trumps from the jack of clubs downward
    that are all present ("with") or all absent ("without").
    """
    held = set(declarer_cards)
    chain = TrickOrder(game).trump_chain()
    with_top = chain[0] in held
    run = 0
    for card in chain:
        if (card in held) == with_top:
            run += 1
        else:
            break
    return (run + 1) * game.base_value


@dataclass(frozen=True)
class PayoffParams:
    seeger_fabian: bool = False
    loss_multiplier: int = 2


def payoff(p_win: float, value_won: int, value_lost: int,
           params: PayoffParams = PayoffParams()) -> float:
    """Single-game expected payoff; lost games count double and negative."""
    if not 0.0 <= p_win <= 1.0:
        raise ValueError("p_win must lie in [0, 1]")
    bonus = 50.0 if params.seeger_fabian else 0.0
    return p_win * (value_won + bonus) - (1.0 - p_win) * (
        params.loss_multiplier * value_lost + bonus
    )


def payoff_curve(choices: Mapping[str, int] | Mapping[str, tuple[int, int]],
                 p_grid: Sequence[float],
                 params: PayoffParams = PayoffParams()) -> list[tuple[float, str, float]]:
    """Rows (p, choice, payoff) over a probability grid, one curve per choice."""
    rows: list[tuple[float, str, float]] = []
    for p in p_grid:
        for label, value in choices.items():
            won, lost = value if isinstance(value, tuple) else (value, value)
            rows.append((float(p), label, payoff(float(p), won, lost, params)))
    return rows


def default_payoff_choices(run_length: int = 1) -> dict[str, int]:
    """One game value per declarer choice at a given matador run length."""
    from .encoding import BASE_VALUES, GRAND_BASE_VALUE, Suit

    choices = {}
    for suit in (Suit.DIAMONDS, Suit.HEARTS, Suit.SPADES, Suit.CLUBS):
        choices[suit.value] = (run_length + 1) * BASE_VALUES[suit]
    choices["G"] = (run_length + 1) * GRAND_BASE_VALUE
    return choices
