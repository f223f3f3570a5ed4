"""Game-evolution unitaries over a card layout.

The conditioned gate products that drive a game (simultaneous card play,
ancilla updates, trick taking) are realized sparsely: instead of
materializing every control pattern as a circuit, each operator walks the
keys actually present in the support and applies the block the pattern
selects.  That is combinatorially the same map, evaluated only where it can
fire.

Two branches can land on the same basis key once their distinguishing work
registers have been consumed (the last trick of a game is the typical
case).  Those registers are traced out rather than materialized, so
coinciding branches combine by probability: the merged amplitude is the
square root of the summed probabilities.  Measurement statistics on the
card register are identical to the fully materialized construction, and the
norm is preserved exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from .encoding import HAND, STACK, TABLE, Card, CardLayout, TrickOrder
from .qsim import SparseState

_REAL_ATOL = 1e-9


class EvolutionMode(Enum):
    """EXACT splits over every hand card, ignoring suit-following (the mode
    all four-card reference numbers assume); HYBRID_LEGAL expands each
    branch over its rule-legal moves only."""

    EXACT = "exact"
    HYBRID_LEGAL = "hybrid"


@dataclass(frozen=True)
class RoundPlan:
    """One trick-taking round: 1-based index and the seats in play order."""

    index: int
    player_order: tuple[int, ...]
    cards_in_hand: int  # k: cards each player still holds entering the round

    def __post_init__(self) -> None:
        if self.cards_in_hand < 1:
            raise ValueError("round plan needs at least one card per hand")


def round_plans(hand_size: int, players: int) -> list[RoundPlan]:
    order = tuple(range(players))
    return [RoundPlan(i, order, hand_size + 1 - i) for i in range(1, hand_size + 1)]


def _merge_probability(out: dict[int, complex], key: int, amp: complex) -> None:
    """Combine colliding branches by probability (traced work registers)."""
    if abs(amp.imag) > _REAL_ATOL:
        raise ValueError("game evolution produced a non-real amplitude")
    prev = out.get(key)
    if prev is None:
        out[key] = amp
    else:
        out[key] = math.sqrt(
            prev.real * prev.real + prev.imag * prev.imag + amp.real * amp.real
        ) + 0.0j


class GameCircuit:
    """Evolution operators bound to one layout and trick order."""

    def __init__(self, layout: CardLayout, order: TrickOrder,
                 mode: EvolutionMode = EvolutionMode.EXACT):
        self.layout = layout
        self.order = order
        self.mode = mode

    # -- per-key classical views ------------------------------------------

    def hand_positions(self, key: int, seat: int) -> list[int]:
        lay = self.layout
        return [
            i for i in range(lay.n_cards)
            if lay.holder_code(key, i) == seat
            and lay.location(key, i) == HAND
            and lay.ancilla(key, i) == 0
        ]

    def table_positions(self, key: int) -> list[int]:
        lay = self.layout
        return [i for i in range(lay.n_cards) if lay.location(key, i) == TABLE]

    # -- operators ----------------------------------------------------------

    def play_single_card(self, state: SparseState, card: Card) -> SparseState:
        """Move one named card hand->table wherever its ancilla control fires."""
        lay = self.layout
        pos = lay.card_index(card)
        out: dict[int, complex] = {}
        for key, amp in state.entries.items():
            if lay.ancilla(key, pos) == 0:
                if lay.location(key, pos) != HAND:
                    raise ValueError(
                        f"{card} has a live ancilla control but is not in a hand"
                    )
                key = lay.set_location(key, pos, TABLE)
            _merge_probability(out, key, amp)
        return SparseState(state.width, out)

    def cp_gate(self, state: SparseState, player: int, k: int) -> SparseState:
        """Split every branch over the k cards `player` can put on the table."""
        lay = self.layout
        if k < 1:
            raise ValueError("k must be at least 1")
        factor = 1.0 / math.sqrt(k)
        out: dict[int, complex] = {}
        for key, amp in state.entries.items():
            hand = self.hand_positions(key, player)
            if len(hand) != k:
                raise ValueError(
                    f"branch holds {len(hand)} cards for player {player}, expected {k}"
                )
            for pos in hand:
                child = lay.set_location(key, pos, TABLE)
                _merge_probability(out, child, amp * factor)
        return SparseState(state.width, out)

    def fixed_first_card(self, state: SparseState, player: int, card: Card) -> SparseState:
        """Deterministically play one known card from `player`'s hand."""
        lay = self.layout
        pos = lay.card_index(card)
        out: dict[int, complex] = {}
        for key, amp in state.entries.items():
            if (
                lay.holder_code(key, pos) != player
                or lay.location(key, pos) != HAND
                or lay.ancilla(key, pos) != 0
            ):
                raise ValueError(f"{card} is not in player {player}'s hand on every branch")
            _merge_probability(out, lay.set_location(key, pos, TABLE), amp)
        return SparseState(state.width, out)

    def reset_ancillas(self, state: SparseState) -> SparseState:
        """Raise the ancilla of every played (table or stack) card to |1>."""
        lay = self.layout
        out: dict[int, complex] = {}
        for key, amp in state.entries.items():
            for i in range(lay.n_cards):
                if lay.location(key, i) != HAND:
                    key = lay.set_ancilla(key, i, 1)
            _merge_probability(out, key, amp)
        return SparseState(state.width, out)

    def tt_gate(self, state: SparseState, k: int) -> SparseState:
        """Sweep the k table cards to the stack of the trick winner.

        The layout orders cards non-increasing in the trick order, so on a
        totally ordered trick the winning card is the one at the smallest
        layout position.
        """
        lay = self.layout
        out: dict[int, complex] = {}
        for key, amp in state.entries.items():
            table = self.table_positions(key)
            if len(table) != k:
                raise ValueError(f"branch has {len(table)} table cards, expected {k}")
            winner = lay.holder_code(key, min(table))
            for pos in table:
                key = lay.set_location(key, pos, STACK)
                key = lay.set_holder(key, pos, winner)
            _merge_probability(out, key, amp)
        return SparseState(state.width, out)

    def round_operator(self, state: SparseState, plan: RoundPlan) -> SparseState:
        """tt . reset . cp(last) . ... . cp(first) for one round."""
        if self.mode is not EvolutionMode.EXACT:
            raise ValueError("use HybridRunner for legality-aware evolution")
        for seat in plan.player_order:
            state = self.cp_gate(state, seat, plan.cards_in_hand)
        state = self.reset_ancillas(state)
        return self.tt_gate(state, len(plan.player_order))

    def run_game(self, state: SparseState, hand_size: int,
                 first_fix: Optional[tuple[int, Card]] = None) -> SparseState:
        """Full game; optionally pin the very first card of the first player."""
        for plan in round_plans(hand_size, self.layout.players):
            if plan.index == 1 and first_fix is not None:
                seat, card = first_fix
                state = self.fixed_first_card(state, seat, card)
                for other in plan.player_order:
                    if other != seat:
                        state = self.cp_gate(state, other, plan.cards_in_hand)
                state = self.reset_ancillas(state)
                state = self.tt_gate(state, len(plan.player_order))
            else:
                state = self.round_operator(state, plan)
        return state


@dataclass(frozen=True)
class TrickContext:
    leader: int
    plays: tuple[tuple[int, int], ...]  # (seat, layout position) in play order


@dataclass(frozen=True)
class SplitEvent:
    """One branch expansion: which seat acted and how many legal options."""

    key: int
    seat: int
    options: int


class HybridRunner:
    """Legality-aware evolution: branches split only over rule-legal cards.

    Branch metadata (who leads, what lies on the table in which order) is
    carried per key; it stands in for the sequence registers a full circuit
    would need and resolves incomparable tricks by the earliest-played
    maximal card.
    """

    def __init__(self, circuit: GameCircuit, state: SparseState, leader: int = 0):
        self.circuit = circuit
        self.state = state
        self.context: dict[int, TrickContext] = {
            key: TrickContext(leader, ()) for key in state.entries
        }
        self.split_log: list[SplitEvent] = []

    def _legal_positions(self, key: int, ctx: TrickContext, seat: int) -> list[int]:
        circuit = self.circuit
        hand = circuit.hand_positions(key, seat)
        if not ctx.plays:
            return hand
        led = circuit.layout.cards[ctx.plays[0][1]]
        led_suit = circuit.order.effective_suit(led)
        following = [
            p for p in hand
            if circuit.order.effective_suit(circuit.layout.cards[p]) == led_suit
        ]
        return following or hand

    def _winning_position(self, plays: Sequence[tuple[int, int]]) -> int:
        order = self.circuit.order
        cards = self.circuit.layout.cards
        positions = [p for _, p in plays]
        maximal = [
            p for p in positions
            if not any(
                order.beats(cards[q], cards[p]) is True for q in positions if q != p
            )
        ]
        for _, p in plays:  # earliest-played maximal card takes the trick
            if p in maximal:
                return p
        raise AssertionError("trick has no maximal card")

    def run_round(self) -> None:
        circuit = self.circuit
        lay = circuit.layout
        players = lay.players
        on_table = {len(ctx.plays) for ctx in self.context.values()}
        if len(on_table) != 1:
            raise ValueError("branches disagree on the trick length")
        for _turn in range(players - on_table.pop()):
            out: dict[int, complex] = {}
            ctx_out: dict[int, TrickContext] = {}
            for key, amp in self.state.entries.items():
                ctx = self.context[key]
                seat = (ctx.leader + len(ctx.plays)) % players
                legal = self._legal_positions(key, ctx, seat)
                if not legal:
                    raise ValueError(f"seat {seat} has no legal card on a branch")
                self.split_log.append(SplitEvent(key, seat, len(legal)))
                factor = 1.0 / math.sqrt(len(legal))
                for pos in legal:
                    child = lay.set_location(key, pos, TABLE)
                    child_ctx = TrickContext(ctx.leader, ctx.plays + ((seat, pos),))
                    if child in ctx_out and ctx_out[child] != child_ctx:
                        raise ValueError("conflicting trick contexts merged")
                    ctx_out[child] = child_ctx
                    _merge_probability(out, child, amp * factor)
            self.state = SparseState(self.state.width, out)
            self.context = ctx_out

        # reset + trick taking with metadata-resolved winners
        out = {}
        ctx_out = {}
        for key, amp in self.state.entries.items():
            ctx = self.context[key]
            win_pos = self._winning_position(ctx.plays)
            winner = lay.holder_code(key, win_pos)
            new_key = key
            for _, pos in ctx.plays:
                new_key = lay.set_ancilla(new_key, pos, 1)
                new_key = lay.set_location(new_key, pos, STACK)
                new_key = lay.set_holder(new_key, pos, winner)
            new_ctx = TrickContext(winner, ())
            game_over = not any(
                circuit.hand_positions(new_key, seat) for seat in range(players)
            )
            if new_key in ctx_out and ctx_out[new_key] != new_ctx and not game_over:
                # differing leaders would change future legality; after the
                # last trick the context is dead and the merge is harmless
                raise ValueError("conflicting trick contexts merged mid-game")
            ctx_out[new_key] = new_ctx
            _merge_probability(out, new_key, amp)
        self.state = SparseState(self.state.width, out)
        self.context = ctx_out

    def run_game(self, hand_size: int) -> SparseState:
        for _ in range(hand_size):
            self.run_round()
        return self.state


# --- replayable game scripts -------------------------------------------------


def run_script(circuit: GameCircuit, state: SparseState, script: Iterable[dict]) -> SparseState:
    """Apply an ordered list of {'op': 'cp'|'tt'|'reset'|'fixed', ...} steps."""
    for step in script:
        op = step["op"]
        if op == "cp":
            state = circuit.cp_gate(state, int(step["player"]), int(step["k"]))
        elif op == "tt":
            state = circuit.tt_gate(state, int(step["k"]))
        elif op == "reset":
            state = circuit.reset_ancillas(state)
        elif op == "fixed":
            state = circuit.fixed_first_card(state, int(step["player"]), Card.parse(step["card"]))
        else:
            raise ValueError(f"unknown script op {op!r}")
    return state
