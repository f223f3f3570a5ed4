"""Classical ground truth: legal moves, trick resolution, double-dummy
minimax over open hands, path counting and card-quality evaluation.

Every quantum result in this package is cross-checked against these
routines.  The solver is a plain transposition-free minimax at desk scale;
the declarer maximizes the declarer party's points and the two defenders
act as one minimizing agent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

from .encoding import (
    Card,
    Deal,
    DealSpec,
    EnumerationCapExceeded,
    TrickOrder,
    build_order,
    enumerate_deals,
)


@dataclass(frozen=True)
class PlayState:
    """Open-card position: hands, trick in progress, and party points."""

    hands: tuple[tuple[Card, ...], ...]
    trick: tuple[tuple[int, Card], ...]  # (seat, card) in play order
    leader: int
    declarer: int
    declarer_points: int = 0
    defender_points: int = 0

    @property
    def players(self) -> int:
        return len(self.hands)

    @property
    def to_move(self) -> int:
        return (self.leader + len(self.trick)) % self.players

    @property
    def terminal(self) -> bool:
        return not self.trick and all(len(h) == 0 for h in self.hands)

    def total_points(self) -> int:
        in_play = sum(c.points for h in self.hands for c in h)
        in_play += sum(c.points for _, c in self.trick)
        return self.declarer_points + self.defender_points + in_play


@dataclass(frozen=True)
class SolveResult:
    declarer_points: int
    defender_points: int
    line: tuple[Card, ...]


def legal_from_hand(hand: Sequence[Card], led: Optional[Card], order: TrickOrder) -> list[Card]:
    """Follow the led card's effective suit if possible, else anything."""
    cards = sorted(hand, key=order.sort_key)
    if led is None:
        return cards
    led_suit = order.effective_suit(led)
    following = [c for c in cards if order.effective_suit(c) == led_suit]
    return following or cards


def legal_moves(state: PlayState, seat: int, order: TrickOrder) -> list[Card]:
    if seat != state.to_move:
        raise ValueError(f"seat {seat} is not to move")
    led = state.trick[0][1] if state.trick else None
    return legal_from_hand(state.hands[seat], led, order)


def trick_winner(played: Sequence[tuple[int, Card]], order: TrickOrder) -> int:
    """Seat of the supremum, or of the earliest-played maximal card."""
    if not played:
        raise ValueError("empty trick")
    cards = [c for _, c in played]
    maximal = [
        (seat, c)
        for seat, c in played
        if not any(order.beats(other, c) is True for other in cards if other != c)
    ]
    return maximal[0][0]


def play_card(state: PlayState, card: Card, order: TrickOrder) -> PlayState:
    """Advance by one card; resolves the trick when every seat has played."""
    seat = state.to_move
    if card not in state.hands[seat]:
        raise ValueError(f"{card} is not in seat {seat}'s hand")
    if card not in legal_moves(state, seat, order):
        raise ValueError(f"{card} is not a legal play for seat {seat}")
    hands = list(state.hands)
    hands[seat] = tuple(c for c in hands[seat] if c != card)
    trick = state.trick + ((seat, card),)
    if len(trick) < state.players:
        return replace(state, hands=tuple(hands), trick=trick)
    winner = trick_winner(trick, order)
    points = sum(c.points for _, c in trick)
    decl = state.declarer_points
    defn = state.defender_points
    if winner == state.declarer:
        decl += points
    else:
        defn += points
    return PlayState(
        hands=tuple(hands),
        trick=(),
        leader=winner,
        declarer=state.declarer,
        declarer_points=decl,
        defender_points=defn,
    )


def state_from_deal(deal: Deal, spec: DealSpec, declarer: int, leader: int,
                    declarer_points: int = 0, defender_points: int = 0) -> PlayState:
    hands = tuple(deal.hand(spec, seat) for seat in range(spec.players))
    return PlayState(
        hands=hands,
        trick=(),
        leader=leader,
        declarer=declarer,
        declarer_points=declarer_points,
        defender_points=defender_points,
    )


def solve_deal(state: PlayState, order: TrickOrder) -> SolveResult:
    """Minimax value of an open position.

    Ties between equally valued moves break toward the first card in
    canonical deck order, which keeps principal variations deterministic.
    """
    memo: dict[tuple, tuple[int, Optional[Card]]] = {}

    def future(hands: tuple[tuple[Card, ...], ...], trick: tuple[tuple[int, Card], ...],
               leader: int) -> tuple[int, Optional[Card]]:
        if not trick and all(len(h) == 0 for h in hands):
            return 0, None
        key = (hands, trick, leader)
        hit = memo.get(key)
        if hit is not None:
            return hit
        seat = (leader + len(trick)) % len(hands)
        led = trick[0][1] if trick else None
        maximizing = seat == state.declarer
        best_value: Optional[int] = None
        best_move: Optional[Card] = None
        for card in legal_from_hand(hands[seat], led, order):
            new_hands = list(hands)
            new_hands[seat] = tuple(c for c in new_hands[seat] if c != card)
            new_trick = trick + ((seat, card),)
            if len(new_trick) < len(hands):
                value, _ = future(tuple(new_hands), new_trick, leader)
            else:
                winner = trick_winner(new_trick, order)
                gained = sum(c.points for _, c in new_trick)
                value, _ = future(tuple(new_hands), (), winner)
                if winner == state.declarer:
                    value += gained
            if best_value is None or (value > best_value if maximizing else value < best_value):
                best_value = value
                best_move = card
        memo[key] = (best_value, best_move)
        return best_value, best_move

    gained, _ = future(state.hands, state.trick, state.leader)
    trick_pool = sum(c.points for _, c in state.trick)
    in_play = sum(c.points for h in state.hands for c in h) + trick_pool
    declarer_total = state.declarer_points + gained
    defender_total = state.defender_points + (in_play - gained)

    line: list[Card] = []
    hands, trick, leader = state.hands, state.trick, state.leader
    while not (not trick and all(len(h) == 0 for h in hands)):
        _, move = future(hands, trick, leader)
        assert move is not None
        seat = (leader + len(trick)) % len(hands)
        line.append(move)
        new_hands = list(hands)
        new_hands[seat] = tuple(c for c in new_hands[seat] if c != move)
        hands = tuple(new_hands)
        trick = trick + ((seat, move),)
        if len(trick) == len(hands):
            leader = trick_winner(trick, order)
            trick = ()
    return SolveResult(declarer_total, defender_total, tuple(line))


def declarer_wins(declarer_points: int, defender_points: int) -> bool:
    """Strictly more than half of all counted points wins; exactly half loses."""
    return 2 * declarer_points > declarer_points + defender_points


def card_quality(
    spec: DealSpec,
    candidate: Card,
    *,
    our_seat: int,
    declarer: int,
    leader: Optional[int] = None,
    declarer_points: int = 0,
    defender_points: int = 0,
    cap: int = 10**6,
) -> tuple[int, int]:
    """(wins, total): deals where leading `candidate` and then playing
    optimally keeps the declarer at or below half of the counted points."""
    order = build_order(spec.deck, spec.game)
    deals = enumerate_deals(spec, cap=cap)
    if leader is None:
        leader = our_seat
    wins = 0
    for deal in deals:
        start = state_from_deal(
            deal, spec, declarer, leader,
            declarer_points=declarer_points, defender_points=defender_points,
        )
        if candidate not in start.hands[our_seat]:
            raise ValueError(f"{candidate} is not in our hand")
        after = play_card(start, candidate, order)
        result = solve_deal(after, order)
        if not declarer_wins(result.declarer_points, result.defender_points):
            wins += 1
    return wins, len(deals)


def count_paths(
    state: PlayState,
    order: TrickOrder,
    *,
    favorable: Optional[Callable[[int, int], bool]] = None,
    cap: int = 10**7,
) -> tuple[int, int]:
    """(all, winning) legal play sequences from a position.

    ``favorable`` judges terminal (declarer, defender) totals; the default
    marks paths where the declarer party takes strictly more than half.
    """
    if favorable is None:
        favorable = declarer_wins
    counts = [0, 0]

    def walk(st: PlayState) -> None:
        if st.terminal:
            counts[0] += 1
            if counts[0] > cap:
                raise EnumerationCapExceeded(f"path enumeration exceeded cap of {cap}")
            if favorable(st.declarer_points, st.defender_points):
                counts[1] += 1
            return
        for card in legal_moves(st, st.to_move, order):
            walk(play_card(st, card, order))

    walk(state)
    return counts[0], counts[1]


def branching_geomean(games: Sequence[Sequence[float]]) -> float:
    """Mean over games of the geometric mean of per-move branching factors."""
    if not games:
        raise ValueError("no games given")
    total = 0.0
    for factors in games:
        if not factors:
            raise ValueError("a game has no recorded moves")
        if any(b < 1 for b in factors):
            raise ValueError("branching factors must be at least 1")
        log_sum = sum(math.log(b) for b in factors)
        total += math.exp(log_sum / len(factors))
    return total / len(games)


def playout_branching_factors(state: PlayState, order: TrickOrder,
                              pick: Callable[[list[Card]], Card]) -> list[float]:
    """Branching factors recorded along one playout driven by `pick`."""
    factors: list[float] = []
    st = state
    while not st.terminal:
        moves = legal_moves(st, st.to_move, order)
        factors.append(float(len(moves)))
        st = play_card(st, pick(moves), order)
    return factors
