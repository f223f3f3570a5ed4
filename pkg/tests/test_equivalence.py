"""Cross-validation: the exact-mode quantum evolution must agree with the
classical oracle on every two-player totally ordered deck.

For such decks every hand is legal at every turn, each round splits both
engines uniformly, and the uniform-random-play win fraction averaged over
deals equals the projected win probability of the final sparse state.
"""

import itertools

import pytest

from qskat import oracle
from qskat.encoding import (
    Card,
    DealSpec,
    GameType,
    SUIT_CHAIN,
    Suit,
    build_order,
    enumerate_deals,
    full_deck,
    initial_state,
    make_layout,
)
from qskat.gates import GameCircuit
from qskat.oracle import count_paths, state_from_deal
from qskat.scoring import FavorableProjector, win_probability

SPADES = GameType("suit", Suit.SPADES)


def quantum_pwin(deck):
    spec = DealSpec(tuple(deck), 2, len(deck) // 2, 0, SPADES)
    layout = make_layout(spec)
    circuit = GameCircuit(layout, build_order(spec.deck, spec.game))
    state = circuit.run_game(initial_state(spec, layout), hand_size=len(deck) // 2)
    return win_probability(state, FavorableProjector(layout, (0,))).probability


def oracle_pwin(deck):
    spec = DealSpec(tuple(deck), 2, len(deck) // 2, 0, SPADES)
    order = build_order(spec.deck, spec.game)
    deals = enumerate_deals(spec)
    acc = 0.0
    for deal in deals:
        start = state_from_deal(deal, spec, declarer=0, leader=0)
        total, winning = count_paths(start, order)
        acc += winning / total
    return acc / len(deals)


def clubs_chain():
    return [Card(Suit.CLUBS, r) for r in SUIT_CHAIN]


def trump_chain():
    order = build_order(full_deck(), SPADES)
    return list(order.trump_chain())


def test_toy_deck_equivalence_exact():
    deck = [Card.parse(c) for c in ("CA", "C10", "CK", "CQ")]
    assert quantum_pwin(deck) == pytest.approx(oracle_pwin(deck), abs=1e-9)
    assert quantum_pwin(deck) == pytest.approx(5 / 12, abs=1e-12)


def test_all_four_card_side_suit_decks():
    chain = clubs_chain()
    for combo in itertools.combinations(chain, 4):
        assert quantum_pwin(list(combo)) == pytest.approx(
            oracle_pwin(list(combo)), abs=1e-9
        ), combo


def test_all_six_card_side_suit_decks():
    chain = clubs_chain()
    for combo in itertools.combinations(chain, 6):
        assert quantum_pwin(list(combo)) == pytest.approx(
            oracle_pwin(list(combo)), abs=1e-9
        ), combo


def test_sample_of_trump_chain_decks():
    """Trump chains mix jack and suit values; spot-check both sizes."""
    chain = trump_chain()
    picks4 = [chain[:4], chain[3:7], [chain[0], chain[4], chain[7], chain[10]]]
    picks6 = [chain[:6], chain[2:8], chain[5:11]]
    for deck in picks4 + picks6:
        assert quantum_pwin(deck) == pytest.approx(oracle_pwin(deck), abs=1e-9), deck


def test_hybrid_matches_weighted_random_playouts_with_incomparable_tricks():
    """Two side suits force discards: tricks can lack a supremum and branch
    factors vary, so the classical side must weight each path by the product
    of its choice probabilities."""
    from qskat.gates import EvolutionMode, HybridRunner
    from qskat.oracle import legal_moves, play_card, state_from_deal

    deck = [Card.parse(c) for c in ("HA", "HK", "CA", "CK")]
    spec = DealSpec(tuple(deck), 2, 2, 0, SPADES)
    order = build_order(spec.deck, spec.game)
    layout = make_layout(spec)
    circuit = GameCircuit(layout, order, EvolutionMode.HYBRID_LEGAL)
    runner = HybridRunner(circuit, initial_state(spec, layout), leader=0)
    state = runner.run_game(hand_size=2)
    assert abs(state.norm() - 1.0) < 1e-9
    quantum = win_probability(state, FavorableProjector(layout, (0,))).probability

    def weighted_win(st) -> float:
        if st.terminal:
            return 1.0 if 2 * st.declarer_points > st.declarer_points + st.defender_points else 0.0
        moves = legal_moves(st, st.to_move, order)
        return sum(weighted_win(play_card(st, m, order)) for m in moves) / len(moves)

    deals = enumerate_deals(spec)
    classical = sum(
        weighted_win(state_from_deal(d, spec, declarer=0, leader=0)) for d in deals
    ) / len(deals)
    assert abs(quantum - classical) <= 1e-9


def test_three_player_game_with_inert_skat():
    """Exact-mode evolution over a 3x2+2 deck: the two skat cards never
    move, stacked points equal the deck total minus the skat, and the
    projected win probability matches the classical playout average."""
    trump = list(build_order(full_deck(), SPADES).trump_chain())
    deck = tuple(trump[:8])
    spec = DealSpec(deck, 3, 2, 2, SPADES)
    order = build_order(spec.deck, spec.game)
    layout = make_layout(spec)
    circuit = GameCircuit(layout, order)
    state = circuit.run_game(initial_state(spec, layout), hand_size=2)
    assert abs(state.norm() - 1.0) < 1e-9

    from qskat.encoding import HAND, STACK

    deck_total = sum(c.points for c in deck)
    for key in state.entries:
        skat_positions = [
            i for i in range(layout.n_cards) if layout.holder_code(key, i) == 3
        ]
        assert len(skat_positions) == 2
        stacked = 0
        skat_points = 0
        for i in range(layout.n_cards):
            loc = layout.location(key, i)
            if i in skat_positions:
                assert loc == HAND
                skat_points += layout.cards[i].points
            else:
                assert loc == STACK
                stacked += layout.cards[i].points
        assert stacked == deck_total - skat_points

    quantum = win_probability(state, FavorableProjector(layout, (0,))).probability
    deals = enumerate_deals(spec)
    acc = 0.0
    for deal in deals:
        start = oracle.state_from_deal(deal, spec, declarer=0, leader=0)
        total, winning = oracle.count_paths(start, order)
        acc += winning / total
    assert abs(quantum - acc / len(deals)) <= 1e-9


def test_terminal_multisets_match():
    """Quantum final branches and oracle playouts visit identical
    (deal, declarer-points) multisets on a six-card deck."""
    deck = clubs_chain()[:6]
    spec = DealSpec(tuple(deck), 2, 3, 0, SPADES)
    order = build_order(spec.deck, spec.game)
    layout = make_layout(spec)
    circuit = GameCircuit(layout, order)

    oracle_outcomes: dict[int, int] = {}
    for deal in enumerate_deals(spec):
        start = state_from_deal(deal, spec, declarer=0, leader=0)

        def walk(st):
            if st.terminal:
                oracle_outcomes[st.declarer_points] = (
                    oracle_outcomes.get(st.declarer_points, 0) + 1
                )
                return
            for card in oracle.legal_moves(st, st.to_move, order):
                walk(oracle.play_card(st, card, order))

        walk(start)

    state = circuit.run_game(initial_state(spec, layout), hand_size=3)
    total_paths = sum(oracle_outcomes.values())
    from qskat.scoring import ScoreOperator

    op = ScoreOperator(layout, (0,))
    quantum_outcomes: dict[int, float] = {}
    for key, amp in state.entries.items():
        pts = int(op.value(key))
        quantum_outcomes[pts] = quantum_outcomes.get(pts, 0.0) + abs(amp) ** 2

    for pts, count in oracle_outcomes.items():
        assert quantum_outcomes.get(pts, 0.0) == pytest.approx(
            count / total_paths, abs=1e-9
        )
    assert set(quantum_outcomes) == set(oracle_outcomes)
