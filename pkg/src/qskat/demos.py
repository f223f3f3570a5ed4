"""Reference game configurations: the four-card two-player game and the
nine-card three-player end-game used throughout the tests and the CLI."""

from __future__ import annotations

from .encoding import (
    Card,
    DealSpec,
    GameType,
    GroupConstraint,
    Suit,
    build_order,
    initial_state,
    make_layout,
    parse_cards,
)
from .gates import EvolutionMode, GameCircuit, HybridRunner
from .qsim import SparseState

TOY_DECK = parse_cards(["CA", "C10", "CK", "CQ"])

TOY_STAGES = ("initial", "a-played", "b-played", "trick1", "final")


def toy_spec() -> DealSpec:
    """Two players, two cards each, clubs side suit of a spades game."""
    return DealSpec(
        deck=TOY_DECK,
        players=2,
        hand_size=2,
        skat_size=0,
        game=GameType("suit", Suit.SPADES),
    )


def toy_circuit() -> GameCircuit:
    spec = toy_spec()
    layout = make_layout(spec)
    return GameCircuit(layout, build_order(spec.deck, spec.game))


def toy_stage_states() -> dict[str, SparseState]:
    """All five observation points of the four-card game, in order.

    The forced second-round plays run through the same k=1 card-play gates,
    conditioned on the ancillas raised after the first trick.
    """
    spec = toy_spec()
    circuit = toy_circuit()
    states: dict[str, SparseState] = {}
    state = initial_state(spec, circuit.layout)
    states["initial"] = state
    state = circuit.cp_gate(state, 0, 2)
    states["a-played"] = state
    state = circuit.cp_gate(state, 1, 2)
    states["b-played"] = state
    state = circuit.reset_ancillas(state)
    state = circuit.tt_gate(state, 2)
    states["trick1"] = state
    state = circuit.cp_gate(state, 0, 1)
    state = circuit.cp_gate(state, 1, 1)
    state = circuit.reset_ancillas(state)
    state = circuit.tt_gate(state, 2)
    states["final"] = state
    return states


def toy_state(stage: str) -> SparseState:
    if stage not in TOY_STAGES:
        raise ValueError(f"stage must be one of {TOY_STAGES}")
    return toy_stage_states()[stage]


def toy_script() -> list[dict]:
    """Game script replaying the full four-card evolution."""
    return [
        {"op": "cp", "player": 0, "k": 2},
        {"op": "cp", "player": 1, "k": 2},
        {"op": "reset"},
        {"op": "tt", "k": 2},
        {"op": "cp", "player": 0, "k": 1},
        {"op": "cp", "player": 1, "k": 1},
        {"op": "reset"},
        {"op": "tt", "k": 2},
    ]


# --- nine-card showcase -------------------------------------------------------

SHOWCASE_HAND = parse_cards(["H10", "HQ", "H7"])
SHOWCASE_UNSEEN = parse_cards(["CJ", "SJ", "HJ", "S7", "HA", "H8"])
SHOWCASE_OUR_SEAT = 0
SHOWCASE_DECLARER_SEAT = 2
# 48 defender points after seven tricks leave 120 - 48 - 30 (still in play)
# on the declarer's side.
SHOWCASE_DECLARER_POINTS = 42
SHOWCASE_DEFENDER_POINTS = 48


def showcase_spec() -> DealSpec:
    """Nine cards, three seats; opponents split the trumps 2/2, hearts 1/1."""
    game = GameType("suit", Suit.SPADES)
    order = build_order(SHOWCASE_HAND + SHOWCASE_UNSEEN, game)
    trumps = tuple(c for c in SHOWCASE_UNSEEN if order.is_trump(c))
    hearts = tuple(c for c in SHOWCASE_UNSEEN if not order.is_trump(c))
    groups = []
    for seat in (1, 2):
        groups.append(GroupConstraint(trumps, seat, len(trumps) // 2))
        groups.append(GroupConstraint(hearts, seat, len(hearts) // 2))
    return DealSpec(
        deck=SHOWCASE_HAND + SHOWCASE_UNSEEN,
        players=3,
        hand_size=3,
        skat_size=0,
        game=game,
        constraints=tuple((c, SHOWCASE_OUR_SEAT) for c in SHOWCASE_HAND),
        group_constraints=tuple(groups),
    )


def showcase_circuit(mode: EvolutionMode = EvolutionMode.EXACT) -> GameCircuit:
    spec = showcase_spec()
    return GameCircuit(make_layout(spec), build_order(spec.deck, spec.game), mode)


def showcase_initial_state() -> SparseState:
    spec = showcase_spec()
    return initial_state(spec, make_layout(spec))


def showcase_fixed_lead(card: Card) -> SparseState:
    """Initial belief state with our lead pinned to one card."""
    circuit = showcase_circuit()
    return circuit.fixed_first_card(showcase_initial_state(), SHOWCASE_OUR_SEAT, card)


def showcase_hybrid_runner() -> HybridRunner:
    circuit = showcase_circuit(EvolutionMode.HYBRID_LEGAL)
    return HybridRunner(circuit, showcase_initial_state(), leader=SHOWCASE_OUR_SEAT)


def showcase_script(lead: Card) -> list[dict]:
    """Rule-free evolution script with our first card pinned to `lead`."""
    script: list[dict] = [
        {"op": "fixed", "player": SHOWCASE_OUR_SEAT, "card": lead.shorthand()},
        {"op": "cp", "player": 1, "k": 3},
        {"op": "cp", "player": 2, "k": 3},
        {"op": "reset"},
        {"op": "tt", "k": 3},
    ]
    for k in (2, 1):
        for seat in (0, 1, 2):
            script.append({"op": "cp", "player": seat, "k": k})
        script.append({"op": "reset"})
        script.append({"op": "tt", "k": 3})
    return script
