"""Cards, trick-taking order, deal enumeration and qubit layouts.

This module owns everything "classical" about the card register: the deck,
the dominance (trick-taking) partial order for a chosen game type, exact
counting and enumeration of deals under knowledge constraints, and the
mapping between deals and computational-basis bit patterns.

Bit conventions for a layout with n cards:

    card i occupies a contiguous block  [player bits][table][stack](+follow)
    a single scratch qubit sits right after the card blocks
    one ancilla per card fills the tail, ancilla of card i last-but-(n-i)

Location codes on (table, stack): 00 hand, 10 table, 11 stack.  01 is
declared invalid and never produced.  Player codes: one bit for two-player
games (0/1); two bits for three players, 00/01/10 the seats in play order
and 11 the skat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence


class Suit(str, Enum):
    CLUBS = "C"
    SPADES = "S"
    HEARTS = "H"
    DIAMONDS = "D"


# Suits in fixed descending prestige; side suits keep this order in layouts.
SUIT_ORDER = (Suit.CLUBS, Suit.SPADES, Suit.HEARTS, Suit.DIAMONDS)

RANKS = ("A", "10", "K", "Q", "J", "9", "8", "7")

# Dominance order of ranks inside one suit chain, highest first.  Jacks are
# never part of a suit chain; they always belong to the trump class.
SUIT_CHAIN = ("A", "10", "K", "Q", "9", "8", "7")

CARD_POINTS = {"7": 0, "8": 0, "9": 0, "10": 10, "J": 2, "Q": 3, "K": 4, "A": 11}

BASE_VALUES = {Suit.DIAMONDS: 9, Suit.HEARTS: 10, Suit.SPADES: 11, Suit.CLUBS: 12}
GRAND_BASE_VALUE = 24


class EncodingError(ValueError):
    """Malformed basis pattern or inconsistent layout request."""


class EnumerationCapExceeded(RuntimeError):
    """A deal or path enumeration would exceed the caller's guard cap."""


@dataclass(frozen=True, order=True)
class Card:
    suit: Suit
    rank: str

    def __post_init__(self) -> None:
        if self.rank not in RANKS:
            raise ValueError(f"unknown rank {self.rank!r}")

    @classmethod
    def parse(cls, text: str | "Card" | dict) -> "Card":
        """Accept 'H10' shorthand, {'suit': 'H', 'rank': '10'} or a Card."""
        if isinstance(text, Card):
            return text
        if isinstance(text, dict):
            return cls(Suit(text["suit"]), str(text["rank"]))
        text = text.strip().upper()
        if len(text) < 2:
            raise ValueError(f"bad card shorthand {text!r}")
        return cls(Suit(text[0]), text[1:])

    def shorthand(self) -> str:
        return f"{self.suit.value}{self.rank}"

    def to_json(self) -> dict:
        return {"suit": self.suit.value, "rank": self.rank}

    @property
    def points(self) -> int:
        return CARD_POINTS[self.rank]

    def __str__(self) -> str:  # pragma: no cover - repr sugar
        return self.shorthand()


def parse_cards(items: Iterable[str | Card | dict]) -> tuple[Card, ...]:
    return tuple(Card.parse(c) for c in items)


def full_deck() -> tuple[Card, ...]:
    return tuple(Card(s, r) for s in SUIT_ORDER for r in RANKS)


@dataclass(frozen=True)
class GameType:
    variant: str  # "suit" or "grand"
    trump: Optional[Suit] = None

    def __post_init__(self) -> None:
        if self.variant == "suit":
            if self.trump is None:
                raise ValueError("suit game needs a trump suit")
        elif self.variant == "grand":
            if self.trump is not None:
                raise ValueError("grand has no trump suit, only jacks")
        else:
            raise ValueError(f"unknown game variant {self.variant!r}")

    @classmethod
    def from_json(cls, obj: dict | str) -> "GameType":
        if isinstance(obj, str):
            if obj.upper() in ("G", "GRAND"):
                return cls("grand")
            return cls("suit", Suit(obj.upper()))
        if obj.get("variant") == "grand":
            return cls("grand")
        return cls("suit", Suit(obj["trump"]))

    def to_json(self) -> dict:
        if self.variant == "grand":
            return {"variant": "grand"}
        return {"variant": "suit", "trump": self.trump.value}

    @property
    def base_value(self) -> int:
        if self.variant == "grand":
            return GRAND_BASE_VALUE
        return BASE_VALUES[self.trump]


JACK_CHAIN = tuple(Card(s, "J") for s in SUIT_ORDER)  # clubs highest


class TrickOrder:
    """Dominance relation among cards for one game type.

    The trump class (four jacks, then the trump suit A 10 K Q 9 8 7 for suit
    games) is a single chain that sits above every side suit; side suits are
    chains of their own and mutually incomparable.
    """

    def __init__(self, game: GameType):
        self.game = game
        chain = list(JACK_CHAIN)
        if game.variant == "suit":
            chain += [Card(game.trump, r) for r in SUIT_CHAIN]
        self._trump_pos = {c: i for i, c in enumerate(chain)}
        self._side_pos = {r: i for i, r in enumerate(SUIT_CHAIN)}

    def is_trump(self, card: Card) -> bool:
        return card in self._trump_pos

    def effective_suit(self, card: Card) -> str:
        """Suit a card counts as when following: 'T' for the trump class."""
        return "T" if self.is_trump(card) else card.suit.value

    def beats(self, a: Card, b: Card) -> Optional[bool]:
        """True if a dominates b, False if b dominates a, None if incomparable."""
        if a == b:
            raise ValueError("beats() needs two distinct cards")
        ta, tb = self.is_trump(a), self.is_trump(b)
        if ta and tb:
            return self._trump_pos[a] < self._trump_pos[b]
        if ta != tb:
            return ta
        if a.suit == b.suit:
            return self._side_pos[a.rank] < self._side_pos[b.rank]
        return None

    def sort_key(self, card: Card) -> tuple:
        """Canonical non-increasing order: trump chain, then side suits."""
        if self.is_trump(card):
            return (0, 0, self._trump_pos[card])
        return (1, SUIT_ORDER.index(card.suit), self._side_pos[card.rank])

    def canonical(self, deck: Iterable[Card]) -> tuple[Card, ...]:
        return tuple(sorted(deck, key=self.sort_key))

    def trump_chain(self) -> tuple[Card, ...]:
        chain = list(JACK_CHAIN)
        if self.game.variant == "suit":
            chain += [Card(self.game.trump, r) for r in SUIT_CHAIN]
        return tuple(chain)


def build_order(deck: Sequence[Card], game: GameType) -> TrickOrder:
    if len(set(deck)) != len(deck):
        raise ValueError("deck contains duplicate cards")
    return TrickOrder(game)


@dataclass(frozen=True)
class GroupConstraint:
    """Exactly `count` of `cards` must end up with `holder`."""

    cards: tuple[Card, ...]
    holder: int
    count: int


@dataclass(frozen=True)
class DealSpec:
    deck: tuple[Card, ...]
    players: int
    hand_size: int
    skat_size: int
    game: GameType
    constraints: tuple[tuple[Card, int], ...] = ()
    group_constraints: tuple[GroupConstraint, ...] = ()

    def __post_init__(self) -> None:
        if self.players not in (2, 3):
            raise ValueError("only 2- or 3-player deals are supported")
        if self.skat_size not in (0, 2):
            raise ValueError("skat size must be 0 or 2")
        if self.players * self.hand_size + self.skat_size != len(self.deck):
            raise ValueError("deck size does not match players*hand_size+skat")
        if len(set(self.deck)) != len(self.deck):
            raise ValueError("deck contains duplicate cards")
        for card, holder in self.constraints:
            if card not in self.deck:
                raise ValueError(f"constraint on {card} which is not in the deck")
            if not 0 <= holder <= self.players:
                raise ValueError(f"constraint holder {holder} out of range")

    @property
    def skat_holder(self) -> int:
        return self.players

    @property
    def holders(self) -> tuple[int, ...]:
        hs = tuple(range(self.players))
        return hs + (self.skat_holder,) if self.skat_size else hs

    def capacity(self, holder: int) -> int:
        return self.skat_size if holder == self.skat_holder else self.hand_size

    @classmethod
    def from_json(cls, obj: dict) -> "DealSpec":
        deck = parse_cards(obj["deck"])
        constraints = tuple(
            (Card.parse(c["card"]), int(c["holder"]))
            for c in obj.get("constraints", [])
        )
        groups = tuple(
            GroupConstraint(parse_cards(g["cards"]), int(g["holder"]), int(g["count"]))
            for g in obj.get("group_constraints", [])
        )
        return cls(
            deck=deck,
            players=int(obj["players"]),
            hand_size=int(obj["hand_size"]),
            skat_size=int(obj.get("skat_size", 0)),
            game=GameType.from_json(obj["game"]),
            constraints=constraints,
            group_constraints=groups,
        )

    def to_json(self) -> dict:
        out = {
            "deck": [c.shorthand() for c in self.deck],
            "players": self.players,
            "hand_size": self.hand_size,
            "skat_size": self.skat_size,
            "game": self.game.to_json(),
        }
        if self.constraints:
            out["constraints"] = [
                {"card": c.shorthand(), "holder": h} for c, h in self.constraints
            ]
        if self.group_constraints:
            out["group_constraints"] = [
                {"cards": [c.shorthand() for c in g.cards], "holder": g.holder, "count": g.count}
                for g in self.group_constraints
            ]
        return out


@dataclass(frozen=True)
class Deal:
    """Holder code per deck position (seat index, or players == skat)."""

    holders: tuple[int, ...]

    def hand(self, spec: DealSpec, holder: int) -> tuple[Card, ...]:
        return tuple(
            c for c, h in zip(spec.deck, self.holders) if h == holder
        )


def _fixed_holders(spec: DealSpec) -> list[Optional[int]]:
    fixed: list[Optional[int]] = [None] * len(spec.deck)
    index = {c: i for i, c in enumerate(spec.deck)}
    for card, holder in spec.constraints:
        i = index[card]
        if fixed[i] is not None and fixed[i] != holder:
            raise ValueError(f"conflicting constraints on {card}")
        fixed[i] = holder
    return fixed


def deal_count(spec: DealSpec) -> int:
    """Exact number of deals satisfying the constraints (big integer)."""
    fixed = _fixed_holders(spec)
    remaining = {h: spec.capacity(h) for h in spec.holders}
    for holder in fixed:
        if holder is None:
            continue
        remaining[holder] -= 1
        if remaining[holder] < 0:
            raise ValueError("constraints exceed a holder's capacity")
    if spec.group_constraints:
        # Group constraints interact with each other and with fixed cards;
        # count by enumeration (these belief sets are small by construction).
        return sum(1 for _ in _generate(spec, cap=None))
    free = sum(1 for h in fixed if h is None)
    count = 1
    for holder in spec.holders:
        count *= math.comb(free, remaining[holder])
        free -= remaining[holder]
    return count


def _generate(spec: DealSpec, cap: Optional[int]) -> Iterator[Deal]:
    """Yield deals in lexicographic holder-vector order."""
    fixed = _fixed_holders(spec)
    n = len(spec.deck)
    remaining = {h: spec.capacity(h) for h in spec.holders}
    groups = spec.group_constraints
    group_left = [g.count for g in groups]
    group_members = [
        [i for i, c in enumerate(spec.deck) if c in set(g.cards)] for g in groups
    ]
    member_of = [[gi for gi, m in enumerate(group_members) if i in m] for i in range(n)]
    members_after = [
        [sum(1 for j in m if j > i) for i in range(-1, n)] for m in group_members
    ]

    holders_vec: list[int] = []
    produced = 0

    def feasible(i: int) -> bool:
        for gi in range(len(groups)):
            left = group_left[gi]
            if left < 0:
                return False
            if left > members_after[gi][i + 1]:
                return False
        return True

    def rec(i: int) -> Iterator[Deal]:
        nonlocal produced
        if i == n:
            produced += 1
            if cap is not None and produced > cap:
                raise EnumerationCapExceeded(
                    f"deal enumeration exceeded cap of {cap}"
                )
            yield Deal(tuple(holders_vec))
            return
        choices = (fixed[i],) if fixed[i] is not None else spec.holders
        for holder in choices:
            if remaining[holder] == 0:
                continue
            remaining[holder] -= 1
            touched = [gi for gi in member_of[i] if groups[gi].holder == holder]
            for gi in touched:
                group_left[gi] -= 1
            holders_vec.append(holder)
            if feasible(i):
                yield from rec(i + 1)
            holders_vec.pop()
            for gi in touched:
                group_left[gi] += 1
            remaining[holder] += 1

    yield from rec(0)


def enumerate_deals(spec: DealSpec, cap: int = 10**8) -> list[Deal]:
    """All deals consistent with the spec, lexicographically ordered."""
    if not spec.group_constraints:
        n = deal_count(spec)
        if n > cap:
            raise EnumerationCapExceeded(f"{n} deals exceed cap of {cap}")
    return list(_generate(spec, cap=cap))


# --- qubit layouts ---------------------------------------------------------

HAND, TABLE, STACK = "hand", "table", "stack"

_LOC_BITS = {HAND: (0, 0), TABLE: (1, 0), STACK: (1, 1)}
_BITS_LOC = {v: k for k, v in _LOC_BITS.items()}


@dataclass(frozen=True)
class CardLayout:
    """Qubit offsets for a deck ordered non-increasing in the trick order."""

    cards: tuple[Card, ...]
    players: int
    with_suit_follow: bool = False

    @property
    def player_bits(self) -> int:
        return 1 if self.players == 2 else 2

    @property
    def block(self) -> int:
        return self.player_bits + 2 + (1 if self.with_suit_follow else 0)

    @property
    def n_cards(self) -> int:
        return len(self.cards)

    @property
    def scratch_qubit(self) -> int:
        return self.n_cards * self.block

    def ancilla_qubit(self, i: int) -> int:
        return self.n_cards * self.block + 1 + i

    @property
    def width(self) -> int:
        return self.n_cards * self.block + 1 + self.n_cards

    def player_qubits(self, i: int) -> tuple[int, ...]:
        base = i * self.block
        return tuple(range(base, base + self.player_bits))

    def table_qubit(self, i: int) -> int:
        return i * self.block + self.player_bits

    def stack_qubit(self, i: int) -> int:
        return i * self.block + self.player_bits + 1

    def suit_follow_qubit(self, i: int) -> Optional[int]:
        if not self.with_suit_follow:
            return None
        return i * self.block + self.player_bits + 2

    def card_index(self, card: Card) -> int:
        try:
            return self.cards.index(card)
        except ValueError:
            raise EncodingError(f"{card} is not in this layout") from None

    # -- per-card bit field access on integer basis keys --

    def holder_code(self, key: int, i: int) -> int:
        code = 0
        for q in self.player_qubits(i):
            code = (code << 1) | ((key >> q) & 1)
        return code

    def set_holder(self, key: int, i: int, code: int) -> int:
        qs = self.player_qubits(i)
        for bit_pos, q in enumerate(qs):
            bit = (code >> (len(qs) - 1 - bit_pos)) & 1
            key = (key | (1 << q)) if bit else (key & ~(1 << q))
        return key

    def location(self, key: int, i: int) -> str:
        bits = ((key >> self.table_qubit(i)) & 1, (key >> self.stack_qubit(i)) & 1)
        loc = _BITS_LOC.get(bits)
        if loc is None:
            raise EncodingError(
                f"card {self.cards[i]} carries invalid location code 01"
            )
        return loc

    def set_location(self, key: int, i: int, loc: str) -> int:
        t, s = _LOC_BITS[loc]
        for q, bit in ((self.table_qubit(i), t), (self.stack_qubit(i), s)):
            key = (key | (1 << q)) if bit else (key & ~(1 << q))
        return key

    def ancilla(self, key: int, i: int) -> int:
        return (key >> self.ancilla_qubit(i)) & 1

    def set_ancilla(self, key: int, i: int, value: int) -> int:
        q = self.ancilla_qubit(i)
        return (key | (1 << q)) if value else (key & ~(1 << q))


def make_layout(spec: DealSpec, with_suit_follow: bool = False) -> CardLayout:
    order = build_order(spec.deck, spec.game)
    return CardLayout(order.canonical(spec.deck), spec.players, with_suit_follow)


def encode_deal(deal: Deal, layout: CardLayout, spec: DealSpec) -> int:
    """Basis key for an undealt-yet-unplayed position: all cards in hand."""
    index = {c: i for i, c in enumerate(spec.deck)}
    key = 0
    for pos, card in enumerate(layout.cards):
        holder = deal.holders[index[card]]
        key = layout.set_holder(key, pos, holder)
    return key


def decode_basis(key: int, layout: CardLayout) -> list[tuple[int, str, int]]:
    """Per layout position: (holder code, location, ancilla bit)."""
    if key >> layout.width:
        raise EncodingError("basis key has bits beyond the layout width")
    return [
        (layout.holder_code(key, i), layout.location(key, i), layout.ancilla(key, i))
        for i in range(layout.n_cards)
    ]


def deal_from_key(key: int, layout: CardLayout, spec: DealSpec) -> Deal:
    """Inverse of encode_deal for all-in-hand keys."""
    by_card = {}
    for i, (holder, loc, anc) in enumerate(decode_basis(key, layout)):
        if loc != HAND or anc != 0:
            raise EncodingError("key does not describe an initial deal")
        by_card[layout.cards[i]] = holder
    return Deal(tuple(by_card[c] for c in spec.deck))


def initial_state(spec: DealSpec, layout: Optional[CardLayout] = None, cap: int = 10**8):
    """Equal superposition over the encodings of every consistent deal."""
    from . import qsim

    if layout is None:
        layout = make_layout(spec)
    keys = [encode_deal(d, layout, spec) for d in enumerate_deals(spec, cap=cap)]
    return qsim.prepare_superposition(layout.width, keys)
