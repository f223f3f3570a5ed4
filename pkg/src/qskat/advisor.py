"""Belief-space advisor sessions.

A session tracks what one defender at the table actually knows: their own
hand, the set of deals consistent with the constraints and the plays
recorded so far, and the trick in progress.  Every play filters the deal
set (a card someone shows excludes the deals where they could not have
played it) and every evaluation re-solves the surviving deals.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .encoding import (
    Card,
    Deal,
    DealSpec,
    GameType,
    GroupConstraint,
    Suit,
    build_order,
    enumerate_deals,
    parse_cards,
)
from . import oracle
from .oracle import PlayState, declarer_wins, legal_from_hand, play_card, solve_deal


class IllegalMove(ValueError):
    """The recorded play is impossible in every consistent deal."""


class UnknownSession(KeyError):
    pass


@dataclass(frozen=True)
class Scenario:
    trump: Suit
    our_seat: int
    declarer_seat: int
    our_hand: tuple[Card, ...]
    unseen: tuple[Card, ...]
    constraints: str | tuple
    declarer_points: int
    defender_points: int
    leader: Optional[int] = None

    @classmethod
    def from_json(cls, obj: dict) -> "Scenario":
        our_hand = parse_cards(obj["our_hand"])
        unseen = parse_cards(obj["unseen"])
        if not our_hand:
            raise ValueError("our hand must not be empty")
        all_cards = our_hand + unseen
        if len(set(all_cards)) != len(all_cards):
            raise ValueError("duplicate cards in scenario")
        constraints = obj.get("constraints", "even-split")
        if isinstance(constraints, list):
            constraints = tuple(
                GroupConstraint(parse_cards(g["cards"]), int(g["holder"]), int(g["count"]))
                for g in constraints
            )
        return cls(
            trump=Suit(obj["trump"]),
            our_seat=int(obj.get("our_seat", 0)),
            declarer_seat=int(obj.get("declarer_seat", 2)),
            our_hand=our_hand,
            unseen=unseen,
            constraints=constraints,
            declarer_points=int(obj.get("declarer_points", 0)),
            defender_points=int(obj.get("defender_points", 0)),
            leader=obj.get("leader"),
        )

    def to_json(self) -> dict:
        constraints = self.constraints
        if isinstance(constraints, tuple):
            constraints = [
                {"cards": [c.shorthand() for c in g.cards], "holder": g.holder, "count": g.count}
                for g in constraints
            ]
        return {
            "trump": self.trump.value,
            "our_seat": self.our_seat,
            "declarer_seat": self.declarer_seat,
            "our_hand": [c.shorthand() for c in self.our_hand],
            "unseen": [c.shorthand() for c in self.unseen],
            "constraints": constraints,
            "declarer_points": self.declarer_points,
            "defender_points": self.defender_points,
        }

    @property
    def game(self) -> GameType:
        return GameType("suit", self.trump)

    @property
    def players(self) -> int:
        return 3

    def deal_spec(self) -> DealSpec:
        hand_size = len(self.our_hand)
        if len(self.unseen) != (self.players - 1) * hand_size:
            raise ValueError("unseen cards must fill the other hands exactly")
        groups: tuple[GroupConstraint, ...]
        if isinstance(self.constraints, tuple):
            groups = self.constraints
        elif self.constraints in ("2-trumps-1-heart-each", "even-split"):
            groups = self._even_split_groups()
        elif self.constraints in ("none", ""):
            groups = ()
        else:
            raise ValueError(f"unknown constraint preset {self.constraints!r}")
        return DealSpec(
            deck=self.our_hand + self.unseen,
            players=self.players,
            hand_size=hand_size,
            skat_size=0,
            game=self.game,
            constraints=tuple((c, self.our_seat) for c in self.our_hand),
            group_constraints=groups,
        )

    def _even_split_groups(self) -> tuple[GroupConstraint, ...]:
        """Split each effective-suit class of the unseen cards evenly."""
        order = build_order(self.our_hand + self.unseen, self.game)
        others = [s for s in range(self.players) if s != self.our_seat]
        classes: dict[str, list[Card]] = {}
        for c in self.unseen:
            classes.setdefault(order.effective_suit(c), []).append(c)
        groups = []
        for cards in classes.values():
            if len(cards) % len(others):
                raise ValueError("constraint preset needs an even split per suit class")
            share = len(cards) // len(others)
            for seat in others:
                groups.append(GroupConstraint(tuple(cards), seat, share))
        return tuple(groups)


def load_showcase_scenario() -> Scenario:
    text = resources.files("qskat.data").joinpath("showcase.json").read_text()
    return Scenario.from_json(json.loads(text))


@dataclass
class QualityRow:
    card: Card
    q_bar: int
    deals_total: int

    @property
    def p_win(self) -> float:
        return self.q_bar / self.deals_total if self.deals_total else 0.0

    def to_json(self) -> dict:
        return {
            "card": self.card.shorthand(),
            "q_bar": self.q_bar,
            "deals_total": self.deals_total,
            "p_win": round(self.p_win, 4),
        }


class AdvisorSession:
    """One analyst at one table; all mutations run under the session lock."""

    def __init__(self, scenario: Scenario, session_id: Optional[str] = None,
                 mode: str = "oracle"):
        self.id = session_id or str(uuid.uuid4())
        self.scenario = scenario
        self.mode = mode
        self.lock = threading.Lock()
        self.spec = scenario.deal_spec()
        self.order = build_order(self.spec.deck, self.spec.game)
        self.deals: list[Deal] = enumerate_deals(self.spec)
        self.history: list[tuple[int, Card]] = []
        leader = scenario.leader if scenario.leader is not None else scenario.our_seat
        self.our_hand: tuple[Card, ...] = scenario.our_hand
        self.trick: tuple[tuple[int, Card], ...] = ()
        self.leader: int = leader
        self.declarer_points = scenario.declarer_points
        self.defender_points = scenario.defender_points

    # -- known-information view ------------------------------------------

    @property
    def to_move(self) -> int:
        return (self.leader + len(self.trick)) % self.scenario.players

    @property
    def terminal(self) -> bool:
        return not self.trick and len(self.history) == len(self.spec.deck)

    def _deal_state(self, deal: Deal) -> PlayState:
        """Replay the recorded history inside one candidate deal."""
        state = oracle.state_from_deal(
            deal, self.spec,
            declarer=self.scenario.declarer_seat,
            leader=self.scenario.leader if self.scenario.leader is not None else self.scenario.our_seat,
            declarer_points=self.scenario.declarer_points,
            defender_points=self.scenario.defender_points,
        )
        for _seat, card in self.history:
            state = play_card(state, card, self.order)
        return state

    def _consistent(self, deal: Deal, seat: int, card: Card) -> bool:
        try:
            state = self._deal_state(deal)
        except ValueError:
            return False
        if card not in state.hands[seat] or seat != state.to_move:
            return False
        led = state.trick[0][1] if state.trick else None
        return card in legal_from_hand(state.hands[seat], led, self.order)

    def legal_cards(self, seat: int) -> list[Card]:
        """Moves the session accepts for a seat right now."""
        if self.terminal or seat != self.to_move:
            return []
        if seat == self.scenario.our_seat:
            led = self.trick[0][1] if self.trick else None
            return legal_from_hand(self.our_hand, led, self.order)
        candidates = {c for d in self.deals for c in d.hand(self.spec, seat)}
        played = {c for _, c in self.history}
        return sorted(
            (c for c in candidates - played
             if any(self._consistent(d, seat, c) for d in self.deals)),
            key=self.order.sort_key,
        )

    def evaluate_card(self, card: Card) -> QualityRow:
        """Quality of playing `card` ourselves, over the surviving deals."""
        if self.to_move != self.scenario.our_seat:
            raise IllegalMove("it is not our turn")
        if card not in self.legal_cards(self.scenario.our_seat):
            raise IllegalMove(f"{card} is not a legal play now")
        wins = 0
        for deal in self.deals:
            state = play_card(self._deal_state(deal), card, self.order)
            result = solve_deal(state, self.order)
            if not declarer_wins(result.declarer_points, result.defender_points):
                wins += 1
        return QualityRow(card, wins, len(self.deals))

    def candidates(self) -> list[QualityRow]:
        if self.terminal or self.to_move != self.scenario.our_seat:
            return []
        return [self.evaluate_card(c) for c in self.legal_cards(self.scenario.our_seat)]

    def play(self, seat: int, card: Card) -> Optional[QualityRow]:
        """Record a play; returns the pre-commit quality row for our own card."""
        if self.terminal:
            raise IllegalMove("the game is over")
        if seat != self.to_move:
            raise IllegalMove(f"seat {seat} is not to move")
        row: Optional[QualityRow] = None
        if seat == self.scenario.our_seat:
            row = self.evaluate_card(card)  # raises when illegal
            self.our_hand = tuple(c for c in self.our_hand if c != card)
        else:
            surviving = [d for d in self.deals if self._consistent(d, seat, card)]
            if not surviving:
                raise IllegalMove(f"{card} by seat {seat} fits no consistent deal")
            self.deals = surviving
        self.history.append((seat, card))
        self.trick = self.trick + ((seat, card),)
        if len(self.trick) == self.scenario.players:
            winner = oracle.trick_winner(self.trick, self.order)
            points = sum(c.points for _, c in self.trick)
            if winner == self.scenario.declarer_seat:
                self.declarer_points += points
            else:
                self.defender_points += points
            self.leader = winner
            self.trick = ()
        return row

    def view(self) -> dict:
        candidates = [row.to_json() for row in self.candidates()]
        recommended = None
        p_win = None
        if candidates:
            best = max(candidates, key=lambda r: r["q_bar"])
            recommended = best["card"]
            p_win = best["p_win"]
        out = {
            "id": self.id,
            "mode": self.mode,
            "scenario": self.scenario.to_json(),
            "our_hand": [c.shorthand() for c in self.our_hand],
            "history": [{"seat": s, "card": c.shorthand()} for s, c in self.history],
            "trick": [{"seat": s, "card": c.shorthand()} for s, c in self.trick],
            "leader": self.leader,
            "to_move": None if self.terminal else self.to_move,
            "deals_total": len(self.deals),
            "qualities": candidates,
            "recommended": recommended,
            "p_win": p_win,
            "points": {
                "declarer": self.declarer_points,
                "defenders": self.defender_points,
            },
            "terminal": self.terminal,
        }
        if self.terminal:
            out["result"] = {
                "declarer": self.declarer_points,
                "defenders": self.defender_points,
                "declarer_wins": declarer_wins(self.declarer_points, self.defender_points),
            }
        return out


class SessionStore:
    """In-memory session registry with optional JSON snapshots on disk."""

    def __init__(self, state_dir: Optional[str] = None):
        self.sessions: dict[str, AdvisorSession] = {}
        self.state_dir = state_dir
        self.lock = threading.Lock()
        if state_dir:
            self._load_snapshots()

    def create(self, scenario: Scenario, mode: str = "oracle") -> AdvisorSession:
        session = AdvisorSession(scenario, mode=mode)
        with self.lock:
            self.sessions[session.id] = session
        self._persist(session)
        return session

    def get(self, session_id: str) -> AdvisorSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSession(session_id) from None

    def delete(self, session_id: str) -> None:
        with self.lock:
            if session_id not in self.sessions:
                raise UnknownSession(session_id)
            del self.sessions[session_id]
        if self.state_dir:
            import os

            path = os.path.join(self.state_dir, f"{session_id}.json")
            if os.path.exists(path):
                os.remove(path)

    def _persist(self, session: AdvisorSession) -> None:
        if not self.state_dir:
            return
        import os

        os.makedirs(self.state_dir, exist_ok=True)
        snapshot = {
            "id": session.id,
            "mode": session.mode,
            "scenario": session.scenario.to_json(),
            "history": [{"seat": s, "card": c.shorthand()} for s, c in session.history],
        }
        with open(os.path.join(self.state_dir, f"{session.id}.json"), "w") as fh:
            json.dump(snapshot, fh, indent=2)

    def persist(self, session: AdvisorSession) -> None:
        self._persist(session)

    def _load_snapshots(self) -> None:
        import glob
        import os

        for path in glob.glob(os.path.join(self.state_dir, "*.json")):
            with open(path) as fh:
                snapshot = json.load(fh)
            scenario = Scenario.from_json(snapshot["scenario"])
            session = AdvisorSession(scenario, session_id=snapshot["id"],
                                     mode=snapshot.get("mode", "oracle"))
            for move in snapshot.get("history", []):
                session.play(int(move["seat"]), Card.parse(move["card"]))
            self.sessions[session.id] = session
