"""Live game state, placement validation, and per-slot scoring.

A game in progress is a partially filled slot list. The filled values cut
the empty slots into *bins*: maximal runs of consecutive empty slots, each
carrying the open interval of values that can still legally land there.
Every probability the advisor reports decomposes over those bins, because
each bin is an independent rescaled sub-game.

Slot indices are 1-based throughout, matching how players count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .strategies import StrategyTable, WinProbTable, boundary_slot

RAW_DRAW_MAX = 999


def normalize_draw(raw: int) -> float:
    """Map an integer draw 0..999 to the open unit interval via midpoints.

    The midpoint (raw + 0.5) / 1000 keeps the continuous theory applicable
    to the integer filter: no draw ever normalizes to exactly 0 or 1, and
    equal integers collide exactly (a repeat of a placed number is fatal).
    """
    if not isinstance(raw, int) or isinstance(raw, bool):
        raise ValueError(f"raw draw must be an integer, got {raw!r}")
    if not 0 <= raw <= RAW_DRAW_MAX:
        raise ValueError(f"raw draw {raw} outside 0..{RAW_DRAW_MAX}")
    return (raw + 0.5) / 1000.0


@dataclass(frozen=True)
class Bin:
    """A maximal run of empty slots and the value interval feeding it."""

    first_slot: int
    size: int
    lower: float
    upper: float

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def slots(self) -> range:
        return range(self.first_slot, self.first_slot + self.size)


@dataclass(frozen=True)
class SlotRecommendation:
    slot: int
    correct_so_far: float
    win_prob: float
    rank: int


@dataclass(frozen=True)
class GameState:
    """An n-slot list in progress. Value type: placements return new states.

    Invariants, enforced at construction: filled slots strictly increase in
    slot order, and the draw history holds exactly one value per filled slot.
    """

    n: int
    slots: tuple[float | None, ...]
    draw_history: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"game length must be >= 1, got {self.n}")
        if len(self.slots) != self.n:
            raise ValueError(f"expected {self.n} slots, got {len(self.slots)}")
        filled = [v for v in self.slots if v is not None]
        for v in filled:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"slot value {v} outside [0, 1]")
        for a, b in zip(filled, filled[1:]):
            if a >= b:
                raise ValueError("filled slots must be strictly increasing")
        if len(self.draw_history) != len(filled):
            raise ValueError(
                f"{len(filled)} filled slots but {len(self.draw_history)} recorded draws"
            )

    @classmethod
    def empty(cls, n: int) -> "GameState":
        return cls(n=n, slots=(None,) * n)

    @property
    def filled_count(self) -> int:
        return self.n - self.slots.count(None)

    @property
    def is_full(self) -> bool:
        return None not in self.slots

    def value_at(self, slot: int) -> float | None:
        if not 1 <= slot <= self.n:
            raise ValueError(f"slot {slot} outside 1..{self.n}")
        return self.slots[slot - 1]

    def place(self, slot: int, value: float) -> "GameState":
        """Commit ``value`` to 1-based ``slot``, returning the new state."""
        if slot not in feasible_slots(self, value):
            raise ValueError(f"value {value} cannot be placed in slot {slot}")
        new_slots = list(self.slots)
        new_slots[slot - 1] = value
        return GameState(
            n=self.n,
            slots=tuple(new_slots),
            draw_history=self.draw_history + (value,),
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "slots": [v for v in self.slots],
            "history": list(self.draw_history),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "GameState":
        """Parse the ``{n, slots, history}`` document.

        ``history`` may be omitted; it then defaults to the filled values in
        slot order (arrival order is unknowable from the slots alone).
        """
        n = int(doc["n"])
        slots = tuple(None if v is None else float(v) for v in doc["slots"])
        if "history" in doc:
            history = tuple(float(v) for v in doc["history"])
        else:
            history = tuple(v for v in slots if v is not None)
        return cls(n=n, slots=slots, draw_history=history)


def bins(state: GameState) -> list[Bin]:
    """Maximal runs of empty slots with their bounding values (0/1 at the ends)."""
    out: list[Bin] = []
    lower = 0.0
    run_start = None
    for idx, value in enumerate(state.slots, start=1):
        if value is None:
            if run_start is None:
                run_start = idx
            continue
        if run_start is not None:
            out.append(Bin(first_slot=run_start, size=idx - run_start, lower=lower, upper=value))
            run_start = None
        lower = value
    if run_start is not None:
        out.append(Bin(first_slot=run_start, size=state.n - run_start + 1, lower=lower, upper=1.0))
    return out


def bin_containing(state: GameState, x: float) -> Bin | None:
    """The bin whose open interval contains x, or None (elimination)."""
    for b in bins(state):
        if b.lower < x < b.upper:
            return b
    return None


def feasible_slots(state: GameState, x: float) -> list[int]:
    """Empty slots that can legally take x; empty list signals elimination."""
    b = bin_containing(state, x)
    return list(b.slots) if b is not None else []


def correct_so_far(state: GameState) -> float:
    """Probability the placements made so far are consistent with a final win.

    Multinomial over bin sizes times the product of bin-length powers: the
    remaining draws must land in the bins with exactly the right counts.
    """
    bin_list = bins(state)
    remaining = sum(b.size for b in bin_list)
    coeff = math.factorial(remaining)
    value = 1.0
    for b in bin_list:
        coeff //= math.factorial(b.size)
        value *= b.length**b.size
    return coeff * value


def win_prob_from_state(state: GameState, probs: WinProbTable) -> float:
    """Probability of completing the game from this state under ``probs``.

    Exact product decomposition: correct-so-far times the win probability of
    each bin's rescaled sub-game. Sub-games are scale invariant, so only the
    bin sizes enter through the table.
    """
    bin_list = bins(state)
    value = correct_so_far(state)
    for b in bin_list:
        if b.size > probs.n_max:
            raise ValueError(f"bin of size {b.size} exceeds table n_max {probs.n_max}")
        value *= probs.p[b.size]
    return value


def advise(state: GameState, x: float, probs: WinProbTable) -> list[SlotRecommendation]:
    """Score every feasible slot for draw x under a continuation strategy.

    Each candidate slot is scored by hypothetically placing x there and
    taking the exact win probability of the resulting state; rank 1 is the
    argmax, ties going to the lower slot. Recommendations come back in slot
    order carrying their ranks. An empty list means x fits nowhere.
    """
    candidates = feasible_slots(state, x)
    scored = []
    for slot in candidates:
        hypothetical = state.place(slot, x)
        scored.append(
            (slot, correct_so_far(hypothetical), win_prob_from_state(hypothetical, probs))
        )
    by_win = sorted(scored, key=lambda item: (-item[2], item[0]))
    rank_of = {slot: rank for rank, (slot, _, _) in enumerate(by_win, start=1)}
    return [
        SlotRecommendation(slot=slot, correct_so_far=cs, win_prob=wp, rank=rank_of[slot])
        for slot, cs, wp in scored
    ]


def best_slot(recommendations: list[SlotRecommendation]) -> SlotRecommendation | None:
    for rec in recommendations:
        if rec.rank == 1:
            return rec
    return None


def strategy_slot(state: GameState, x: float, strategy: StrategyTable) -> int | None:
    """Slot chosen by a strategy table for draw x, or None on elimination.

    Fast path equivalent to ``advise``'s argmax when the table and the win
    probabilities describe the same strategy: rescale x into its bin and
    look up the breakpoint row for the bin size.
    """
    b = bin_containing(state, x)
    if b is None:
        return None
    if b.size > strategy.n_max:
        raise ValueError(f"bin of size {b.size} exceeds strategy n_max {strategy.n_max}")
    rescaled = (x - b.lower) / (b.upper - b.lower)
    return b.first_slot + boundary_slot(strategy.row(b.size), rescaled) - 1


def state_json(state: GameState) -> str:
    return json.dumps(state.to_json_dict())


def state_from_json(text: str) -> GameState:
    return GameState.from_json_dict(json.loads(text))
