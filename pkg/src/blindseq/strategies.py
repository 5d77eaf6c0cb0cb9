"""Win probabilities and decision boundaries for blind number sequencing.

A length-``n`` game presents n iid uniform draws one at a time; each draw
must be committed to one of the n slots so that the final list is strictly
ascending. A (deterministic, memoryless) strategy is a family of step
functions, one per sub-game length k, encoded by their breakpoints
``0 = a[k][0] <= a[k][1] <= ... <= a[k][k] = 1``: a draw x landing in
``[a[k][j-1], a[k][j])`` goes to slot j of a k-slot subsequence.

Placing the first draw x of an n-game into slot k splits the game into two
independent sub-games of lengths k-1 and n-k on the intervals left and right
of x. Integrating over x gives the win-probability recursion

    p[n] = sum_k C(n-1, k-1) * p[k-1] * p[n-k]
                 * integral of x^(k-1) (1-x)^(n-k) over the slot-k interval

with p[0] = p[1] = 1. Everything in this module is built on that recursion:
the equal-spacing baseline (breakpoints j/k), the risk-tolerant optimum
(breakpoints equalizing adjacent slot-value curves), and the per-slot
scoring functions used by the live advisor.

All numbers are plain floats; published small-n rationals (3/4, 83/162,
377/726) are reproduced to ~1e-15 without a rational number type.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

DEFAULT_N_MAX = 64
HARD_N_MAX = 256


class StrategyKind(str, Enum):
    """How a strategy table was produced."""

    EQUAL_SPACING = "es"
    RISK_TOLERANT = "rt"
    CUSTOM = "custom"


def _check_length(n_max: int) -> None:
    if not isinstance(n_max, int) or n_max < 1:
        raise ValueError(f"game length must be a positive integer, got {n_max!r}")
    if n_max > HARD_N_MAX:
        raise ValueError(f"game length {n_max} exceeds the hard cap {HARD_N_MAX}")


@dataclass(frozen=True)
class StrategyTable:
    """Decision boundaries for every sub-game length up to ``n_max``.

    ``boundaries[k-1]`` is the breakpoint row for a k-slot sub-game:
    k+1 nondecreasing probabilities starting at 0 and ending at 1.
    Instances are immutable and safe to share across threads.
    """

    kind: StrategyKind
    boundaries: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if not self.boundaries:
            raise ValueError("strategy table needs at least one row")
        _check_length(len(self.boundaries))
        for k, row in enumerate(self.boundaries, start=1):
            if len(row) != k + 1:
                raise ValueError(f"row {k} must have {k + 1} entries, got {len(row)}")
            if row[0] != 0.0 or row[-1] != 1.0:
                raise ValueError(f"row {k} must start at 0 and end at 1")
            for j in range(1, len(row)):
                if row[j] < row[j - 1]:
                    raise ValueError(f"row {k} is not nondecreasing at index {j}")

    @property
    def n_max(self) -> int:
        return len(self.boundaries)

    def row(self, k: int) -> tuple[float, ...]:
        """Breakpoint row for a k-slot sub-game."""
        if not 1 <= k <= self.n_max:
            raise ValueError(f"row index {k} outside 1..{self.n_max}")
        return self.boundaries[k - 1]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n_max": self.n_max,
            "boundaries": [list(row) for row in self.boundaries],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "StrategyTable":
        return cls(
            kind=StrategyKind(doc["kind"]),
            boundaries=tuple(tuple(float(v) for v in row) for row in doc["boundaries"]),
        )

    @classmethod
    def custom(cls, rows: Iterable[Sequence[float]]) -> "StrategyTable":
        """Build a validated CUSTOM table from raw breakpoint rows."""
        return cls(kind=StrategyKind.CUSTOM, boundaries=tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class WinProbTable:
    """Win probabilities ``p[0..n_max]`` of a fixed strategy, p[0] = 1."""

    kind: StrategyKind
    p: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.p) < 2 or self.p[0] != 1.0 or self.p[1] != 1.0:
            raise ValueError("win probability table must start with p[0] = p[1] = 1")
        for n in range(1, len(self.p)):
            if not 0.0 < self.p[n] <= self.p[n - 1]:
                raise ValueError(f"p[{n}] = {self.p[n]} breaks monotone positivity")

    @property
    def n_max(self) -> int:
        return len(self.p) - 1

    def to_json_dict(self) -> dict:
        return {"kind": self.kind.value, "n_max": self.n_max, "p": list(self.p)}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "WinProbTable":
        return cls(kind=StrategyKind(doc["kind"]), p=tuple(float(v) for v in doc["p"]))


def strategy_doc_json(strategy: StrategyTable, probs: WinProbTable) -> str:
    """Serialize a (strategy, probabilities) pair to the canonical JSON document."""
    doc = strategy.to_json_dict()
    doc["p"] = list(probs.p)
    return json.dumps(doc)


def strategy_doc_from_json(text: str) -> tuple[StrategyTable, WinProbTable]:
    doc = json.loads(text)
    strategy = StrategyTable.from_json_dict(doc)
    probs = WinProbTable(kind=strategy.kind, p=tuple(float(v) for v in doc["p"]))
    if probs.n_max != strategy.n_max:
        raise ValueError("boundary rows and probability array disagree on n_max")
    return strategy, probs


def beta_segment(a: float, b: float, k: int, n: int) -> float:
    """Integral of ``x^(k-1) (1-x)^(n-k)`` over ``[a, b]``.

    Evaluated through the Bernstein-sum form of the regularized incomplete
    Beta function,

        F(x) = B(k, n-k+1) * sum_{j=k..n} C(n,j) x^j (1-x)^(n-j),

    which is a sum of nonnegative terms bounded by 1 and therefore free of
    the cancellation that plagues naive polynomial expansion. Binomial
    coefficients are exact integers, so the absolute error stays below
    1e-14 for n <= 64.

    Raises:
        ValueError: if the bounds are out of order, outside [0, 1], or the
            slot index k is outside 1..n.
    """
    if not 1 <= k <= n:
        raise ValueError(f"slot index {k} outside 1..{n}")
    _check_length(n)
    if not 0.0 <= a <= b <= 1.0:
        raise ValueError(f"invalid integration range [{a}, {b}]")
    if a == b:
        return 0.0
    scale = 1.0 / (n * math.comb(n - 1, k - 1))

    def cdf(x: float) -> float:
        if x == 0.0:
            return 0.0
        if x == 1.0:
            return 1.0
        total = 0.0
        for j in range(k, n + 1):
            total += math.comb(n, j) * x**j * (1.0 - x) ** (n - j)
        return total

    return scale * (cdf(b) - cdf(a))


def boundary_slot(row: Sequence[float], x: float) -> int:
    """Slot index 1..k selected by a breakpoint row at draw value x.

    Intervals are half-open: x in [row[j-1], row[j]) selects slot j, so a
    draw exactly on a breakpoint belongs to the interval starting there.
    Zero-width intervals (repeated breakpoints) are skipped. x = 1 maps to
    the last slot.
    """
    k = len(row) - 1
    j = bisect_right(row, x)
    return k if j > k else j


def equal_spacing_table(n_max: int) -> StrategyTable:
    """The naive baseline: breakpoints at j/k for every sub-game length k."""
    _check_length(n_max)
    rows = tuple(tuple(j / k for j in range(k + 1)) for k in range(1, n_max + 1))
    return StrategyTable(kind=StrategyKind.EQUAL_SPACING, boundaries=rows)


def win_prob_table(strategy: StrategyTable) -> WinProbTable:
    """Win probabilities of a strategy, computed bottom-up via the recursion.

    Rows with coinciding breakpoints contribute exactly zero for the empty
    interval, no special casing needed beyond skipping the segment.
    """
    n_max = strategy.n_max
    p = [1.0] * (n_max + 1)
    for n in range(2, n_max + 1):
        row = strategy.row(n)
        total = 0.0
        for k in range(1, n + 1):
            a, b = row[k - 1], row[k]
            if a == b:
                continue
            total += math.comb(n - 1, k - 1) * p[k - 1] * p[n - k] * beta_segment(a, b, k, n)
        p[n] = total
    return WinProbTable(kind=strategy.kind, p=tuple(p))


def risk_tolerant_table(n_max: int) -> tuple[StrategyTable, WinProbTable]:
    """Optimal boundaries and win probabilities, built by interleaved DP.

    For each length n the row is obtained in closed form from the win
    probabilities of all shorter games: the breakpoint between slots k and
    k+1 sits where the two slot-value curves cross,

        a[n][k] = 1 / (1 + (p[k] p[n-k-1]) / (p[k-1] p[n-k]) * (n/k - 1)),

    after which p[n] follows from the recursion with that row. The result
    trades "probably correct right now" for easier continuations: end bins
    shrink to ~60% of the equal-spacing width as n grows.
    """
    _check_length(n_max)
    rows: list[tuple[float, ...]] = [(0.0, 1.0)]
    p = [1.0, 1.0]
    for n in range(2, n_max + 1):
        row = [0.0]
        for k in range(1, n):
            ratio = (p[k] * p[n - k - 1]) / (p[k - 1] * p[n - k])
            row.append(1.0 / (1.0 + ratio * (n / k - 1.0)))
        row.append(1.0)
        rows.append(tuple(row))
        total = 0.0
        for k in range(1, n + 1):
            a, b = row[k - 1], row[k]
            if a == b:
                continue
            total += math.comb(n - 1, k - 1) * p[k - 1] * p[n - k] * beta_segment(a, b, k, n)
        p.append(total)
    strategy = StrategyTable(kind=StrategyKind.RISK_TOLERANT, boundaries=tuple(rows))
    return strategy, WinProbTable(kind=StrategyKind.RISK_TOLERANT, p=tuple(p))


def slot_value(n: int, k: int, x: float, probs: WinProbTable) -> float:
    """Win probability of an n-game given the first draw x goes to slot k.

    This is the curve whose pairwise crossings define the risk-tolerant
    boundaries: C(n-1,k-1) * p[k-1] * p[n-k] * x^(k-1) (1-x)^(n-k).
    """
    if not 1 <= k <= n:
        raise ValueError(f"slot index {k} outside 1..{n}")
    if n > probs.n_max:
        raise ValueError(f"need win probabilities up to {n}, table has {probs.n_max}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"draw value {x} outside [0, 1]")
    return (
        math.comb(n - 1, k - 1)
        * probs.p[k - 1]
        * probs.p[n - k]
        * x ** (k - 1)
        * (1.0 - x) ** (n - k)
    )


def correct_so_far_slot(n: int, k: int, x: float) -> float:
    """Probability the sequence stays consistent after putting draw x in slot k.

    The greedy metric behind equal spacing: C(n-1,k-1) x^(k-1) (1-x)^(n-k),
    maximized over k exactly when x lies in ((k-1)/n, k/n).
    """
    if not 1 <= k <= n:
        raise ValueError(f"slot index {k} outside 1..{n}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"draw value {x} outside [0, 1]")
    return math.comb(n - 1, k - 1) * x ** (k - 1) * (1.0 - x) ** (n - k)


def symmetric_three_game_win_prob(alpha: float) -> float:
    """Closed-form 3-game win probability for symmetric end bins of width alpha.

    Serves as an independent oracle for the recursion on 3-row strategies
    with breakpoints (alpha, 1 - alpha): the cubic
    (11/6) a^3 - (7/2) a^2 + (3/2) a + 1/3. Maximal at alpha = 3/11.
    """
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha {alpha} outside [0, 0.5]")
    return ((11.0 / 6.0) * alpha - 7.0 / 2.0) * alpha * alpha + 1.5 * alpha + 1.0 / 3.0
