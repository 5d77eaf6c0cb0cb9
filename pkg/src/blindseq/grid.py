"""The square-grid variant: ascending rows and columns, greedy interval metric.

A partially filled m-by-m grid orders its cells by the product partial
order: cell (i, j) precedes (i', j') when i <= i' and j <= j'. Every filled
value therefore pins an interval constraint on each empty cell — strictly
above the largest filled predecessor and strictly below the smallest filled
successor. The grid game has no exact recursive decomposition, so placements
are scored by a greedy metric: the probability that the remaining draws can
be matched one-to-one into the empty cells' induced intervals, estimated by
Monte Carlo over iid uniform draws with an exact matching test per sample.

Cell coordinates are 1-based (row, column), row 1 at the top.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

_CHUNK = 1 << 14
_MASK64 = (1 << 64) - 1

Cell = tuple[int, int]


@dataclass(frozen=True)
class GridState:
    """An m-by-m grid of optional values; rows and columns strictly ascend."""

    m: int
    cells: tuple[tuple[float | None, ...], ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"grid side must be >= 1, got {self.m}")
        if len(self.cells) != self.m or any(len(row) != self.m for row in self.cells):
            raise ValueError(f"cells must form an {self.m}x{self.m} grid")
        for row in self.cells:
            for v in row:
                if v is not None and not 0.0 <= v <= 1.0:
                    raise ValueError(f"cell value {v} outside [0, 1]")
        for i in range(self.m):
            row_vals = [v for v in self.cells[i] if v is not None]
            col_vals = [self.cells[r][i] for r in range(self.m) if self.cells[r][i] is not None]
            for seq, axis in ((row_vals, "row"), (col_vals, "column")):
                for a, b in zip(seq, seq[1:]):
                    if a >= b:
                        raise ValueError(f"{axis} {i + 1} is not strictly increasing")

    @classmethod
    def empty(cls, m: int) -> "GridState":
        return cls(m=m, cells=((None,) * m,) * m)

    @property
    def filled_count(self) -> int:
        return sum(1 for row in self.cells for v in row if v is not None)

    def value_at(self, cell: Cell) -> float | None:
        i, j = cell
        if not (1 <= i <= self.m and 1 <= j <= self.m):
            raise ValueError(f"cell {cell} outside the {self.m}x{self.m} grid")
        return self.cells[i - 1][j - 1]

    def empty_cells(self) -> list[Cell]:
        return [
            (i + 1, j + 1)
            for i in range(self.m)
            for j in range(self.m)
            if self.cells[i][j] is None
        ]

    def place(self, cell: Cell, value: float) -> "GridState":
        """Commit ``value`` to an empty cell whose induced interval admits it."""
        if self.value_at(cell) is not None:
            raise ValueError(f"cell {cell} is already filled")
        lo, hi = induced_bounds(self)[cell]
        if not lo < value < hi:
            raise ValueError(f"value {value} violates induced bounds ({lo}, {hi}) at {cell}")
        i, j = cell
        rows = [list(row) for row in self.cells]
        rows[i - 1][j - 1] = value
        return GridState(m=self.m, cells=tuple(tuple(row) for row in rows))

    def to_json_dict(self) -> dict:
        return {"m": self.m, "cells": [list(row) for row in self.cells]}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "GridState":
        return cls(
            m=int(doc["m"]),
            cells=tuple(
                tuple(None if v is None else float(v) for v in row) for row in doc["cells"]
            ),
        )


def grid_from_json(text: str) -> GridState:
    return GridState.from_json_dict(json.loads(text))


def induced_bounds(state: GridState) -> dict[Cell, tuple[float, float]]:
    """Open interval (lower, upper) each empty cell must respect.

    Lower is the largest filled value weakly above-left, 0 without one;
    upper is the smallest filled value weakly below-right, 1 without one.
    Two dynamic-programming sweeps cover the transitive order.
    """
    m = state.m
    lo = [[0.0] * m for _ in range(m)]
    hi = [[1.0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            v = state.cells[i][j]
            best = v if v is not None else 0.0
            if i > 0:
                best = max(best, lo[i - 1][j])
            if j > 0:
                best = max(best, lo[i][j - 1])
            lo[i][j] = best
    for i in range(m - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            v = state.cells[i][j]
            best = v if v is not None else 1.0
            if i < m - 1:
                best = min(best, hi[i + 1][j])
            if j < m - 1:
                best = min(best, hi[i][j + 1])
            hi[i][j] = best
    return {
        (i + 1, j + 1): (lo[i][j], hi[i][j])
        for i in range(m)
        for j in range(m)
        if state.cells[i][j] is None
    }


@njit(cache=True, nogil=True)
def _count_matchable(sorted_draws, lowers, uppers):
    """Rows of ``sorted_draws`` admitting a perfect value-to-interval matching.

    Intervals arrive sorted by lower bound; containment is strict on both
    sides. Greedy rule: walk values in ascending order, give each to the
    live unused interval with the smallest upper bound — exact for interval
    bigraphs (an exchange argument restores any feasible matching).
    """
    samples, k = sorted_draws.shape
    used = np.empty(k, dtype=np.bool_)
    successes = 0
    for s in range(samples):
        for i in range(k):
            used[i] = False
        feasible = True
        active = 0
        for vi in range(k):
            v = sorted_draws[s, vi]
            while active < k and lowers[active] < v:
                active += 1
            best = -1
            best_upper = np.inf
            for ii in range(active):
                if not used[ii] and v < uppers[ii] < best_upper:
                    best_upper = uppers[ii]
                    best = ii
            if best < 0:
                feasible = False
                break
            used[best] = True
        if feasible:
            successes += 1
    return successes


def feasible_assignment_exists(values, bounds) -> bool:
    """True iff the values match one-to-one into distinct containing intervals.

    Containment is strict (lower < v < upper), mirroring the strict grid
    order. Input order is irrelevant; sizes must agree.
    """
    values = list(values)
    bounds = list(bounds)
    if len(values) != len(bounds):
        raise ValueError(f"{len(values)} values but {len(bounds)} intervals")
    if not values:
        return True
    order = sorted(range(len(bounds)), key=lambda i: bounds[i][0])
    lowers = np.array([bounds[i][0] for i in order], dtype=np.float64)
    uppers = np.array([bounds[i][1] for i in order], dtype=np.float64)
    row = np.sort(np.array(values, dtype=np.float64)).reshape(1, -1)
    return bool(_count_matchable(row, lowers, uppers) == 1)


def placement_probability(
    state: GridState,
    cell: Cell,
    x: float,
    samples: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> float:
    """Greedy placement metric: chance the remaining draws fit the intervals.

    Hypothetically places x, then estimates by Monte Carlo the probability
    that m*m - filled - 1 fresh uniform draws can be matched into the empty
    cells' induced intervals. Returns 0 immediately when x violates the
    cell's own bounds or strangles some other cell's interval. Per-cell
    seeding makes the estimate independent of evaluation order.

    This is a feasibility metric, not the probability of winning from the
    resulting position.
    """
    if state.value_at(cell) is not None:
        raise ValueError(f"cell {cell} is already filled")
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    lo, hi = induced_bounds(state)[cell]
    if not lo < x < hi:
        return 0.0
    placed = state.place(cell, x)
    bounds = induced_bounds(placed)
    if any(b_lo >= b_hi for b_lo, b_hi in bounds.values()):
        return 0.0
    k = len(bounds)
    if k == 0:
        return 1.0
    pairs = sorted(bounds.values())
    lowers = np.array([p[0] for p in pairs], dtype=np.float64)
    uppers = np.array([p[1] for p in pairs], dtype=np.float64)

    sizes = [_CHUNK] * (samples // _CHUNK)
    if samples % _CHUNK:
        sizes.append(samples % _CHUNK)
    root = np.random.SeedSequence((seed & _MASK64, cell[0], cell[1]))
    children = root.spawn(len(sizes))

    def sample_chunk(size: int, child: np.random.SeedSequence) -> int:
        draws = np.random.Generator(np.random.PCG64(child)).random((size, k))
        draws.sort(axis=1)
        return int(_count_matchable(draws, lowers, uppers))

    if workers == 1:
        hits = [sample_chunk(size, child) for size, child in zip(sizes, children)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(pool.map(sample_chunk, sizes, children))
    return sum(hits) / samples


def grid_advise(
    state: GridState,
    x: float,
    samples: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> list[tuple[Cell, float]]:
    """Rank every empty cell whose induced interval admits x.

    Descending by estimated placement probability, ties broken row-major.
    An empty list signals elimination: x fits no cell.
    """
    bounds = induced_bounds(state)
    candidates = [cell for cell, (lo, hi) in bounds.items() if lo < x < hi]
    candidates.sort()

    def score(cell: Cell) -> tuple[Cell, float]:
        return cell, placement_probability(state, cell, x, samples=samples, seed=seed)

    if workers == 1 or len(candidates) <= 1:
        scored = [score(cell) for cell in candidates]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scored = list(pool.map(score, candidates))
    return sorted(scored, key=lambda item: (-item[1], item[0]))


def advise_heatmap(state: GridState, ranked: list[tuple[Cell, float]]) -> list[list[float | None]]:
    """Probabilities arranged in grid shape; None for filled or infeasible cells."""
    heat: list[list[float | None]] = [[None] * state.m for _ in range(state.m)]
    for (i, j), prob in ranked:
        heat[i - 1][j - 1] = prob
    return heat
