import pytest

from blindseq import (
    GameState,
    GridState,
    equal_spacing_table,
    normalize_draw,
    risk_tolerant_table,
    win_prob_table,
)


@pytest.fixture(scope="session")
def rt64():
    """(StrategyTable, WinProbTable) for the risk-tolerant strategy, n_max 64."""
    return risk_tolerant_table(64)


@pytest.fixture(scope="session")
def es64():
    """(StrategyTable, WinProbTable) for equal spacing, n_max 64."""
    table = equal_spacing_table(64)
    return table, win_prob_table(table)


@pytest.fixture()
def midgame_state():
    """The published 20-game position: 130 in slot 3, 573 in 12, 761 in 16."""
    state = GameState.empty(20)
    state = state.place(3, normalize_draw(130))
    state = state.place(12, normalize_draw(573))
    state = state.place(16, normalize_draw(761))
    return state


@pytest.fixture()
def midgame_grid():
    """The published 5x5 grid position: 130 at (2,1), 573 at (2,5), 761 at (3,5)."""
    grid = GridState.empty(5)
    grid = grid.place((2, 1), normalize_draw(130))
    grid = grid.place((2, 5), normalize_draw(573))
    grid = grid.place((3, 5), normalize_draw(761))
    return grid
