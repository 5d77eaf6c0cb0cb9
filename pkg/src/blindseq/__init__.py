"""Strategy engine, simulator, and live-play advisor for blind number sequencing."""

from .game import (
    Bin,
    GameState,
    SlotRecommendation,
    advise,
    best_slot,
    bins,
    correct_so_far,
    feasible_slots,
    normalize_draw,
    strategy_slot,
    win_prob_from_state,
)
from .grid import (
    GridState,
    feasible_assignment_exists,
    grid_advise,
    induced_bounds,
    placement_probability,
)
from .simulate import (
    SimConfig,
    SimResult,
    empirical_draws_to_win,
    expected_draws_to_win,
    expected_draws_to_win_geometric,
    mean_elimination_turn,
    run,
    run_reference,
)
from .strategies import (
    StrategyKind,
    StrategyTable,
    WinProbTable,
    beta_segment,
    boundary_slot,
    correct_so_far_slot,
    equal_spacing_table,
    risk_tolerant_table,
    slot_value,
    symmetric_three_game_win_prob,
    win_prob_table,
)

__version__ = "0.1.0"

__all__ = [
    "Bin",
    "GameState",
    "GridState",
    "SimConfig",
    "SimResult",
    "SlotRecommendation",
    "StrategyKind",
    "StrategyTable",
    "WinProbTable",
    "advise",
    "best_slot",
    "beta_segment",
    "bins",
    "boundary_slot",
    "correct_so_far",
    "correct_so_far_slot",
    "empirical_draws_to_win",
    "equal_spacing_table",
    "expected_draws_to_win",
    "expected_draws_to_win_geometric",
    "feasible_assignment_exists",
    "feasible_slots",
    "grid_advise",
    "induced_bounds",
    "mean_elimination_turn",
    "normalize_draw",
    "placement_probability",
    "risk_tolerant_table",
    "run",
    "run_reference",
    "slot_value",
    "strategy_slot",
    "symmetric_three_game_win_prob",
    "win_prob_from_state",
    "win_prob_table",
]
