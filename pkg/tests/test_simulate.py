import math

import pytest

from blindseq import (
    SimConfig,
    SimResult,
    empirical_draws_to_win,
    equal_spacing_table,
    expected_draws_to_win,
    expected_draws_to_win_geometric,
    mean_elimination_turn,
    risk_tolerant_table,
    run,
    run_reference,
)


@pytest.fixture(scope="module")
def rt16():
    return risk_tolerant_table(16)[0]


class TestRun:
    def test_single_number_always_wins(self, rt16):
        result = run(SimConfig(n=1, strategy=rt16, games=1000, seed=3))
        assert result.wins == 1000
        assert result.total_draws == 1000
        assert sum(result.elimination_histogram) == 0

    def test_deterministic(self, rt16):
        config = SimConfig(n=8, strategy=rt16, games=5000, seed=99)
        assert run(config) == run(config)

    def test_worker_count_does_not_matter(self, rt16):
        base = run(SimConfig(n=8, strategy=rt16, games=40_000, seed=5, workers=1))
        threaded = run(SimConfig(n=8, strategy=rt16, games=40_000, seed=5, workers=4))
        assert base == threaded

    def test_matches_slot_level_reference(self, rt16):
        config = SimConfig(n=6, strategy=rt16, games=3000, seed=17)
        assert run(config) == run_reference(config)

    def test_matches_reference_equal_spacing(self):
        es = equal_spacing_table(4)
        config = SimConfig(n=4, strategy=es, games=2500, seed=23)
        assert run(config) == run_reference(config)

    def test_accounting_invariant(self, rt16):
        result = run(SimConfig(n=10, strategy=rt16, games=20_000, seed=1))
        assert result.wins + sum(result.elimination_histogram) == result.games
        assert result.elimination_histogram[0] == 0
        # a loss needs at least two draws: the first always fits
        assert result.elimination_histogram[1] == 0

    def test_two_game_win_rate(self):
        es = equal_spacing_table(2)
        result = run(SimConfig(n=2, strategy=es, games=200_000, seed=12))
        se = math.sqrt(0.75 * 0.25 / result.games)
        assert abs(result.win_rate - 0.75) < 5 * se

    def test_analytic_agreement_small_n(self):
        table, probs = risk_tolerant_table(5)
        for n in (2, 3, 5):
            result = run(SimConfig(n=n, strategy=table, games=100_000, seed=n))
            p = probs.p[n]
            se = math.sqrt(p * (1 - p) / result.games)
            assert abs(result.win_rate - p) < 5 * se

    def test_config_validation(self, rt16):
        with pytest.raises(ValueError):
            SimConfig(n=0, strategy=rt16, games=10)
        with pytest.raises(ValueError):
            SimConfig(n=32, strategy=rt16, games=10)  # table too small
        with pytest.raises(ValueError):
            SimConfig(n=4, strategy=rt16, games=0)
        with pytest.raises(ValueError):
            SimConfig(n=4, strategy=rt16, games=10, workers=0)


class TestEliminationStats:
    def test_single_bucket_mean(self):
        result = SimResult(games=10, wins=0, elimination_histogram=(0, 0, 10), total_draws=20)
        assert mean_elimination_turn(result) == 2.0

    def test_undefined_without_losses(self):
        result = SimResult(games=5, wins=5, elimination_histogram=(0, 0, 0), total_draws=15)
        with pytest.raises(ValueError):
            mean_elimination_turn(result)

    def test_histogram_rows_match(self, rt16):
        result = run(SimConfig(n=8, strategy=rt16, games=10_000, seed=2))
        rows = result.histogram_rows()
        assert len(rows) == 8
        assert sum(count for _, count in rows) == result.losses


class TestExpectedDraws:
    def test_certain_win(self):
        assert expected_draws_to_win(1.0, 0.0, 7) == 7.0

    def test_published_form_frozen_value(self):
        # n + (1/p + 1) * mean with the published n=20 equal-spacing inputs
        value = expected_draws_to_win(1 / 9651, 10.8414, 20)
        assert value == pytest.approx(20 + 9652 * 10.8414, rel=1e-12)
        assert value == pytest.approx(1.0466e5, rel=1e-3)

    def test_geometric_form_differs_by_two_means(self):
        for p, mean, n in ((0.5, 1.7, 3), (1 / 8000, 11.5, 20)):
            gap = expected_draws_to_win(p, mean, n) - expected_draws_to_win_geometric(p, mean, n)
            assert gap == pytest.approx(2 * mean, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            expected_draws_to_win(0.0, 1.0, 3)
        with pytest.raises(ValueError):
            expected_draws_to_win(0.5, -1.0, 3)
        with pytest.raises(ValueError):
            expected_draws_to_win_geometric(1.5, 1.0, 3)


class TestEmpiricalDraws:
    def test_single_number(self, rt16):
        assert empirical_draws_to_win(SimConfig(n=1, strategy=rt16, games=1, seed=0), 50) == 1.0

    def test_two_game_exact_mean(self):
        # p = 3/4 and every loss costs exactly 2 draws: mean is 2 + (4/3-1)*2 = 8/3
        es = equal_spacing_table(2)
        got = empirical_draws_to_win(SimConfig(n=2, strategy=es, games=1, seed=8), 20_000)
        assert got == pytest.approx(8 / 3, rel=0.02)

    def test_consistent_with_geometric_form(self):
        table, probs = risk_tolerant_table(3)
        sim = run(SimConfig(n=3, strategy=table, games=200_000, seed=4))
        formula = expected_draws_to_win_geometric(
            probs.p[3], mean_elimination_turn(sim), 3
        )
        got = empirical_draws_to_win(SimConfig(n=3, strategy=table, games=1, seed=6), 10_000)
        assert got == pytest.approx(formula, rel=0.05)

    def test_deterministic_and_worker_independent(self, rt16):
        a = empirical_draws_to_win(SimConfig(n=4, strategy=rt16, games=1, seed=11), 500)
        b = empirical_draws_to_win(
            SimConfig(n=4, strategy=rt16, games=1, seed=11, workers=3), 500
        )
        assert a == b

    def test_trials_validation(self, rt16):
        with pytest.raises(ValueError):
            empirical_draws_to_win(SimConfig(n=2, strategy=rt16, games=1, seed=0), 0)


def test_serialization_keys(rt16):
    result = run(SimConfig(n=4, strategy=rt16, games=1000, seed=9))
    doc = result.to_json_dict()
    assert set(doc) == {"games", "wins", "elimination_histogram", "total_draws"}
    assert doc["games"] == 1000
