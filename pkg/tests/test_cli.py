import json
import socket
import subprocess
import sys
import time

import pytest
from click.testing import CliRunner

from blindseq import GameState
from blindseq.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def midgame_file(tmp_path, midgame_state):
    path = tmp_path / "midgame.json"
    path.write_text(json.dumps(midgame_state.to_json_dict()))
    return str(path)


@pytest.fixture()
def midgame_grid_file(tmp_path, midgame_grid):
    path = tmp_path / "midgame_grid.json"
    path.write_text(json.dumps(midgame_grid.to_json_dict()))
    return str(path)


def payload_of(result):
    doc = json.loads(result.output)
    assert doc["schema_version"] == "1"
    return doc["payload"]


class TestTables:
    def test_published_twenty_values(self, runner):
        result = runner.invoke(main, ["tables", "--n-max", "20"])
        assert result.exit_code == 0
        payload = payload_of(result)
        last = payload["series"][-1]
        assert 1 / last["p_rt"] == pytest.approx(7980, rel=1e-3)
        assert last["factor"] == pytest.approx(1.2095, abs=5e-4)

    def test_forty_factor(self, runner):
        payload = payload_of(runner.invoke(main, ["tables", "--n-max", "40", "--strategy", "both"]))
        assert payload["series"][-1]["factor"] == pytest.approx(1.4617, abs=5e-4)

    def test_trivial_length(self, runner):
        payload = payload_of(runner.invoke(main, ["tables", "--n-max", "1"]))
        assert payload["rt"]["p"] == [1.0, 1.0]
        assert payload["rt"]["boundaries"] == [[0.0, 1.0]]

    def test_byte_identical_reruns(self, runner):
        first = runner.invoke(main, ["tables", "--n-max", "12"]).output
        second = runner.invoke(main, ["tables", "--n-max", "12"]).output
        assert first == second

    def test_csv_rows_match_series(self, runner):
        json_payload = payload_of(runner.invoke(main, ["tables", "--n-max", "9"]))
        csv_out = runner.invoke(main, ["tables", "--n-max", "9", "--format", "csv"]).output
        lines = [line for line in csv_out.splitlines() if line]
        assert lines[0] == "n,p_es,p_rt,factor"
        assert len(lines) - 1 == len(json_payload["series"])

    def test_rejects_oversized(self, runner):
        assert runner.invoke(main, ["tables", "--n-max", "300"]).exit_code == 2

    def test_full_precision_changes_digits(self, runner):
        rounded = payload_of(runner.invoke(main, ["tables", "--n-max", "3"]))
        full = payload_of(runner.invoke(main, ["tables", "--n-max", "3", "--full-precision"]))
        assert rounded["es"]["boundaries"][2][1] == 0.333333
        assert full["es"]["boundaries"][2][1] == 1 / 3


class TestSimulate:
    def test_basic_run(self, runner):
        result = runner.invoke(
            main, ["simulate", "--n", "5", "--strategy", "rt", "--games", "20000", "--seed", "7"]
        )
        assert result.exit_code == 0
        payload = payload_of(result)
        assert payload["wins"] + sum(r["count"] for r in payload["series"]) == 20000
        assert payload["analytic_win_prob"] == pytest.approx(0.221406, abs=1e-5)

    def test_single_slot_always_wins(self, runner):
        payload = payload_of(runner.invoke(main, ["simulate", "--n", "1", "--games", "10"]))
        assert payload["wins"] == 10
        assert payload["mean_elimination_turn"] is None

    def test_seed_reproducibility(self, runner):
        args = ["simulate", "--n", "6", "--games", "5000", "--seed", "3"]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output

    def test_worker_flag_keeps_output(self, runner):
        base = runner.invoke(main, ["simulate", "--n", "6", "--games", "30000", "--seed", "3"])
        threaded = runner.invoke(
            main, ["simulate", "--n", "6", "--games", "30000", "--seed", "3", "--workers", "4"]
        )
        assert base.output == threaded.output

    def test_csv_histogram(self, runner):
        out = runner.invoke(
            main, ["simulate", "--n", "4", "--games", "2000", "--format", "csv"]
        ).output
        lines = [line for line in out.splitlines() if line]
        assert lines[0] == "turn,count"
        assert len(lines) == 5  # turns 1..4


class TestAdvise:
    def test_risk_tolerant_pick(self, runner, midgame_file):
        result = runner.invoke(main, ["advise", midgame_file, "--next", "170", "--strategy", "rt"])
        assert result.exit_code == 0
        payload = payload_of(result)
        top = next(r for r in payload["series"] if r["rank"] == 1)
        assert top["slot"] == 5
        assert not payload["eliminated"]

    def test_greedy_pick_is_slot_four(self, runner, midgame_file):
        payload = payload_of(
            runner.invoke(main, ["advise", midgame_file, "--next", "170", "--strategy", "es"])
        )
        greedy = max(payload["series"], key=lambda r: r["correct_so_far"])
        assert greedy["slot"] == 4

    def test_full_state_eliminates_with_exit_zero(self, runner, tmp_path):
        state = GameState.empty(2).place(1, 0.3).place(2, 0.7)
        path = tmp_path / "full.json"
        path.write_text(json.dumps(state.to_json_dict()))
        result = runner.invoke(main, ["advise", str(path), "--next", "500"])
        assert result.exit_code == 0
        payload = payload_of(result)
        assert payload["eliminated"] is True
        assert payload["series"] == []

    def test_malformed_state_exits_two(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 3, "slots": [0.9, 0.1, null]}')
        assert runner.invoke(main, ["advise", str(bad), "--next", "100"]).exit_code == 2

    def test_missing_state_exits_two(self, runner):
        assert runner.invoke(main, ["advise", "/nonexistent.json", "--next", "1"]).exit_code == 2

    def test_out_of_range_draw_exits_two(self, runner, midgame_file):
        assert runner.invoke(main, ["advise", midgame_file, "--next", "1742"]).exit_code == 2


class TestGridAdvise:
    def test_published_top_cell(self, runner, midgame_grid_file):
        result = runner.invoke(
            main, ["grid-advise", midgame_grid_file, "--next", "170", "--samples", "4000", "--seed", "1"]
        )
        assert result.exit_code == 0
        payload = payload_of(result)
        assert payload["series"][0]["rank"] == 1
        assert (payload["series"][0]["row"], payload["series"][0]["col"]) == (3, 1)
        heat = payload["heatmap"]
        assert heat[1][0] is None
        assert heat[2][0] == payload["series"][0]["probability"]

    def test_duplicate_on_full_grid(self, runner, tmp_path):
        path = tmp_path / "full_grid.json"
        path.write_text(json.dumps({"m": 1, "cells": [[0.5]]}))
        payload = payload_of(runner.invoke(main, ["grid-advise", str(path), "--next", "700"]))
        assert payload["eliminated"] is True


class TestFigures:
    def test_figure_two_factor_increases(self, runner):
        payload = payload_of(runner.invoke(main, ["figures", "2", "--n-max", "24"]))
        factors = [r["factor"] for r in payload["series"]]
        assert all(a <= b for a, b in zip(factors, factors[1:]))

    def test_figure_three_equal_spacing_ticks(self, runner):
        payload = payload_of(runner.invoke(main, ["figures", "3", "--n-max", "6"]))
        ticks = [
            r["alpha"] for r in payload["series"] if r["kind"] == "es" and r["n"] == 6
        ]
        assert ticks == pytest.approx([j / 6 for j in range(7)], abs=1e-6)

    def test_figure_four_relative_sizes(self, runner):
        payload = payload_of(runner.invoke(main, ["figures", "4", "--n", "40"]))
        series = payload["series"]
        assert series[0]["relative_size"] == pytest.approx(0.6, abs=0.05)
        assert series[1]["relative_size"] < 1.0

    def test_figure_five_histograms(self, runner):
        payload = payload_of(
            runner.invoke(main, ["figures", "5", "--n", "8", "--games", "4000", "--seed", "2"])
        )
        strategies = {r["strategy"] for r in payload["series"]}
        assert strategies == {"es", "rt"}
        for kind in ("es", "rt"):
            freq = sum(r["frequency"] for r in payload["series"] if r["strategy"] == kind)
            assert freq == pytest.approx(1.0, abs=1e-6)

    def test_unknown_figure_exits_two(self, runner):
        assert runner.invoke(main, ["figures", "9"]).exit_code == 2


class TestServe:
    def test_ephemeral_port_and_health(self):
        proc = subprocess.Popen(
            [sys.executable, "-m", "blindseq.cli", "serve", "--port", "0"],
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
        )
        try:
            line = proc.stdout.readline()
            assert "listening on http://" in line
            port = int(line.rsplit(":", 1)[1])
            import httpx

            for _ in range(50):
                try:
                    response = httpx.get(f"http://127.0.0.1:{port}/api/health", timeout=1.0)
                    break
                except httpx.TransportError:
                    time.sleep(0.1)
            assert response.status_code == 200
            assert response.json()["status"] == "ok"
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_busy_port_exits_one(self):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        try:
            proc = subprocess.run(
                [sys.executable, "-m", "blindseq.cli", "serve", "--port", str(port)],
                capture_output=True,
                timeout=30,
            )
            assert proc.returncode == 1
        finally:
            blocker.close()
