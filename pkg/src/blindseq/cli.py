"""Command-line front end: tables, simulations, live advice, figure data.

Every command emits one output document ``{schema_version, command,
payload}``. The payload always carries a ``series`` list of flat records;
``--format csv`` writes exactly those records as rows, so CSV row counts
match the JSON array. Probabilities print with 6 significant digits unless
``--full-precision`` asks for shortest round-trip decimals.

Exit codes: 0 success (eliminations are game outcomes, not errors),
1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys

import click

from . import simulate as sim
from .game import advise, normalize_draw, state_from_json
from .grid import advise_heatmap, grid_advise, grid_from_json
from .strategies import (
    DEFAULT_N_MAX,
    HARD_N_MAX,
    StrategyTable,
    WinProbTable,
    equal_spacing_table,
    risk_tolerant_table,
    win_prob_table,
)

SCHEMA_VERSION = "1"


def _tables_for(n_max: int) -> tuple[StrategyTable, WinProbTable, StrategyTable, WinProbTable]:
    es = equal_spacing_table(n_max)
    esp = win_prob_table(es)
    rt, rtp = risk_tolerant_table(n_max)
    return es, esp, rt, rtp


def _round6(value: float) -> float:
    return float(f"{value:.6g}")


def _rounded(obj, full_precision: bool):
    if isinstance(obj, float):
        return obj if full_precision else _round6(obj)
    if isinstance(obj, list):
        return [_rounded(v, full_precision) for v in obj]
    if isinstance(obj, dict):
        return {k: _rounded(v, full_precision) for k, v in obj.items()}
    return obj


def _emit(command: str, payload: dict, fmt: str, full_precision: bool) -> None:
    payload = _rounded(payload, full_precision)
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "payload": payload}
        click.echo(json.dumps(doc))
        return
    rows = payload["series"]
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    click.echo(buf.getvalue(), nl=False)


def _load_state_file(path: str, loader):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loader(fh.read())
    except FileNotFoundError:
        raise click.UsageError(f"state file {path!r} not found")
    except (ValueError, KeyError, TypeError) as exc:
        raise click.UsageError(f"malformed state file {path!r}: {exc}")


format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True
)
precision_option = click.option(
    "--full-precision", is_flag=True, help="Emit shortest round-trip decimals."
)
workers_option = click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    envvar="BLINDSEQ_WORKERS",
    help="Worker threads (env BLINDSEQ_WORKERS). Results do not depend on it.",
)


@click.group()
def main() -> None:
    """Strategy tables, simulation, and live advice for blind number sequencing."""


@main.command()
@click.option("--n-max", type=click.IntRange(1, HARD_N_MAX), default=DEFAULT_N_MAX, show_default=True)
@click.option(
    "--strategy",
    type=click.Choice(["es", "rt", "both"]),
    default="both",
    show_default=True,
)
@format_option
@precision_option
def tables(n_max: int, strategy: str, fmt: str, full_precision: bool) -> None:
    """Decision boundaries and win probabilities per game length."""
    es, esp, rt, rtp = _tables_for(n_max)
    payload: dict = {"n_max": n_max}
    if strategy in ("es", "both"):
        doc = es.to_json_dict()
        doc["p"] = list(esp.p)
        payload["es"] = doc
    if strategy in ("rt", "both"):
        doc = rt.to_json_dict()
        doc["p"] = list(rtp.p)
        payload["rt"] = doc
    series = []
    for n in range(1, n_max + 1):
        record: dict = {"n": n}
        if strategy in ("es", "both"):
            record["p_es"] = esp.p[n]
        if strategy in ("rt", "both"):
            record["p_rt"] = rtp.p[n]
        if strategy == "both":
            record["factor"] = rtp.p[n] / esp.p[n]
        series.append(record)
    payload["series"] = series
    _emit("tables", payload, fmt, full_precision)


@main.command()
@click.option("--n", type=click.IntRange(1, HARD_N_MAX), required=True)
@click.option("--strategy", type=click.Choice(["es", "rt"]), default="rt", show_default=True)
@click.option("--games", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@workers_option
@format_option
@precision_option
def simulate(
    n: int, strategy: str, games: int, seed: int, workers: int, fmt: str, full_precision: bool
) -> None:
    """Play seeded Monte Carlo games and report the elimination distribution."""
    es, esp, rt, rtp = _tables_for(max(n, 2))
    table, probs = (es, esp) if strategy == "es" else (rt, rtp)
    result = sim.run(sim.SimConfig(n=n, strategy=table, games=games, seed=seed, workers=workers))
    payload: dict = {
        "n": n,
        "strategy": strategy,
        "games": games,
        "seed": seed,
        "wins": result.wins,
        "win_rate": result.win_rate,
        "total_draws": result.total_draws,
        "analytic_win_prob": probs.p[n],
    }
    if result.losses > 0:
        mean_elim = sim.mean_elimination_turn(result)
        payload["mean_elimination_turn"] = mean_elim
        payload["expected_draws"] = sim.expected_draws_to_win(probs.p[n], mean_elim, n)
        payload["expected_draws_geometric"] = sim.expected_draws_to_win_geometric(
            probs.p[n], mean_elim, n
        )
    else:
        payload["mean_elimination_turn"] = None
    payload["series"] = [
        {"turn": turn, "count": count} for turn, count in result.histogram_rows()
    ]
    _emit("simulate", payload, fmt, full_precision)


@main.command("advise")
@click.argument("state_file", type=click.Path())
@click.option("--next", "next_raw", type=click.IntRange(0, 999), required=True)
@click.option("--strategy", type=click.Choice(["es", "rt"]), default="rt", show_default=True)
@format_option
@precision_option
def advise_cmd(
    state_file: str, next_raw: int, strategy: str, fmt: str, full_precision: bool
) -> None:
    """Rank the feasible slots of a saved game state for the next number."""
    state = _load_state_file(state_file, state_from_json)
    es, esp, rt, rtp = _tables_for(max(state.n, 2))
    probs = esp if strategy == "es" else rtp
    x = normalize_draw(next_raw)
    recommendations = advise(state, x, probs)
    payload = {
        "n": state.n,
        "strategy": strategy,
        "next": next_raw,
        "normalized": x,
        "eliminated": not recommendations,
        "state": state.to_json_dict(),
        "series": [
            {
                "slot": r.slot,
                "win_prob": r.win_prob,
                "correct_so_far": r.correct_so_far,
                "rank": r.rank,
            }
            for r in recommendations
        ],
    }
    _emit("advise", payload, fmt, full_precision)


@main.command("grid-advise")
@click.argument("state_file", type=click.Path())
@click.option("--next", "next_raw", type=click.IntRange(0, 999), required=True)
@click.option("--samples", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@workers_option
@format_option
@precision_option
def grid_advise_cmd(
    state_file: str,
    next_raw: int,
    samples: int,
    seed: int,
    workers: int,
    fmt: str,
    full_precision: bool,
) -> None:
    """Rank the feasible cells of a saved grid state for the next number."""
    state = _load_state_file(state_file, grid_from_json)
    x = normalize_draw(next_raw)
    ranked = grid_advise(state, x, samples=samples, seed=seed, workers=workers)
    payload = {
        "m": state.m,
        "next": next_raw,
        "normalized": x,
        "samples": samples,
        "seed": seed,
        "eliminated": not ranked,
        "heatmap": advise_heatmap(state, ranked),
        "series": [
            {"row": cell[0], "col": cell[1], "probability": prob, "rank": rank}
            for rank, (cell, prob) in enumerate(ranked, start=1)
        ],
    }
    _emit("grid-advise", payload, fmt, full_precision)


@main.command()
@click.argument("which", type=click.Choice(["2", "3", "4", "5"]))
@click.option("--n-max", type=click.IntRange(2, HARD_N_MAX), default=None,
              help="Largest game length (figures 2 and 3).")
@click.option("--n", type=click.IntRange(2, HARD_N_MAX), default=None,
              help="Game length (figures 4 and 5).")
@click.option("--games", type=click.IntRange(min=1), default=100_000, show_default=True,
              help="Simulated games per strategy (figure 5).")
@click.option("--seed", type=int, default=0, show_default=True)
@workers_option
@format_option
@precision_option
def figures(
    which: str,
    n_max: int | None,
    n: int | None,
    games: int,
    seed: int,
    workers: int,
    fmt: str,
    full_precision: bool,
) -> None:
    """Data series behind the published figures.

    2: win probabilities (log scale) and improvement factor per length.
    3: boundary ticks per length for both strategies.
    4: risk-tolerant bin sizes relative to the equal-spacing width 1/n.
    5: elimination-turn histograms for both strategies.
    """
    if which == "2":
        n_max = n_max or 40
        es, esp, rt, rtp = _tables_for(n_max)
        series = [
            {
                "n": k,
                "p_es": esp.p[k],
                "p_rt": rtp.p[k],
                "log10_p_es": math.log10(esp.p[k]),
                "log10_p_rt": math.log10(rtp.p[k]),
                "factor": rtp.p[k] / esp.p[k],
            }
            for k in range(1, n_max + 1)
        ]
        payload = {"figure": 2, "n_max": n_max, "series": series}
    elif which == "3":
        n_max = n_max or 20
        es, _, rt, _ = _tables_for(n_max)
        series = []
        for k in range(2, n_max + 1):
            for kind, table in (("es", es), ("rt", rt)):
                for j, alpha in enumerate(table.row(k)):
                    series.append({"n": k, "kind": kind, "k": j, "alpha": alpha})
        payload = {"figure": 3, "n_max": n_max, "series": series}
    elif which == "4":
        n = n or 40
        _, _, rt, _ = _tables_for(n)
        row = rt.row(n)
        series = [
            {"k": k, "relative_size": n * (row[k] - row[k - 1])} for k in range(1, n + 1)
        ]
        payload = {"figure": 4, "n": n, "series": series}
    else:
        n = n or 20
        es, _, rt, _ = _tables_for(n)
        series = []
        for kind, table in (("es", es), ("rt", rt)):
            result = sim.run(
                sim.SimConfig(n=n, strategy=table, games=games, seed=seed, workers=workers)
            )
            losses = result.losses
            for turn, count in result.histogram_rows():
                series.append(
                    {
                        "strategy": kind,
                        "turn": turn,
                        "count": count,
                        "frequency": count / losses if losses else 0.0,
                    }
                )
        payload = {"figure": 5, "n": n, "games": games, "seed": seed, "series": series}
    _emit("figures", payload, fmt, full_precision)


@main.command()
@click.option("--port", type=click.IntRange(0, 65535), default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--ui",
    "ui_dir",
    type=click.Path(exists=True, file_okay=False),
    default=None,
    help="Directory of static web UI assets to serve at /.",
)
def serve(port: int, host: str, ui_dir: str | None) -> None:
    """Run the HTTP advisor service (Ctrl-C to stop)."""
    import socket

    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=ui_dir)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        raise click.ClickException(f"cannot bind {host}:{port}: {exc}")
    bound_port = sock.getsockname()[1]
    click.echo(f"blindseq advisor listening on http://{host}:{bound_port}")
    sys.stdout.flush()
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])


if __name__ == "__main__":
    main()
