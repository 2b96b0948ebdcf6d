"""Command-line driver: run experiments, tune over a grid, re-plot CSVs.

Exit codes: 0 success, 2 configuration or input error, 3 runtime failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import load_config
from .errors import InvalidConfig, SchemaMismatch
from .plotting import DEFAULT_BURN_IN, emit_plot
from .runner import config_to_dict, grid_search, load_grid, run_experiment, write_grid_report


def _fail(exc: Exception) -> None:
    code = 2 if isinstance(exc, (InvalidConfig, SchemaMismatch)) else 3
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


@click.group()
def main() -> None:
    """Benchmark harness for sparse zeroth-order optimizers."""


@main.command("run")
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed-offset", type=int, default=0, show_default=True,
              help="Added to every seed in the config.")
@click.option("--output-dir", type=click.Path(file_okay=False), default=None,
              help="Overrides the config's output_dir.")
def run_cmd(config_path: str, seed_offset: int, output_dir: str | None) -> None:
    """Run every (algorithm, seed) cell of CONFIG_PATH and write CSVs, a
    manifest, and a regret figure."""
    try:
        config = load_config(config_path)
        manifest = run_experiment(config, output_dir=output_dir, seed_offset=seed_offset)
    except Exception as exc:  # noqa: BLE001 - single funnel to exit codes
        _fail(exc)
    for entry in manifest["results"]:
        note = "" if entry["status"] == "ok" else f"  ({entry['error']})"
        click.echo(f"{entry['algo']} seed={entry['seed']}: {entry['status']}{note}")
    if manifest["failures"]:
        click.echo(f"error: {manifest['failures']} trial(s) failed", err=True)
        sys.exit(3)


@main.command("grid")
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("grid_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed-offset", type=int, default=0, show_default=True,
              help="Added to every seed in the config.")
@click.option("--output-dir", type=click.Path(file_okay=False), default=None,
              help="Where to write the report and best config (default: config's output_dir).")
def grid_cmd(config_path: str, grid_path: str, seed_offset: int, output_dir: str | None) -> None:
    """Evaluate every override combination in GRID_PATH and report the best."""
    try:
        config = load_config(config_path)
        grid = load_grid(grid_path)
        best_point, best_config, report = grid_search(config, grid, seed_offset=seed_offset)
        outdir = Path(output_dir or config.output_dir or "results")
        outdir.mkdir(parents=True, exist_ok=True)
        write_grid_report(outdir / "grid_report.csv", report)
        best_dict = config_to_dict(best_config)
        (outdir / "best_config.json").write_text(
            json.dumps(best_dict, sort_keys=True, indent=2) + "\n")
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo("best: " + json.dumps(best_point, sort_keys=True))
    click.echo(f"report: {outdir / 'grid_report.csv'}")


@main.command("plot")
@click.argument("out_path", type=click.Path(dir_okay=False))
@click.argument("csv_paths", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--burn-in", type=int, default=DEFAULT_BURN_IN, show_default=True,
              help="Drop checkpoints below this query count.")
def plot_cmd(out_path: str, csv_paths: tuple[str, ...], burn_in: int) -> None:
    """Render median regret curves from trace CSVs to OUT_PATH (SVG)."""
    try:
        emit_plot(list(csv_paths), out_path, burn_in=burn_in)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
