"""Experiment execution: seed derivation, trial dispatch, CSV and manifest output.

Every (algorithm, seed) cell runs against a fresh oracle whose noise stream
and algorithm randomness are derived from the trial seed and the algorithm's
canonical index through a splitmix-style mix, so outputs are byte-for-byte
reproducible and independent of execution order.
"""

from __future__ import annotations

import itertools
import json
import statistics
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ALGORITHMS, OVERRIDE_KEYS, ExperimentConfig
from .errors import InvalidConfig
from .mirror import run_md
from .objectives import NoisyOracle, make_objective
from .params import md_params, md_twice_params, selection_params
from .selection import successive_select
from .sphere_gd import SphereGDParams, default_gd_params, run_sphere_gd
from .trace import RegretTracker

CSV_HEADER = "algo,seed,queries_used,f_iterate,simple_regret,cum_regret_iter,cum_regret_query"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive_seed(base_seed: int, *indices: int) -> int:
    """Fold indices into a base seed: state <- splitmix64(state XOR index).

    The base seed is mixed before the first fold; otherwise small seeds and
    small indices alias (XOR of two small ints collides across cells).
    Used as derive_seed(trial_seed, algorithm_index, stream) with stream 0
    for the oracle noise and stream 1 for algorithm randomness.
    """
    state = _splitmix64(base_seed & _MASK)
    for idx in indices:
        state = _splitmix64(state ^ (idx & _MASK))
    return state


def _gd_params_from_overrides(radius: float, ov: dict, active=None) -> SphereGDParams:
    base = default_gd_params(radius, active=active)
    step = ov.get("c_eta", base.step_coeff)
    probe = ov.get("c_delta", base.probe_coeff)
    return SphereGDParams(radius=radius, step_coeff=step, probe_coeff=probe,
                          shrink=base.shrink, active=base.active)


def build_params(objective, config: ExperimentConfig, algo: str):
    """Translate config plus per-algorithm overrides into optimizer parameters."""
    ov = dict(config.overrides.get(algo, {}))
    if algo == "GD":
        return _gd_params_from_overrides(config.B, ov)
    if algo == "LassoGD":
        keys = {k: ov[k] for k in ("c_delta", "c_lambda", "omega", "delta", "eta") if k in ov}
        params = selection_params(objective, config.T, config.sigma, config.B, **keys)
        gd = _gd_params_from_overrides(config.B, {k: ov[k] for k in ("c_eta",) if k in ov})
        return params, gd
    factory = md_params if algo == "MD" else md_twice_params
    keys = {k: ov[k] for k in ("c_eta", "c_delta", "c_lambda", "n", "delta", "eta", "omega")
            if k in ov}
    if "n" in keys:
        keys["n"] = int(keys["n"])
    return factory(objective, config.T, config.sigma, config.B, **keys)


def run_trial(objective, config: ExperimentConfig, algo: str, seed: int, tracker: RegretTracker):
    """Run one (algorithm, seed) cell and finalize the tracker. Returns x_out."""
    if algo not in ALGORITHMS:
        raise InvalidConfig(f"unknown algorithm {algo!r}")
    algo_index = ALGORITHMS.index(algo)
    oracle = NoisyOracle(objective, sigma=config.sigma,
                         seed=derive_seed(seed, algo_index, 0), budget=config.T)
    rng = np.random.default_rng(derive_seed(seed, algo_index, 1))
    if algo == "GD":
        params = build_params(objective, config, algo)
        x_out, _ = run_sphere_gd(oracle, config.T, np.zeros(objective.d), params, rng,
                                 tracker=tracker)
    elif algo == "LassoGD":
        params, gd = build_params(objective, config, algo)
        x_out, _, _ = successive_select(oracle, params, rng, tracker=tracker, gd_params=gd)
    else:
        params = build_params(objective, config, algo)
        x_out, _ = run_md(oracle, params, rng, tracker=tracker)
    assert oracle.queries_used <= config.T, "budget accounting violated"
    tracker.finalize(x_out)
    return x_out


def _format_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_trace_csv(path, algo: str, seed: int, trace) -> None:
    lines = [CSV_HEADER]
    for row in trace:
        lines.append(",".join([algo, str(seed), str(row.queries_used),
                               _format_value(row.f_iterate),
                               _format_value(row.simple_regret),
                               _format_value(row.cum_regret_iter),
                               _format_value(row.cum_regret_query)]))
    Path(path).write_text("\n".join(lines) + "\n")


def config_to_dict(config: ExperimentConfig) -> dict:
    obj = {"family": config.objective.family, "d": config.objective.d, "s": config.objective.s,
           "seed": config.objective_seed, "decay_rate": config.objective.decay_rate}
    if config.objective.support is not None:
        obj["support"] = list(config.objective.support)
    if config.objective.shift is not None:
        obj["shift"] = list(config.objective.shift)
    out = {"objective": obj, "sigma": config.sigma, "T": config.T, "B": config.B,
           "algorithms": list(config.algorithms), "seeds": list(config.seeds),
           "overrides": {a: dict(sorted(t.items())) for a, t in sorted(config.overrides.items())}}
    if config.checkpoints is not None:
        out["checkpoints"] = list(config.checkpoints)
    if config.output_dir is not None:
        out["output_dir"] = config.output_dir
    return out


def run_experiment(config: ExperimentConfig, output_dir=None, seed_offset: int = 0,
                   make_plot: bool = True) -> dict:
    """Run all configured (algorithm, seed) cells and write results to disk.

    Writes one CSV per cell, a regret figure over the successful cells, and a
    manifest.json describing everything.  Per-cell failures are recorded in
    the manifest and flush whatever trace rows were collected; they do not
    abort the remaining cells.  Returns the manifest as a dict (also useful
    for checking the "failures" entry).
    """
    outdir = Path(output_dir or config.output_dir or "results")
    outdir.mkdir(parents=True, exist_ok=True)
    objective = make_objective(config.objective, config.objective_seed)
    optimum = objective.optimum_value()
    if config.B < optimum.l1_norm and any(a in ("MD", "MDTwice") for a in config.algorithms):
        raise InvalidConfig(f"B={config.B} excludes the optimum (l1 norm {optimum.l1_norm})")

    checkpoints = config.resolved_checkpoints()
    results = []
    csv_paths = []
    failures = 0
    for algo in config.algorithms:
        for base_seed in config.seeds:
            seed = base_seed + seed_offset
            tracker = RegretTracker(objective, checkpoints=checkpoints)
            entry = {"algo": algo, "seed": seed, "csv": f"{algo}_seed{seed}.csv"}
            try:
                run_trial(objective, config, algo, seed, tracker)
                entry["status"] = "ok"
            except Exception as exc:  # noqa: BLE001 - per-trial isolation is the point
                tracker.finalize()
                entry["status"] = "failed"
                entry["error"] = f"{type(exc).__name__}: {exc}"
                failures += 1
            path = outdir / entry["csv"]
            write_trace_csv(path, algo, seed, tracker.trace)
            if entry["status"] == "ok":
                csv_paths.append(path)
            results.append(entry)

    plot_entry = {"file": None, "status": "skipped"}
    if make_plot and csv_paths:
        from .plotting import emit_plot  # heavy import, deferred

        plot_path = outdir / "regret.svg"
        try:
            emit_plot([str(p) for p in csv_paths], str(plot_path))
            plot_entry = {"file": "regret.svg", "status": "ok"}
        except Exception as exc:  # noqa: BLE001
            plot_entry = {"file": None, "status": f"failed: {type(exc).__name__}: {exc}"}

    manifest = {"config": config_to_dict(config), "seed_offset": seed_offset,
                "results": results, "failures": failures, "plot": plot_entry}
    (outdir / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return manifest


def load_grid(path) -> dict:
    """Read a grid file: an object mapping override names to value lists."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidConfig(f"cannot read grid file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"grid file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or not raw:
        raise InvalidConfig("grid must be a non-empty object of parameter value lists")
    grid = {}
    for key, values in raw.items():
        if key not in OVERRIDE_KEYS:
            raise InvalidConfig(f"unknown grid parameter {key!r}, expected one of {OVERRIDE_KEYS}")
        if not isinstance(values, list) or not values:
            raise InvalidConfig(f"grid.{key} must be a non-empty list")
        for v in values:
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise InvalidConfig(f"grid.{key} values must be numbers")
        grid[key] = values
    return grid


def grid_search(config: ExperimentConfig, grid: dict, seed_offset: int = 0):
    """Evaluate every grid point and pick the best by median final regret.

    Each point overlays its parameter values on the overrides of every
    configured algorithm and runs all (algorithm, seed) cells in memory.  The
    score is the median across cells of the final cumulative regret over
    iterates; points with any failed cell are excluded from selection and
    flagged in the report.  Ties go to the smaller parameter tuple in
    lexicographic order of the sorted parameter names.

    Returns (best_point, best_config, report_rows).
    """
    names = sorted(grid)
    objective = make_objective(config.objective, config.objective_seed)
    report = []
    best = None  # (score, value_tuple, point, config)
    for values in itertools.product(*(sorted(grid[k]) for k in names)):
        point = dict(zip(names, values))
        merged = {algo: {**config.overrides.get(algo, {}), **point} for algo in config.algorithms}
        trial_config = replace(config, overrides=merged)
        finals = []
        status = "ok"
        error = ""
        for algo in config.algorithms:
            for base_seed in config.seeds:
                tracker = RegretTracker(objective, checkpoints=trial_config.resolved_checkpoints())
                try:
                    run_trial(objective, trial_config, algo, base_seed + seed_offset, tracker)
                except Exception as exc:  # noqa: BLE001
                    status = "failed"
                    error = f"{algo}/seed{base_seed + seed_offset}: {type(exc).__name__}: {exc}"
                    break
                finals.append(tracker.trace.final.cum_regret_iter)
            if status == "failed":
                break
        row = dict(point)
        row["status"] = status
        row["error"] = error
        row["median_final_cum_regret_iter"] = (
            statistics.median(finals) if status == "ok" and finals else float("nan"))
        report.append(row)
        if status == "ok" and finals:
            key = (row["median_final_cum_regret_iter"], values)
            if best is None or key < best[0]:
                best = (key, point, trial_config)
    if best is None:
        raise InvalidConfig("every grid point failed; nothing to select")
    return best[1], best[2], report


def write_grid_report(path, report: list[dict]) -> None:
    """CSV report of all grid points, parameters first, score and status last."""
    if not report:
        raise InvalidConfig("empty grid report")
    names = [k for k in sorted(report[0]) if k not in ("status", "error", "median_final_cum_regret_iter")]
    header = names + ["median_final_cum_regret_iter", "status", "error"]
    lines = [",".join(header)]
    for row in report:
        cells = [_format_value(row[k]) for k in names]
        cells.append(_format_value(row["median_final_cum_regret_iter"]))
        cells.append(row["status"])
        cells.append('"%s"' % row["error"].replace('"', "'") if row["error"] else "")
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")
