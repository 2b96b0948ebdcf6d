"""Regret-curve rendering: median across seeds per algorithm, SVG output.

The figure is rendered with matplotlib's SVG backend under a fixed hashsalt
and without timestamp metadata, so the same inputs always produce the same
bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .errors import InvalidConfig, SchemaMismatch
from .runner import CSV_HEADER

DEFAULT_BURN_IN = 1000

_COLORS = {"GD": "#808080", "LassoGD": "#1f77b4", "MD": "#d62728", "MDTwice": "#2ca02c"}


def read_trace_csv(path):
    """Parse one trace CSV into (algo, seed, {queries_used: cum_regret_iter}) triples."""
    expected = CSV_HEADER.split(",")
    series = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected:
            raise SchemaMismatch(f"{path}: header {header} != {expected}")
        for row in reader:
            if len(row) != len(expected):
                raise SchemaMismatch(f"{path}: row has {len(row)} fields, expected {len(expected)}")
            algo, seed = row[0], int(row[1])
            series.setdefault((algo, seed), {})[int(row[2])] = float(row[5])
    return [(algo, seed, qmap) for (algo, seed), qmap in series.items()]


def _median_series(per_seed: list[dict], burn_in: int):
    """Median across seeds at query counts present in every seed's series."""
    common = set(per_seed[0])
    for qmap in per_seed[1:]:
        common &= set(qmap)
    qs = sorted(q for q in common if q >= burn_in)
    medians = []
    for q in qs:
        vals = sorted(qmap[q] for qmap in per_seed)
        mid = len(vals) // 2
        medians.append(vals[mid] if len(vals) % 2 else 0.5 * (vals[mid - 1] + vals[mid]))
    return qs, medians


def emit_plot(csv_paths, out_path, burn_in: int = DEFAULT_BURN_IN) -> None:
    """Render median cumulative regret vs queries for each algorithm to SVG.

    Rows below the burn-in query count are dropped; if nothing remains the
    call fails and no file is written.
    """
    if not csv_paths:
        raise InvalidConfig("no CSV files given")
    by_algo: dict[str, dict[int, dict]] = {}
    for path in csv_paths:
        for algo, seed, qmap in read_trace_csv(path):
            by_algo.setdefault(algo, {})[seed] = qmap

    curves = []
    for algo in sorted(by_algo):
        qs, medians = _median_series(list(by_algo[algo].values()), burn_in)
        pts = [(q, v) for q, v in zip(qs, medians) if v > 0.0]  # log axis
        if pts:
            curves.append((algo, pts))
    if not curves:
        raise InvalidConfig(f"no rows at or above burn-in {burn_in}; nothing to plot")

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fonttype none keeps labels as text elements, so the file stays greppable
    with plt.rc_context({"svg.hashsalt": "sparsezo", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        try:
            for algo, pts in curves:
                ax.plot([p[0] for p in pts], [p[1] for p in pts],
                        label=algo, color=_COLORS.get(algo), linewidth=1.6)
            ax.set_yscale("log")
            ax.set_xlabel("queries")
            ax.set_ylabel("cumulative regret")
            ax.legend()
            fig.tight_layout()
            out = Path(out_path)
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
