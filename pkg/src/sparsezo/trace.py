"""Regret bookkeeping shared by all optimizers.

A RegretTracker hangs off an oracle as its query listener and accumulates two
running sums of true function values: one over every query point and one over
every visited iterate.  Rows are emitted either at fixed query-count
checkpoints or once per completed step, and always once more at finalization
so the last row reflects the algorithm's actual output.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class TraceRow(NamedTuple):
    queries_used: int
    f_iterate: float
    simple_regret: float
    cum_regret_iter: float
    cum_regret_query: float


class RegretTrace:
    """Ordered list of TraceRow records with strictly increasing query counts."""

    def __init__(self, rows: list[TraceRow] | None = None):
        self.rows = rows if rows is not None else []

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def final(self) -> TraceRow | None:
        return self.rows[-1] if self.rows else None


class RegretTracker:
    """Accumulates regret statistics against an objective's exact optimum.

    Args:
        objective: exposes eval_true and optimum_value.
        checkpoints: query counts at which to emit rows.  When None, a row is
            emitted after every completed step instead.
    """

    def __init__(self, objective, checkpoints=None):
        self.objective = objective
        self.f_star = objective.optimum_value().f_star
        if checkpoints is None:
            self.checkpoints = None
        else:
            self.checkpoints = sorted({int(c) for c in checkpoints})
        self._next_cp = 0
        self._oracle = None
        self._sum_query = 0.0
        self._n_query = 0
        self._sum_iter = 0.0
        self._n_iter = 0
        self._f_current = np.nan  # value at the latest iterate
        self._f_report = np.nan  # value at the current would-be output
        self.trace = RegretTrace()

    def attach(self, oracle):
        oracle.listener = self
        self._oracle = oracle
        return self

    # -- event hooks -------------------------------------------------------

    def note_query(self, x):
        """Called by the oracle after each query; emits checkpoint rows."""
        self._sum_query += float(self.objective.eval_true(x))
        self._n_query += 1
        if self.checkpoints is None:
            return
        while self._next_cp < len(self.checkpoints) and self._n_query >= self.checkpoints[self._next_cp]:
            self._next_cp += 1
            self._emit()

    def note_visit(self, x):
        """Registers an iterate about to be measured; feeds the iterate average."""
        f = float(self.objective.eval_true(x))
        self._sum_iter += f
        self._n_iter += 1
        self._f_current = f
        if np.isnan(self._f_report):
            self._f_report = f

    def note_step(self, x, report=None):
        """Registers the iterate produced by a completed step.

        `report` is the point the algorithm would output if stopped now; it
        defaults to the new iterate itself.
        """
        self._f_current = float(self.objective.eval_true(x))
        if report is None:
            self._f_report = self._f_current
        else:
            self._f_report = float(self.objective.eval_true(report))
        if self.checkpoints is None and self._n_query > 0:
            last = self.trace.final
            if last is None or last.queries_used < self._n_query:
                self._emit()

    def finalize(self, report=None):
        """Emit (or refresh) the last row so it reflects the final output."""
        if report is not None:
            self._f_report = float(self.objective.eval_true(report))
        if self._n_query == 0:
            return self.trace
        last = self.trace.final
        if last is not None and last.queries_used == self._n_query:
            self.trace.rows[-1] = self._row()
        else:
            self._emit()
        return self.trace

    # -- row construction --------------------------------------------------

    def _row(self) -> TraceRow:
        cum_iter = self._sum_iter / self._n_iter - self.f_star if self._n_iter else np.nan
        cum_query = self._sum_query / self._n_query - self.f_star
        f_cur = self._f_current if not np.isnan(self._f_current) else np.nan
        simple = self._f_report - self.f_star if not np.isnan(self._f_report) else np.nan
        return TraceRow(self._n_query, f_cur, simple, cum_iter, cum_query)

    def _emit(self):
        self.trace.rows.append(self._row())
