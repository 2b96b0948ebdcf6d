"""Experiment configuration: strict JSON loading and validation.

Unknown keys are rejected everywhere so typos fail loudly instead of
silently running with defaults.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidConfig
from .objectives import ObjectiveSpec

ALGORITHMS = ("GD", "LassoGD", "MD", "MDTwice")
OVERRIDE_KEYS = ("c_lambda", "c_eta", "c_delta", "omega", "n", "delta", "eta")

_OBJECTIVE_KEYS = {"family", "d", "s", "support", "decay_rate", "shift", "seed"}
_TOP_KEYS = {"objective", "sigma", "T", "B", "algorithms", "overrides", "seeds",
             "checkpoints", "output_dir"}


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully validated experiment description.

    One objective (fixed support across all trials), a noise level, a query
    budget T, a feasible l1 radius B, a list of algorithms with optional
    per-algorithm constant overrides, and the trial seeds.
    """

    objective: ObjectiveSpec
    objective_seed: int
    sigma: float
    T: int
    B: float
    algorithms: tuple[str, ...]
    seeds: tuple[int, ...]
    overrides: dict = field(default_factory=dict)
    checkpoints: tuple[int, ...] | None = None
    output_dir: str | None = None

    def __post_init__(self):
        if self.T < 1:
            raise InvalidConfig(f"T must be positive, got {self.T}")
        if self.B <= 0:
            raise InvalidConfig(f"B must be positive, got {self.B}")
        if self.sigma < 0:
            raise InvalidConfig(f"sigma must be nonnegative, got {self.sigma}")
        if not self.algorithms:
            raise InvalidConfig("algorithms list is empty")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise InvalidConfig(f"unknown algorithm {name!r}, expected one of {ALGORITHMS}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise InvalidConfig("algorithms list contains duplicates")
        if not self.seeds:
            raise InvalidConfig("seeds list is empty")
        for algo, table in self.overrides.items():
            if algo not in self.algorithms:
                raise InvalidConfig(f"overrides for {algo!r} do not match any configured algorithm")
            for key in table:
                if key not in OVERRIDE_KEYS:
                    raise InvalidConfig(f"unknown override {key!r} for {algo}, "
                                        f"expected one of {OVERRIDE_KEYS}")
        if self.checkpoints is not None:
            if any(c < 1 for c in self.checkpoints):
                raise InvalidConfig("checkpoints must be positive query counts")
            if any(c > self.T for c in self.checkpoints):
                raise InvalidConfig("checkpoints must not exceed the budget T")
            if list(self.checkpoints) != sorted(set(self.checkpoints)):
                raise InvalidConfig("checkpoints must be strictly increasing")

    def resolved_checkpoints(self) -> tuple[int, ...]:
        if self.checkpoints is not None:
            return self.checkpoints
        return default_checkpoints(self.T)


def default_checkpoints(t_budget: int, count: int = 30, start: int = 1000) -> tuple[int, ...]:
    """About `count` log-spaced query counts from `start` up to the budget."""
    if t_budget <= start:
        return (t_budget,)
    grid = [int(round(math.exp(v))) for v in
            _linspace(math.log(start), math.log(t_budget), count)]
    grid = sorted({min(max(c, 1), t_budget) for c in grid})
    return tuple(grid)


def _linspace(lo: float, hi: float, count: int):
    if count == 1:
        return [hi]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _expect(obj, key, types, where):
    val = obj[key]
    if not isinstance(val, types) or isinstance(val, bool):
        names = "/".join(t.__name__ for t in (types if isinstance(types, tuple) else (types,)))
        raise InvalidConfig(f"{where}.{key} must be {names}, got {type(val).__name__}")
    return val


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Validate a parsed JSON document into an ExperimentConfig."""
    if not isinstance(raw, dict):
        raise InvalidConfig("config root must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
    for required in ("objective", "sigma", "T", "B", "algorithms", "seeds"):
        if required not in raw:
            raise InvalidConfig(f"missing required config key {required!r}")

    obj_raw = raw["objective"]
    if not isinstance(obj_raw, dict):
        raise InvalidConfig("objective must be a JSON object")
    unknown = set(obj_raw) - _OBJECTIVE_KEYS
    if unknown:
        raise InvalidConfig(f"unknown objective keys: {sorted(unknown)}")
    for required in ("family", "d", "s"):
        if required not in obj_raw:
            raise InvalidConfig(f"missing required objective key {required!r}")
    spec = ObjectiveSpec(
        family=_expect(obj_raw, "family", str, "objective"),
        d=_expect(obj_raw, "d", int, "objective"),
        s=_expect(obj_raw, "s", int, "objective"),
        support=tuple(obj_raw["support"]) if obj_raw.get("support") is not None else None,
        decay_rate=float(_expect(obj_raw, "decay_rate", (int, float), "objective"))
        if "decay_rate" in obj_raw else 1.0,
        shift=tuple(float(v) for v in obj_raw["shift"]) if obj_raw.get("shift") is not None else None,
    )
    objective_seed = int(_expect(obj_raw, "seed", int, "objective")) if "seed" in obj_raw else 0

    algorithms = raw["algorithms"]
    if not isinstance(algorithms, list):
        raise InvalidConfig("algorithms must be a list")
    seeds = raw["seeds"]
    if not isinstance(seeds, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in seeds):
        raise InvalidConfig("seeds must be a list of integers")

    overrides = raw.get("overrides", {})
    if not isinstance(overrides, dict):
        raise InvalidConfig("overrides must be an object keyed by algorithm name")
    clean_overrides = {}
    for algo, table in overrides.items():
        if not isinstance(table, dict):
            raise InvalidConfig(f"overrides.{algo} must be an object")
        clean = {}
        for key, val in table.items():
            if key == "n":
                if not isinstance(val, int) or isinstance(val, bool):
                    raise InvalidConfig(f"overrides.{algo}.n must be an integer")
                clean[key] = val
            else:
                if not isinstance(val, (int, float)) or isinstance(val, bool):
                    raise InvalidConfig(f"overrides.{algo}.{key} must be a number")
                clean[key] = float(val)
        clean_overrides[algo] = clean

    checkpoints = raw.get("checkpoints")
    if checkpoints is not None:
        if not isinstance(checkpoints, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in checkpoints):
            raise InvalidConfig("checkpoints must be a list of integers")
        checkpoints = tuple(checkpoints)

    output_dir = raw.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise InvalidConfig("output_dir must be a string")

    return ExperimentConfig(
        objective=spec,
        objective_seed=objective_seed,
        sigma=float(_expect(raw, "sigma", (int, float), "config")),
        T=_expect(raw, "T", int, "config"),
        B=float(_expect(raw, "B", (int, float), "config")),
        algorithms=tuple(algorithms),
        seeds=tuple(seeds),
        overrides=clean_overrides,
        checkpoints=checkpoints,
        output_dir=output_dir,
    )


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON config file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidConfig(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)
