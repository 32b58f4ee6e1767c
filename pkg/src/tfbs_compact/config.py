"""JSON run configuration.

Schema (all keys optional at parse time; each command checks what it needs)::

    {"sigma": 0.1, "r": 0.08, "d": 0.025, "K": 50, "S": 100, "T": 1.0,
     "alpha": 0.75, "time_steps": 50,
     "grid": {"kind": "quadratic", "N": 50, "lambda": 6, "s_star": 50}}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Optional

TOP_KEYS = {"sigma", "r", "d", "K", "S", "T", "alpha", "grid", "time_steps"}
GRID_KEYS = {"kind", "N", "lambda", "s_star"}
GRID_KINDS = {"uniform", "quadratic", "tr", "tavella_randall"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    sigma: Optional[float] = None
    r: Optional[float] = None
    d: Optional[float] = None
    K: Optional[float] = None
    S: Optional[float] = None
    T: Optional[float] = None
    alpha: Optional[float] = None
    time_steps: Optional[int] = None
    grid_kind: Optional[str] = None
    N: Optional[int] = None
    lam: Optional[float] = None
    s_star: Optional[float] = None

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            pretty = ["grid.kind" if n == "grid_kind" else "grid.N" if n == "N" else n for n in missing]
            raise ConfigError(f"missing required key(s): {', '.join(pretty)}")

    def override(self, **values: Any) -> "RunConfig":
        """Copy with every non-None value replaced (command-line flags win)."""
        given = {k: v for k, v in values.items() if v is not None}
        cfg = replace(self, **given)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def positive(name: str) -> None:
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be positive, got {v}")

        for name in ("sigma", "S", "T", "lam"):
            positive(name)
        if self.alpha is not None and not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.K is not None and self.S is not None and not 0 < self.K < self.S:
            raise ConfigError(f"need 0 < K < S, got K={self.K}, S={self.S}")
        if self.time_steps is not None and self.time_steps < 1:
            raise ConfigError(f"time_steps must be >= 1, got {self.time_steps}")
        if self.N is not None and self.N < 2:
            raise ConfigError(f"grid.N must be >= 2, got {self.N}")
        if self.grid_kind is not None and self.grid_kind not in GRID_KINDS:
            raise ConfigError(f"grid.kind must be one of {sorted(GRID_KINDS)}, got {self.grid_kind!r}")


def _number(key: str, value: Any, integer: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    if integer:
        if int(value) != value:
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return int(value)
    return float(value)


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = sorted(set(data) - TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
    values: dict[str, Any] = {}
    for key in ("sigma", "r", "d", "K", "S", "T", "alpha"):
        if key in data:
            values[key] = _number(key, data[key])
    if "time_steps" in data:
        values["time_steps"] = _number("time_steps", data["time_steps"], integer=True)
    grid = data.get("grid")
    if grid is not None:
        if not isinstance(grid, dict):
            raise ConfigError("grid must be a JSON object")
        unknown = sorted(set(grid) - GRID_KEYS)
        if unknown:
            raise ConfigError(f"unknown grid key(s): {', '.join('grid.' + k for k in unknown)}")
        if "kind" in grid:
            if not isinstance(grid["kind"], str):
                raise ConfigError("grid.kind must be a string")
            values["grid_kind"] = grid["kind"]
        if "N" in grid:
            values["N"] = _number("grid.N", grid["N"], integer=True)
        if "lambda" in grid:
            values["lam"] = _number("grid.lambda", grid["lambda"])
        if "s_star" in grid:
            values["s_star"] = _number("grid.s_star", grid["s_star"])
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def load_config(path: Optional[str | Path]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_config(data)

