"""Run configuration: grids, tolerances, and JSON overrides."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .errors import DomainError, SerializationError
from .signals import TimeGrid


@dataclass(frozen=True)
class RunConfig:
    """Grid parameters and tolerances shared by the CLI pipelines.

    Defaults resolve the probe and test signals of this library to a few
    parts in 1e10 and keep a full identification round trip under a
    minute; every field can be overridden from a JSON file whose keys
    must match exactly.
    """

    dt: float = 1.0 / 256.0
    t_max: float = 40.0
    n_circle: int = 8192
    y_max: float = 512.0
    n_freq: int = 16384
    division_floor: float = 1e-10
    self_map_tol: float = 1e-3       # slack on sup|phi| <= 1 (disk route)
    factor_residual_tol: float = 1e-3  # inner-part unimodularity slack
    pattern_tol: float = 1e-3        # delay-pattern match slack in classify
    classify_tau_tol: float | None = None  # default: 2 dt

    def __post_init__(self):
        if self.dt <= 0 or self.t_max <= self.dt:
            raise DomainError("need dt > 0 and t_max > dt")
        if self.n_circle < 8 or self.n_circle % 2:
            raise DomainError("n_circle must be even and >= 8")
        if self.y_max <= 0 or self.n_freq < 16:
            raise DomainError("need y_max > 0 and n_freq >= 16")
        for name in ("division_floor", "self_map_tol",
                     "factor_residual_tol", "pattern_tol"):
            if getattr(self, name) <= 0:
                raise DomainError(f"tolerance {name} must be positive")

    def time_grid(self) -> TimeGrid:
        n = int(round(self.t_max / self.dt)) + 1
        return TimeGrid(self.dt, n)

    def to_json(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_file(path) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SerializationError(f"cannot read config {path}: {exc}") from exc
        return RunConfig.from_dict(data)

    @staticmethod
    def from_dict(data: dict) -> "RunConfig":
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise SerializationError(
                f"unknown config keys: {sorted(unknown)}; known keys: {sorted(known)}"
            )
        return RunConfig(**data)
