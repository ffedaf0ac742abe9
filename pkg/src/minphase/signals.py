"""Causal finite-energy signals on a uniform time grid.

A signal is a complex-valued function on [0, t_max] sampled at spacing
``dt``; it stands in for an element of L2 of the half line.  Everything
here is immutable and side-effect free, so instances can be shared
freely between threads.

Inner products, norms and partial energies use trapezoidal quadrature
on the grid.  Translation is restricted to integer multiples of ``dt``
so that it is an exact isometry on samples (fractional shifts are
rejected, not interpolated).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridMismatchError, QuantizationError

__all__ = [
    "TimeGrid",
    "CausalSignal",
    "from_callable",
    "inner_product",
    "translate",
    "partial_energy",
    "rho0",
    "rho1",
    "sigma0",
    "sigma1",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling of [0, t_max]: t_k = k*dt, k = 0..n_samples-1."""

    dt: float
    n_samples: int

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DomainError(f"dt must be positive and finite, got {self.dt}")
        if self.n_samples < 2:
            raise DomainError(f"need at least 2 samples, got {self.n_samples}")

    @property
    def t_max(self) -> float:
        return self.dt * (self.n_samples - 1)

    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.dt

    def shift_index(self, tau: float) -> int:
        """Number of samples corresponding to a delay tau.

        Raises QuantizationError unless tau is an integer multiple of dt
        (to within 1e-9 relative).
        """
        if tau < 0:
            raise DomainError(f"delay must be nonnegative, got {tau}")
        ratio = tau / self.dt
        k = round(ratio)
        if abs(ratio - k) > 1e-9 * max(1.0, abs(ratio)):
            raise QuantizationError(
                f"delay {tau} is not an integer multiple of dt={self.dt}; "
                f"nearest grid delay is {k * self.dt}"
            )
        return int(k)


@dataclass(frozen=True)
class CausalSignal:
    """Samples of a causal signal: values[k] ~ f(k*dt)."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1 or vals.shape[0] != self.grid.n_samples:
            raise DomainError(
                f"expected {self.grid.n_samples} samples, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("signal contains NaN or Inf")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def norm_squared(self) -> float:
        return float(np.trapezoid(np.abs(self.values) ** 2, dx=self.grid.dt))

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_squared)

    def __add__(self, other: "CausalSignal") -> "CausalSignal":
        _require_same_grid(self, other)
        return CausalSignal(self.grid, self.values + other.values)

    def __sub__(self, other: "CausalSignal") -> "CausalSignal":
        _require_same_grid(self, other)
        return CausalSignal(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "CausalSignal":
        return CausalSignal(self.grid, self.values * scalar)

    __rmul__ = __mul__


def _require_same_grid(f: CausalSignal, g: CausalSignal) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(
            f"signals live on different grids: {f.grid} vs {g.grid}"
        )


def from_callable(grid: TimeGrid, fn) -> CausalSignal:
    """Sample fn(t) on the grid."""
    return CausalSignal(grid, np.asarray(fn(grid.times()), dtype=complex))


def inner_product(f: CausalSignal, g: CausalSignal) -> complex:
    """Trapezoidal approximation of the L2 pairing int f(t) conj(g(t)) dt."""
    _require_same_grid(f, g)
    return complex(np.trapezoid(f.values * np.conj(g.values), dx=f.grid.dt))


def translate(f: CausalSignal, tau: float) -> CausalSignal:
    """Delay f by tau >= 0: output[k] = f[k - tau/dt], zero before the shift.

    tau must be an integer multiple of dt; content shifted past t_max is
    truncated.
    """
    k = f.grid.shift_index(tau)
    out = np.zeros_like(f.values)
    if k < f.grid.n_samples:
        out[k:] = f.values[: f.grid.n_samples - k]
    return CausalSignal(f.grid, out)


def partial_energy(f: CausalSignal, T: float) -> float:
    """Energy int_0^T |f|^2 dt by cumulative trapezoid.

    T may fall between grid nodes; the cumulative energy is interpolated
    linearly there, which keeps the result nondecreasing in T.
    """
    if T < 0 or T > f.grid.t_max * (1 + 1e-12):
        raise DomainError(f"T={T} outside [0, t_max={f.grid.t_max}]")
    power = np.abs(f.values) ** 2
    cum = np.concatenate(
        [[0.0], np.cumsum((power[1:] + power[:-1]) * (0.5 * f.grid.dt))]
    )
    return float(np.interp(T, f.grid.times(), cum))


# The two canonical probe pairs that determine a preserving operator.
# They satisfy sigma0 + sigma1 = exp(-t), rho0 = sqrt(2)(sigma0 + sigma1)
# and rho1 = sqrt(2)(sigma1 - sigma0) pointwise.

def rho0(grid: TimeGrid) -> CausalSignal:
    """sqrt(2) e^{-t}, the first canonical probe (0th basis function)."""
    return from_callable(grid, lambda t: math.sqrt(2.0) * np.exp(-t))


def rho1(grid: TimeGrid) -> CausalSignal:
    """sqrt(2) e^{-t} (2t - 1), the second canonical probe."""
    return from_callable(grid, lambda t: math.sqrt(2.0) * np.exp(-t) * (2 * t - 1))


def sigma0(grid: TimeGrid) -> CausalSignal:
    """e^{-t} (1 - t)."""
    return from_callable(grid, lambda t: np.exp(-t) * (1 - t))


def sigma1(grid: TimeGrid) -> CausalSignal:
    """e^{-t} t."""
    return from_callable(grid, lambda t: np.exp(-t) * t)
