"""Laguerre polynomials and the orthonormal basis of weighted Laguerre
functions underlying the time-to-coefficient isometry.

The n-th basis function is (-1)^n sqrt(2) e^{-t} L_n(2t); expanding a
signal in this basis is the discretization map whose coefficients equal
the circle Fourier coefficients of the signal's disk transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import eigh_tridiagonal

from ._quadrature import smooth_segments
from .errors import DomainError
from .signals import CausalSignal, TimeGrid

__all__ = [
    "MAX_ORDER",
    "LaguerreExpansion",
    "laguerre_poly",
    "basis_function",
    "d_map",
]

MAX_ORDER = 512


@dataclass(frozen=True)
class LaguerreExpansion:
    """Truncated coefficient sequence of a signal in the Laguerre basis."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise DomainError("expansion coefficients must be a finite 1-d array")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def _laguerre_ladder(n_max: int, t: np.ndarray) -> np.ndarray:
    """L_0..L_n at the points t via the three-term recurrence.

    (k+1) L_{k+1}(t) = (2k+1-t) L_k(t) - k L_{k-1}(t)
    """
    out = np.empty((n_max + 1, t.shape[0]))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 - t
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 - t) * out[k] - k * out[k - 1]) / (k + 1)
    return out


def laguerre_poly(n: int, t) -> np.ndarray:
    """Values of the Laguerre polynomial L_n on an array of points."""
    if n < 0:
        raise DomainError("polynomial index must be nonnegative")
    if n > MAX_ORDER:
        raise DomainError(f"order {n} exceeds the supported maximum {MAX_ORDER}")
    t = np.asarray(t, dtype=float)
    return _laguerre_ladder(n, np.atleast_1d(t))[n].reshape(t.shape)


def basis_function(n: int, grid: TimeGrid) -> CausalSignal:
    """The n-th orthonormal basis function (-1)^n sqrt(2) e^{-t} L_n(2t)."""
    t = grid.times()
    vals = (-1.0) ** n * math.sqrt(2.0) * np.exp(-t) * laguerre_poly(n, 2 * t)
    return CausalSignal(grid, vals)


@lru_cache(maxsize=8)
def _gauss_laguerre(m: int):
    """Golub-Welsch nodes/weights for the e^{-x} weight on [0, inf).

    scipy's ready-made rule overflows internally for the orders needed
    here; the tridiagonal Jacobi eigenproblem stays stable at any order.
    """
    diag = 2.0 * np.arange(m) + 1.0
    off = np.arange(1, m, dtype=float)
    nodes, vecs = eigh_tridiagonal(diag, off)
    weights = vecs[0] ** 2  # total weight integral is 1
    return nodes, weights


def d_map(f: CausalSignal, M: int) -> LaguerreExpansion:
    """First M coefficients a_n = <f, basis_n> of the Laguerre expansion.

    Computed in the time domain by Gauss-Laguerre quadrature against a
    cubic-spline resampling of f: the weighted integrands oscillate on a
    scale the plain signal grid cannot integrate accurately at high n,
    while the signal itself is smooth and resamples faithfully.  Nodes
    beyond t_max contribute nothing (the signal model is truncated).
    """
    if M < 1:
        raise DomainError("need at least one coefficient")
    if M > MAX_ORDER:
        raise DomainError(f"M={M} exceeds the supported maximum {MAX_ORDER}")
    nodes, weights = _gauss_laguerre(max(160, min(2 * M + 64, 700)))
    live = nodes <= f.grid.t_max
    x = nodes[live]
    w = weights[live]

    t = f.grid.times()
    segments = smooth_segments(f.values)
    if len(segments) > 1:
        fx = np.zeros_like(x, dtype=complex)
        for a, b, _ in segments:
            hi = t[b + 1] if b + 1 < f.grid.n_samples else np.inf
            sel = (x >= t[a]) & (x < hi)
            if b - a >= 3 and np.any(sel):
                fx[sel] = CubicSpline(t[a : b + 1], f.values[a : b + 1])(x[sel])
            elif np.any(sel):
                fx[sel] = np.interp(x[sel], t[a : b + 1], f.values[a : b + 1].real) \
                    + 1j * np.interp(x[sel], t[a : b + 1], f.values[a : b + 1].imag)
    else:
        fx = CubicSpline(t, f.values)(x)

    ladder = _laguerre_ladder(M - 1, 2 * x)
    signs = (-1.0) ** np.arange(M)
    # a_n = sqrt(2) (-1)^n int f(t) L_n(2t) e^{-t} dt; the e^{-t} weight
    # is the Gauss-Laguerre weight itself
    coeffs = math.sqrt(2.0) * signs * (ladder @ (w * fx))
    return LaguerreExpansion(coeffs)
