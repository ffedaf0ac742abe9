"""Reconstruction of an unknown operator from its two probe responses.

A minimum-phase-preserving operator is fully determined by its values
on two probes.  In the half-plane picture, with responses to
sigma0 = e^{-t}(1-t) and sigma1 = e^{-t} t,

    alpha = L A sigma0 + L A sigma1,      xi = L A sigma0 / L A sigma1,

and the operator is F -> kappa (F o xi) with kappa = sqrt(2pi)(1+xi)alpha.
In the disk picture, with responses to rho0 = sqrt(2) e^{-t} and
rho1 = sqrt(2) e^{-t}(2t-1),

    psi = H A rho0,      phi = H A rho1 / H A rho0.

Both pipelines produce the same kind of half-plane, boundary-sampled
operator model, applied with the axis-only algorithm.  The delay of
the reconstructed multiplier is extracted through its Cayley image on
the circle, reusing the factorization machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, IdentificationError, OperatorValidityError
from .factorization import factorize
from .operators import (
    BoundarySamplesDescriptor,
    OperatorModel,
    ValidationReport,
    XI_REAL_TOL,
)
from .signals import CausalSignal
from .transforms import (
    BoundaryFunction,
    FrequencyGrid,
    h_transform_at,
    laplace,
    mobius,
)

__all__ = [
    "ProbeResponsePair",
    "IdentifiedOperator",
    "identify_halfplane",
    "identify_disk",
    "identify_plain",
    "cross_validate",
    "CrossValidationReport",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_PI = math.sqrt(math.pi)

DIVISION_FLOOR = 1e-10   # relative clamp on the divisor transform
MAX_FLOORED_FRACTION = 0.01
PLAIN_DELAY_TOL = 1e-3   # epsilon above this flags a non-plain operator
RANK_ONE_TOL = 1e-8


@dataclass(frozen=True)
class ProbeResponsePair:
    """The measured responses (A p0, A p1) for one probe family."""

    probe_set: str            # "sigma" | "rho"
    response0: CausalSignal
    response1: CausalSignal
    mode: str = "translated"  # "translated" | "plain"

    def __post_init__(self):
        if self.probe_set not in ("sigma", "rho"):
            raise DomainError("probe_set must be 'sigma' or 'rho'")
        if self.mode not in ("translated", "plain"):
            raise DomainError("mode must be 'translated' or 'plain'")
        if self.response0.grid != self.response1.grid:
            raise DomainError("probe responses must share a time grid")
        if self.response0.norm == 0.0 or self.response1.norm == 0.0:
            raise DomainError("probe responses must not vanish identically")


@dataclass
class IdentifiedOperator:
    op: OperatorModel
    epsilon: float
    alpha_outer: BoundaryFunction
    diagnostics: dict = field(default_factory=dict)


def _floored_division(num: np.ndarray, den: np.ndarray, y: np.ndarray,
                      what: str, division_floor: float = None) -> np.ndarray:
    """num/den with tiny-denominator nodes interpolated from neighbours."""
    if division_floor is None:
        division_floor = DIVISION_FLOOR
    mag = np.abs(den)
    floor = division_floor * float(np.max(mag))
    weak = mag < floor
    frac = float(weak.mean())
    if frac > MAX_FLOORED_FRACTION:
        raise IdentificationError(
            f"{what}: divisor below floor on {frac:.1%} of nodes; "
            "identification is ill-conditioned for this data"
        )
    ratio = np.where(weak, 0.0, num) / np.where(weak, 1.0, den)
    if np.any(weak):
        good = ~weak
        ratio = ratio.astype(complex)
        ratio[weak] = np.interp(y[weak], y[good], ratio[good].real) \
            + 1j * np.interp(y[weak], y[good], ratio[good].imag)
    return ratio


def _alpha_delay_on_circle(alpha_at, circle_n: int = 8192):
    """Delay and factorization of the disk image sqrt(2) * Phi(alpha).

    alpha_at must evaluate alpha at arbitrary axis points iy; the disk
    image is sampled on the canonical circle grid, where the pure-delay
    inner factor is read off by the factorization module.
    """
    grid = FrequencyGrid.circle_uniform(circle_n)
    z = grid.boundary_points()
    # m maps the circle onto the axis; build the image points exactly
    # imaginary (roundoff in (1-z)/(1+z) otherwise strays off the axis)
    w = 1j * FrequencyGrid.axis_from_circle(grid).nodes
    vals = math.sqrt(2.0) * 2 * _SQRT_PI / (1 + z) * alpha_at(w)
    fact = factorize(BoundaryFunction(grid, vals))
    return fact


def _assemble(alpha_vals: np.ndarray, xi_vals: np.ndarray,
              fgrid: FrequencyGrid, alpha_at, mode: str,
              extra_diagnostics: dict) -> IdentifiedOperator:
    # quadrature/division noise in xi scales with |xi|, so the
    # half-plane test is relative: Re xi >= -tol (1 + |xi|)
    rel_re = xi_vals.real / (1.0 + np.abs(xi_vals))
    min_re = float(np.min(rel_re))
    if min_re < -XI_REAL_TOL:
        raise OperatorValidityError(
            f"reconstructed xi has Re xi / (1+|xi|) = {min_re:.2e} < "
            f"-{XI_REAL_TOL} on the axis; the measured responses do not come "
            "from a preserving operator"
        )
    xi_vals = np.where(xi_vals.real < 0, 1j * xi_vals.imag, xi_vals)
    op = OperatorModel(
        alpha=BoundarySamplesDescriptor("half_plane", fgrid, alpha_vals),
        xi=BoundarySamplesDescriptor("half_plane", fgrid, xi_vals),
    )
    fact = _alpha_delay_on_circle(alpha_at)
    eps = fact.delay_tau if math.isfinite(fact.delay_tau) else 0.0
    alpha_outer = BoundaryFunction(
        fgrid, alpha_vals * np.exp(1j * eps * fgrid.nodes))
    diagnostics = {
        "epsilon": eps,
        "multiplier_inner_modulus_deviation": fact.inner_modulus_deviation,
        "min_re_xi": min_re,
        "mode": mode,
        **extra_diagnostics,
    }
    if mode == "plain":
        diagnostics["plain_delay_violation"] = bool(eps > PLAIN_DELAY_TOL)
    op.validation = ValidationReport(
        self_map_ok=True,
        multiplier_delay_family=fact.inner_modulus_deviation < 1e-3,
        multiplier_delay=eps,
        preserving_verified=False,
        details={"source": "identification"},
    )
    return IdentifiedOperator(op, eps, alpha_outer, diagnostics)


def identify_halfplane(pair: ProbeResponsePair, y_max: float = 512.0,
                       n_freq: int = 16384,
                       division_floor: float = None) -> IdentifiedOperator:
    """Reconstruct the operator from sigma-probe responses.

    alpha and xi are computed nodewise on the axis grid from the two
    response transforms; the multiplier delay epsilon comes from the
    factorization of alpha's disk image.
    """
    if pair.probe_set != "sigma":
        raise DomainError("identify_halfplane expects sigma-probe responses")
    fgrid = FrequencyGrid.axis_uniform(y_max, n_freq)
    w = 1j * fgrid.nodes
    L0 = laplace(pair.response0, w)
    L1 = laplace(pair.response1, w)
    alpha_vals = L0 + L1
    xi_vals = _floored_division(L0, L1, fgrid.nodes, "L(A sigma1)",
                                division_floor)

    def alpha_at(points):
        return laplace(pair.response0, points) + laplace(pair.response1, points)

    return _assemble(alpha_vals, xi_vals, fgrid, alpha_at, pair.mode, {
        "probe_set": "sigma",
    })


def identify_disk(pair: ProbeResponsePair, y_max: float = 512.0,
                  n_freq: int = 16384, circle_n: int = 8192,
                  division_floor: float = None,
                  self_map_tol: float = 1e-3) -> IdentifiedOperator:
    """Reconstruct the operator from rho-probe responses via the disk.

    psi and phi are sampled on the canonical circle grid (for delay
    extraction and self-map validation) and on the circle image of the
    uniform axis grid (to convert to the half-plane form in which the
    operator is applied).
    """
    if pair.probe_set != "rho":
        raise DomainError("identify_disk expects rho-probe responses")
    circle = FrequencyGrid.circle_uniform(circle_n)
    zc = circle.boundary_points()
    H0c = h_transform_at(pair.response0, zc)
    H1c = h_transform_at(pair.response1, zc)
    theta_order = np.argsort(circle.nodes)
    phi_c = np.empty_like(H0c)
    phi_c[theta_order] = _floored_division(
        H1c[theta_order], H0c[theta_order], circle.nodes[theta_order],
        "H(A rho0)", division_floor)
    sup_phi = float(np.max(np.abs(phi_c)))
    rank_one = bool(np.max(np.abs(H1c)) < RANK_ONE_TOL * np.max(np.abs(H0c)))
    if not rank_one and sup_phi > 1.0 + self_map_tol:
        raise OperatorValidityError(
            f"reconstructed phi has sup |phi| = {sup_phi:.6f} > 1 on the circle; "
            "not an analytic self-map of the disk"
        )

    # half-plane data on the circle image of the uniform axis grid
    fgrid = FrequencyGrid.axis_uniform(y_max, n_freq)
    y = fgrid.nodes
    z_axis = mobius(1j * y)
    H0 = h_transform_at(pair.response0, z_axis)
    H1 = h_transform_at(pair.response1, z_axis)
    phi_axis = _floored_division(H1, H0, y, "H(A rho0)", division_floor)
    if not rank_one:
        over = np.abs(phi_axis) > 1.0
        phi_axis = np.where(over, phi_axis / np.abs(phi_axis), phi_axis)
    xi_vals = mobius(phi_axis)
    # alpha = (1/sqrt(2)) Phi^{-1} psi with psi = H A rho0
    alpha_vals = H0 / (math.sqrt(2.0) * _SQRT_PI * (1 + 1j * y))

    def alpha_at(points):
        pts = np.asarray(points, dtype=complex)
        zz = mobius(pts)
        zz = np.where(np.abs(zz) > 1.0, zz / np.abs(zz), zz)
        return h_transform_at(pair.response0, zz) \
            / (math.sqrt(2.0) * _SQRT_PI * (1 + pts))

    ident = _assemble(alpha_vals, xi_vals, fgrid, alpha_at, pair.mode, {
        "probe_set": "rho",
        "sup_abs_phi": sup_phi,
        "rank_one": rank_one,
    })
    return ident


def identify_plain(pair: ProbeResponsePair, y_max: float = 512.0,
                   n_freq: int = 16384,
                   division_floor: float = None) -> IdentifiedOperator:
    """Identification for operators preserving plain minimum phase.

    Same pipeline as the translated case; additionally the multiplier
    must be outer (epsilon = 0), and a nonzero extracted delay is
    reported as evidence that the operator does not preserve the plain
    class.
    """
    plain_pair = ProbeResponsePair(pair.probe_set, pair.response0,
                                   pair.response1, "plain")
    if pair.probe_set == "sigma":
        return identify_halfplane(plain_pair, y_max=y_max, n_freq=n_freq,
                                  division_floor=division_floor)
    return identify_disk(plain_pair, y_max=y_max, n_freq=n_freq,
                         division_floor=division_floor)


@dataclass(frozen=True)
class CrossValidationReport:
    per_signal: dict          # name -> relative L2 application error
    alpha_sup_error: float
    xi_sup_error: float
    max_error: float


def cross_validate(identified: IdentifiedOperator, truth: OperatorModel,
                   test_signals: dict, y_max: float = 512.0,
                   n_freq: int = 16384) -> CrossValidationReport:
    """Compare an identified operator against ground truth.

    Reports per-signal relative L2 errors of the applications and sup
    errors of the boundary data (xi normalized by 1 + |xi| so that the
    unbounded identity-like maps compare sensibly).
    """
    from .operators import apply_many

    names = list(test_signals)
    signals = [test_signals[k] for k in names]
    got_all = apply_many(identified.op, signals, y_max=y_max, n_freq=n_freq)
    want_all = apply_many(truth, signals, y_max=y_max, n_freq=n_freq)
    per_signal = {
        name: float(np.linalg.norm(got.values - want.values)
                    / max(f.norm, 1e-300))
        for name, f, got, want in zip(names, signals, got_all, want_all)
    }
    fgrid = identified.op.xi.grid
    w = 1j * fgrid.nodes
    alpha_err = float(np.max(np.abs(identified.op.alpha.values - truth.alpha(w))))
    xi_true = truth.xi(w)
    xi_err = float(np.max(
        np.abs(identified.op.xi.values - xi_true) / (1.0 + np.abs(xi_true))))
    return CrossValidationReport(
        per_signal=per_signal,
        alpha_sup_error=alpha_err,
        xi_sup_error=xi_err,
        max_error=max(per_signal.values()) if per_signal else 0.0,
    )
