import numpy as np
import pytest

from minphase.operators import (
    ExpSingularDescriptor,
    MobiusDescriptor,
    RationalDescriptor,
    apply,
    identity_map,
    synthesize,
)
from minphase.identify import ProbeResponsePair, identify_halfplane
from minphase.signals import TimeGrid, from_callable, rho0, rho1, sigma0, sigma1


@pytest.fixture(scope="session")
def grid():
    return TimeGrid(1.0 / 256.0, 256 * 40 + 1)


@pytest.fixture(scope="session")
def probes(grid):
    return {
        "sigma0": sigma0(grid),
        "sigma1": sigma1(grid),
        "rho0": rho0(grid),
        "rho1": rho1(grid),
    }


@pytest.fixture(scope="session")
def test_signals(grid):
    return {
        "exp2t": from_callable(grid, lambda t: np.exp(-2 * t)),
        "t_exp_t": from_callable(grid, lambda t: t * np.exp(-t)),
        "exp_t_sin_t": from_callable(grid, lambda t: np.exp(-t) * np.sin(t)),
    }


def family_descriptors():
    psis = [
        ("psi_one", RationalDescriptor("disk", [1.0], [1.0])),
        ("psi_zero_half", RationalDescriptor("disk", [1.0, -0.5], [1.0])),
        ("psi_delay_third",
         ExpSingularDescriptor("disk", 0.5)
         * RationalDescriptor("disk", [1.0, -1.0 / 3.0], [1.0])),
    ]
    phis = [
        ("phi_id", identity_map("disk")),
        ("phi_half", MobiusDescriptor("disk", [0.5, 0.0, 0.0, 1.0])),
        ("phi_mobius_third",
         MobiusDescriptor("disk", [1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0])),
    ]
    return psis, phis


@pytest.fixture(scope="session")
def operator_family():
    psis, phis = family_descriptors()
    return {f"{pn}__{fn}": synthesize(p, f) for pn, p in psis for fn, f in phis}


@pytest.fixture(scope="session")
def identified_family(operator_family, probes):
    """Sigma-probe responses and identification for every family member."""
    out = {}
    for name, truth in operator_family.items():
        pair = ProbeResponsePair(
            "sigma", apply(truth, probes["sigma0"]), apply(truth, probes["sigma1"]))
        out[name] = (truth, identify_halfplane(pair))
    return out
