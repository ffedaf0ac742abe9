import math

import numpy as np
import pytest

from minphase.errors import DomainError
from minphase.identify import (
    ProbeResponsePair,
    cross_validate,
    identify_disk,
    identify_halfplane,
    identify_plain,
)
from minphase.operators import (
    ExpSingularDescriptor,
    MobiusDescriptor,
    RationalDescriptor,
    apply,
    constant,
    identity_map,
    synthesize,
)
from minphase.signals import translate

S2PI = math.sqrt(2 * math.pi)


def test_pair_validation(grid, probes):
    with pytest.raises(DomainError):
        ProbeResponsePair("tau", probes["sigma0"], probes["sigma1"])
    with pytest.raises(DomainError):
        ProbeResponsePair("sigma", probes["sigma0"], probes["sigma1"], "loose")


def test_identity_reconstruction(grid, probes):
    pair = ProbeResponsePair("sigma", probes["sigma0"], probes["sigma1"])
    ident = identify_halfplane(pair)
    y = ident.op.xi.grid.nodes
    w = 1j * y
    assert np.max(np.abs(ident.op.alpha.values - 1 / (S2PI * (1 + w)))) < 1e-8
    assert np.max(np.abs(ident.op.xi.values - w) / (1 + np.abs(w))) < 1e-6
    assert np.max(np.abs(ident.op.kappa_values(w) - 1)) < 1e-4
    assert abs(ident.epsilon) < 1e-9


def test_delay_reconstruction(grid, probes):
    pair = ProbeResponsePair("sigma", translate(probes["sigma0"], 1.0),
                             translate(probes["sigma1"], 1.0))
    ident = identify_halfplane(pair)
    y = ident.op.xi.grid.nodes
    kappa = ident.op.kappa_values(1j * y)
    assert np.max(np.abs(kappa - np.exp(-1j * y))) < 1e-4
    assert abs(ident.epsilon - 1.0) <= grid.dt


def test_disk_identity(grid, probes):
    pair = ProbeResponsePair("rho", probes["rho0"], probes["rho1"])
    ident = identify_disk(pair)
    y = ident.op.xi.grid.nodes
    assert np.max(np.abs(ident.op.xi.values - 1j * y) / (1 + np.abs(y))) < 1e-6
    assert abs(ident.epsilon) < 1e-9


def test_disk_delay(grid, probes):
    pair = ProbeResponsePair("rho", translate(probes["rho0"], 0.5),
                             translate(probes["rho1"], 0.5))
    ident = identify_disk(pair)
    assert abs(ident.epsilon - 0.5) <= grid.dt


def test_rank_one_identification(grid, probes, test_signals):
    truth = synthesize(RationalDescriptor("disk", [1.0], [1.0]),
                       constant("disk", 0.0))
    pair = ProbeResponsePair("rho", apply(truth, probes["rho0"]),
                             apply(truth, probes["rho1"]))
    ident = identify_disk(pair)
    assert ident.diagnostics["rank_one"]
    rep = cross_validate(ident, truth, test_signals)
    assert rep.max_error < 1e-4


def test_plain_mode_flags(grid, probes):
    delayed = ProbeResponsePair("sigma", translate(probes["sigma0"], 1.0),
                                translate(probes["sigma1"], 1.0))
    flagged = identify_plain(delayed)
    assert flagged.diagnostics["plain_delay_violation"]
    assert abs(flagged.epsilon - 1.0) <= grid.dt

    clean = ProbeResponsePair("sigma", probes["sigma0"], probes["sigma1"])
    ok = identify_plain(clean)
    assert not ok.diagnostics["plain_delay_violation"]
    assert ok.epsilon < 1e-3


def test_outer_psi_plain_roundtrip(grid, probes, test_signals):
    truth = synthesize(RationalDescriptor("disk", [1.0, -0.5], [1.0]),
                       identity_map("disk"))
    pair = ProbeResponsePair("sigma", apply(truth, probes["sigma0"]),
                             apply(truth, probes["sigma1"]), "plain")
    ident = identify_plain(pair)
    assert not ident.diagnostics["plain_delay_violation"]
    assert ident.epsilon < 1e-3
    assert cross_validate(ident, truth, test_signals).max_error < 1e-3


def test_cross_validate_negative_control(grid, probes, test_signals):
    # a deliberately different operator must NOT cross-validate
    truth = synthesize(RationalDescriptor("disk", [1.0], [1.0]),
                       identity_map("disk"))
    other = synthesize(RationalDescriptor("disk", [1.0], [1.0]),
                       MobiusDescriptor("disk", [0.5, 0, 0, 1]))
    pair = ProbeResponsePair("sigma", apply(other, probes["sigma0"]),
                             apply(other, probes["sigma1"]))
    ident = identify_halfplane(pair)
    rep = cross_validate(ident, truth, test_signals)
    assert rep.max_error > 0.05


def test_delay_additivity(grid, probes):
    inner = synthesize(
        ExpSingularDescriptor("disk", 0.5)
        * RationalDescriptor("disk", [1.0, -1.0 / 3.0], [1.0]),
        identity_map("disk"))
    pair = ProbeResponsePair(
        "sigma",
        translate(apply(inner, probes["sigma0"]), 0.25),
        translate(apply(inner, probes["sigma1"]), 0.25),
    )
    ident = identify_halfplane(pair)
    assert abs(ident.epsilon - 0.75) <= 2 * grid.dt


def test_identified_operator_survives_json(grid, probes, tmp_path):
    import json

    from minphase.operators import OperatorModel

    pair = ProbeResponsePair("sigma", translate(probes["sigma0"], 0.5),
                             translate(probes["sigma1"], 0.5))
    ident = identify_halfplane(pair)
    path = tmp_path / "op.json"
    with open(path, "w") as fh:
        json.dump(ident.op.to_json(), fh)
    with open(path) as fh:
        op = OperatorModel.from_json(json.load(fh))
    got = apply(op, probes["rho0"])
    want = translate(probes["rho0"], 0.5)
    assert np.linalg.norm(got.values - want.values) / want.norm < 1e-3


def test_reconstructed_xi_matches_synthesized(grid, probes):
    truth = synthesize(RationalDescriptor("disk", [1.0, -0.5], [1.0]),
                       MobiusDescriptor("disk", [0.5, 0, 0, 1]))
    pair = ProbeResponsePair("sigma", apply(truth, probes["sigma0"]),
                             apply(truth, probes["sigma1"]))
    ident = identify_halfplane(pair)
    w = 1j * ident.op.xi.grid.nodes
    assert np.max(np.abs(ident.op.xi.values - truth.xi(w))) < 1e-4


def test_cross_validate_delay_truth(grid, probes, test_signals):
    truth = synthesize(ExpSingularDescriptor("disk", 1.0), identity_map("disk"))
    pair = ProbeResponsePair("sigma", apply(truth, probes["sigma0"]),
                             apply(truth, probes["sigma1"]))
    ident = identify_halfplane(pair)
    rep = cross_validate(ident, truth, {"t_exp_t": test_signals["t_exp_t"]})
    assert rep.per_signal["t_exp_t"] < 1e-3
