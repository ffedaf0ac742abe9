"""Engine-level checks against closed-form exponential integrals."""

import numpy as np

from minphase._quadrature import (
    detect_jumps,
    detect_kinks,
    exp_integral,
    exp_integral_stack,
    smooth_segments,
)
from minphase.signals import TimeGrid, sigma0, sigma1, translate

GRID = TimeGrid(1.0 / 256.0, 256 * 40 + 1)
W = np.array([0.0, 1.0, 1 + 1j, 0.5j, 20j, -512j, 3 + 2j])


def test_exp_integral_sigma_probes():
    s0 = sigma0(GRID)
    got = exp_integral(s0.values, GRID.dt, W)
    want = W / (1 + W) ** 2
    assert np.max(np.abs(got - want)) < 1e-11


def test_exp_integral_high_frequency_relative():
    s1 = sigma1(GRID)
    w = 1j * np.linspace(37.0, 512.0, 97)
    got = exp_integral(s1.values, GRID.dt, w)
    want = 1 / (1 + w) ** 2
    assert np.max(np.abs(got - want) / np.abs(want)) < 5e-8


def test_exp_integral_stack_matches_individual():
    s0, s1 = sigma0(GRID), sigma1(GRID)
    stacked = exp_integral_stack([s0.values, s1.values], GRID.dt, W)
    assert np.array_equal(stacked[0], exp_integral(s0.values, GRID.dt, W))
    assert np.array_equal(stacked[1], exp_integral(s1.values, GRID.dt, W))


def test_jump_detection_on_translate():
    shifted = translate(sigma0(GRID), 1.0)
    jumps = detect_jumps(shifted.values)
    assert jumps == [256]
    assert detect_jumps(sigma0(GRID).values) == []


def test_kink_detection_on_translate():
    # sigma1 starts at zero with unit slope: translating makes a kink
    shifted = translate(sigma1(GRID), 1.0)
    assert detect_jumps(shifted.values) == []
    assert 256 in detect_kinks(shifted.values, [])
    assert detect_kinks(sigma1(GRID).values, []) == []


def test_segments_cover_all_intervals():
    for sig in (sigma0(GRID), translate(sigma0(GRID), 1.0),
                translate(sigma1(GRID), 0.5)):
        segs = smooth_segments(sig.values)
        covered = []
        n = sig.values.shape[0]
        for a, b, extend in segs:
            covered.extend(range(a, b))
            if extend and b < n - 1:
                covered.append(b)
        assert sorted(covered) == list(range(n - 1))


def test_translated_signal_transform():
    shifted = translate(sigma0(GRID), 1.0)
    got = exp_integral(shifted.values, GRID.dt, W)
    want = np.exp(-W) * W / (1 + W) ** 2
    assert np.max(np.abs(got - want)) < 1e-11


def test_kinked_signal_transform():
    shifted = translate(sigma1(GRID), 1.0)
    got = exp_integral(shifted.values, GRID.dt, W)
    want = np.exp(-W) / (1 + W) ** 2
    assert np.max(np.abs(got - want)) < 1e-11


def test_strong_damping_no_overflow():
    s0 = sigma0(GRID)
    got = exp_integral(s0.values, GRID.dt, np.array([200.0, 1000.0]))
    want = np.array([200.0, 1000.0]) / (1 + np.array([200.0, 1000.0])) ** 2
    assert np.max(np.abs(got - want) / want) < 1e-6
