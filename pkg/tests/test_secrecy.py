"""Secrecy-rate evaluation and the phase optimizer."""

import numpy as np
import pytest

from irs_seclab.channel import Position, Scenario, sample_channel_set
from irs_seclab.errors import InvalidArgumentError
from irs_seclab.irs import IrsConfig, effective_channel, phase_grid
from irs_seclab.secrecy import (
    OptimizerSettings, avg_secrecy_curve, evaluate, main_channel_rate, optimize_phases_secrecy,
    phase_resolution_samples, secrecy_curve_samples, secrecy_rate, snr,
)

from conftest import random_channels


def test_snr_and_rate_examples():
    assert snr(1e-3, 1.0, 1e-9) == pytest.approx(1e3)
    assert secrecy_rate(15, 3) == pytest.approx(2.0)
    assert secrecy_rate(3, 15) == 0.0
    assert secrecy_rate(0, 0) == 0.0


def test_rate_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        secrecy_rate(-1, 0)
    with pytest.raises(InvalidArgumentError):
        snr(1.0, 1.0, 0.0)


def test_secrecy_rate_vectorizes():
    out = secrecy_rate(np.array([15.0, 3.0]), np.array([3.0, 15.0]))
    assert np.allclose(out, [2.0, 0.0])


def _unit_scenario(n):
    return Scenario(alice=Position(0, 0), bob=Position(1, 0), eve=Position(2, 0), irs=Position(0, 1),
                    n_elements=n, tx_power=1.0, noise_power=0.1)


def test_no_elements_gives_direct_rates():
    rng = np.random.default_rng(1)
    ch = random_channels(rng, 0)
    sc = _unit_scenario(0)
    cfg, out = optimize_phases_secrecy(ch, sc)
    assert cfg.n_elements == 0
    gb, ge = 10 * abs(ch.h_ab) ** 2, 10 * abs(ch.h_ae) ** 2
    assert out.secrecy_rate == pytest.approx(secrecy_rate(gb, ge))


def test_without_eve_aligns_to_bob():
    rng = np.random.default_rng(2)
    ch = random_channels(rng, 4, eve=False)
    sc = _unit_scenario(4)
    cfg, out = optimize_phases_secrecy(ch, sc)
    best = abs(ch.h_ab) + np.sum(np.abs(ch.cascade("b")))
    assert abs(effective_channel(ch.h_ab, ch.h_ai, ch.h_ib, cfg)) == pytest.approx(best, rel=1e-12)
    assert out.rate_eve == 0.0


def test_optimizer_beats_fixed_configs():
    rng = np.random.default_rng(3)
    for _ in range(50):
        ch = random_channels(rng, 3)
        sc = _unit_scenario(3)
        _, out = optimize_phases_secrecy(ch, sc, rng=rng)
        for _ in range(20):
            cfg = IrsConfig.from_phases(rng.uniform(0, 2 * np.pi, 3))
            assert out.secrecy_rate >= evaluate(ch, sc, cfg).secrecy_rate - 1e-12


def test_quantized_output_on_grid():
    rng = np.random.default_rng(4)
    ch = random_channels(rng, 5)
    cfg, _ = optimize_phases_secrecy(ch, _unit_scenario(5), OptimizerSettings(phase_bits=2), rng)
    assert cfg.phase_bits == 2
    assert np.all(np.isin(cfg.theta, phase_grid(2)))


def test_quantized_matches_exhaustive_small():
    rng = np.random.default_rng(5)
    grid = phase_grid(2)
    for _ in range(30):
        ch = random_channels(rng, 3)
        sc = _unit_scenario(3)
        _, out = optimize_phases_secrecy(ch, sc, OptimizerSettings(phase_bits=2), rng)
        best = max(evaluate(ch, sc, IrsConfig(np.ones(3), [a, b, c])).secrecy_rate
                   for a in grid for b in grid for c in grid)
        assert out.secrecy_rate <= best + 1e-12
        assert out.secrecy_rate >= best - 0.05, "quantized ascent far from the exhaustive optimum"


def test_fixed_amplitudes_are_kept():
    rng = np.random.default_rng(6)
    ch = random_channels(rng, 3)
    cfg, _ = optimize_phases_secrecy(ch, _unit_scenario(3), OptimizerSettings(beta=(0.5, 0.0, 1.0)), rng)
    assert np.array_equal(cfg.beta, [0.5, 0.0, 1.0])


def test_extra_start_shape_checked():
    ch = random_channels(np.random.default_rng(7), 3)
    with pytest.raises(InvalidArgumentError):
        optimize_phases_secrecy(ch, _unit_scenario(3), extra_starts=np.zeros((1, 2)))


def test_main_rate_bounds_secrecy(wiretap_scenario):
    rng = np.random.default_rng(8)
    ch = sample_channel_set(wiretap_scenario, rng)
    _, out = optimize_phases_secrecy(ch, wiretap_scenario, rng=rng)
    assert out.secrecy_rate <= main_channel_rate(ch, wiretap_scenario) + 1e-12


def test_curve_shapes_and_determinism(wiretap_scenario):
    opts = OptimizerSettings(restarts=2)
    rs, rm = secrecy_curve_samples(wiretap_scenario, [0, 2, 4], 10, 3, opts, threads=1)
    rs2, rm2 = secrecy_curve_samples(wiretap_scenario, [0, 2, 4], 10, 3, opts, threads=3)
    assert rs.shape == (10, 3)
    assert np.array_equal(rs, rs2) and np.array_equal(rm, rm2)
    assert np.all(rs <= rm + 1e-12)
    table = avg_secrecy_curve(wiretap_scenario, [0, 2, 4], 10, 3, opts, threads=1)
    assert table.columns == ["N", "avg_secrecy_rate", "avg_main_rate"]
    assert np.allclose(table.column("avg_secrecy_rate"), rs.mean(axis=0))


def test_curve_needs_eve(wiretap_scenario):
    with pytest.raises(InvalidArgumentError):
        secrecy_curve_samples(wiretap_scenario.replace(eve=None), [2], 3, 0)


def test_resolution_rates_monotone_per_trial(wiretap_scenario):
    rates = phase_resolution_samples(wiretap_scenario, [1, 2, 3, None], 20, 11, OptimizerSettings(restarts=2))
    assert rates.shape == (20, 4)
    assert np.all(np.diff(rates, axis=1) >= -1e-12)


def test_resolution_order_checked(wiretap_scenario):
    with pytest.raises(InvalidArgumentError):
        phase_resolution_samples(wiretap_scenario, [2, 1], 2, 0)
    with pytest.raises(InvalidArgumentError):
        phase_resolution_samples(wiretap_scenario, [None, 2], 2, 0)


def test_settings_validation():
    with pytest.raises(InvalidArgumentError):
        OptimizerSettings(phase_bits=0)
    with pytest.raises(InvalidArgumentError):
        OptimizerSettings(grid_points=0)
