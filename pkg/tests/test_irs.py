import numpy as np
import pytest

from irs_seclab.errors import InvalidArgumentError
from irs_seclab.irs import (
    IrsConfig, effective_channel, max_cascade_magnitude, phase_grid, quantize_phase_values, quantize_phases,
    wrap_phase,
)


def test_surface_off_returns_direct():
    rng = np.random.default_rng(0)
    inc, out = rng.standard_normal(5) + 1j, rng.standard_normal(5) - 1j
    cfg = IrsConfig(np.zeros(5), rng.uniform(0, 2 * np.pi, 5))
    assert effective_channel(0.3 - 0.2j, inc, out, cfg) == 0.3 - 0.2j


def test_single_term():
    cfg = IrsConfig([1.0], [0.0])
    assert effective_channel(0, [0.3 + 0j], [0.5j], cfg) == pytest.approx(0.15j, abs=1e-17)


def test_matches_naive_sum():
    rng = np.random.default_rng(7)
    d = complex(*rng.standard_normal(2))
    inc = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    out = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    cfg = IrsConfig(rng.uniform(0, 1, 4), rng.uniform(0, 2 * np.pi, 4))
    naive = d
    for b, t, a, g in zip(cfg.beta, cfg.theta, inc, out):
        naive += b * complex(np.cos(t), np.sin(t)) * a * g
    assert abs(effective_channel(d, inc, out, cfg) - naive) <= 1e-12 * abs(naive)


def test_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        effective_channel(0, np.ones(3), np.ones(2), IrsConfig.off(3))
    with pytest.raises(InvalidArgumentError):
        max_cascade_magnitude(np.ones(3), np.ones(2))


def test_max_cascade_magnitude():
    assert max_cascade_magnitude([], []) == 0
    assert max_cascade_magnitude([0.3, 0.4j], [0.5, -0.2]) == pytest.approx(0.23)


def test_max_cascade_against_phase_grid():
    rng = np.random.default_rng(3)
    inc = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    out = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    c = inc * out
    grid = np.exp(1j * phase_grid(6))
    # the first term's phase is free, so fixing it loses nothing
    s = c[0] + (c[1] * grid)[:, None] + (c[2] * grid)[None, :]
    best = np.abs(s).max()
    bound = max_cascade_magnitude(inc, out)
    assert best <= bound + 1e-12
    assert best >= bound * np.cos(np.pi / 64)


def test_reflection_bound_holds():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = rng.integers(1, 6)
        inc = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        out = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        d = complex(*rng.standard_normal(2))
        cfg = IrsConfig(rng.uniform(0, 1, n), rng.uniform(0, 2 * np.pi, n))
        assert abs(effective_channel(d, inc, out, cfg) - d) <= max_cascade_magnitude(inc, out) + 1e-12


def test_doubling_small_amplitudes_doubles_reflection():
    rng = np.random.default_rng(5)
    inc = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    out = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    theta = rng.uniform(0, 2 * np.pi, 4)
    beta = rng.uniform(0, 0.5, 4)
    d = 0.7 + 0.1j
    r1 = effective_channel(d, inc, out, IrsConfig(beta, theta)) - d
    r2 = effective_channel(d, inc, out, IrsConfig(2 * beta, theta)) - d
    assert r2 == pytest.approx(2 * r1, rel=1e-12)


def test_config_invariants():
    with pytest.raises(InvalidArgumentError):
        IrsConfig([1.2], [0.0])
    with pytest.raises(InvalidArgumentError):
        IrsConfig([0.5], [2 * np.pi])
    with pytest.raises(InvalidArgumentError):
        IrsConfig([0.5], [0.1], phase_bits=2)
    cfg = IrsConfig([0.5, 1.0], [0.0, np.pi], phase_bits=1)
    assert cfg.phase_bits == 1
    with pytest.raises(ValueError):
        cfg.beta[0] = 0.2


def test_quantize_examples():
    assert quantize_phase_values([0.0], 3)[0] == 0.0
    assert quantize_phase_values([0.9 * np.pi], 1)[0] == pytest.approx(np.pi)
    # exact midpoint goes to the smaller angle
    assert quantize_phase_values([np.pi / 2], 1)[0] == 0.0
    # near 2*pi wraps to zero
    assert quantize_phase_values([2 * np.pi - 0.01], 2)[0] == 0.0


def test_quantize_error_bound():
    theta = np.random.default_rng(6).uniform(0, 2 * np.pi, 100_000)
    q = quantize_phase_values(theta, 3)
    err = np.abs(np.angle(np.exp(1j * (theta - q))))
    assert err.max() <= np.pi / 8 + 1e-12
    assert set(np.round(q / (np.pi / 4)).astype(int)) <= set(range(8))


def test_quantize_config_keeps_beta():
    cfg = IrsConfig([0.3, 0.9], [1.0, 4.0])
    q = quantize_phases(cfg, 2)
    assert np.array_equal(q.beta, cfg.beta)
    assert q.phase_bits == 2
    with pytest.raises(InvalidArgumentError):
        quantize_phases(cfg, 0)


def test_wrap_phase_range():
    w = wrap_phase([-1e-18, -np.pi, 7.0, 2 * np.pi])
    assert np.all((w >= 0) & (w < 2 * np.pi))
