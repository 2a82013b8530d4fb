"""Secrecy-rate evaluation and IRS phase optimization for the wiretap channel."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import kernels
from .channel import ChannelSet, Scenario, sample_channel_set
from .errors import InvalidArgumentError, annotate
from .irs import IrsConfig, TWO_PI, alignment_phases, effective_channel, phase_grid, quantize_phase_values
from .results import ResultTable
from .seeding import run_trials, trial_rng

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SecrecyOutcome:
    rate_main: float
    rate_eve: float
    secrecy_rate: float


@dataclass(frozen=True)
class OptimizerSettings:
    """Coordinate-ascent settings.

    ``phase_bits`` restricts phases to a 2**b grid (no refinement then);
    ``beta`` fixes the amplitudes (all ones when ``None``).
    """

    restarts: int = 8
    grid_points: int = 256
    grid_sweeps: int = 1
    tol: float = 1e-6
    max_sweeps: int = 200
    phase_bits: Optional[int] = None
    beta: Optional[tuple] = None

    def __post_init__(self):
        if self.restarts < 0 or self.grid_points < 1 or self.max_sweeps < 1:
            raise InvalidArgumentError("restarts >= 0, grid_points >= 1 and max_sweeps >= 1 required")
        if self.phase_bits is not None and self.phase_bits < 1:
            raise InvalidArgumentError("phase_bits must be >= 1")


def snr(channel, power, noise):
    if not noise > 0:
        raise InvalidArgumentError("noise power must be > 0")
    if power < 0:
        raise InvalidArgumentError("transmit power must be >= 0")
    return power * np.abs(channel) ** 2 / noise


def secrecy_rate(gamma_b, gamma_e):
    """``max(0, log2(1+gamma_b) - log2(1+gamma_e))``."""
    gb = np.asarray(gamma_b, dtype=float)
    ge = np.asarray(gamma_e, dtype=float)
    if np.any(gb < 0) or np.any(ge < 0):
        raise InvalidArgumentError("SNR values must be >= 0")
    out = np.maximum(0.0, np.log2(1.0 + gb) - np.log2(1.0 + ge))
    return float(out) if out.ndim == 0 else out


def evaluate(channels: ChannelSet, scenario: Scenario, config: IrsConfig) -> SecrecyOutcome:
    """Rates achieved by ``config`` on one realization (Eve absent counts as zero SNR)."""
    P, s2 = scenario.tx_power, scenario.noise_power
    hb = effective_channel(channels.h_ab, channels.h_ai, channels.h_ib, config)
    c_b = math.log2(1.0 + snr(hb, P, s2))
    if channels.h_ae is None:
        c_e = 0.0
    else:
        he = effective_channel(channels.h_ae, channels.h_ai, channels.h_ie, config)
        c_e = math.log2(1.0 + snr(he, P, s2))
    return SecrecyOutcome(rate_main=c_b, rate_eve=c_e, secrecy_rate=max(0.0, c_b - c_e))


def main_channel_config(channels: ChannelSet, beta=None) -> IrsConfig:
    """Phases co-phasing every reflected term with the direct Alice-Bob link."""
    theta = alignment_phases(channels.h_ab, channels.cascade("b"))
    return IrsConfig.from_phases(theta, beta)


def main_channel_rate(channels: ChannelSet, scenario: Scenario, beta=None) -> float:
    """Main-channel rate with phases chosen for Bob alone, ignoring secrecy."""
    cfg = main_channel_config(channels, beta)
    hb = effective_channel(channels.h_ab, channels.h_ai, channels.h_ib, cfg)
    return math.log2(1.0 + snr(hb, scenario.tx_power, scenario.noise_power))


def optimize_phases_secrecy(channels: ChannelSet, scenario: Scenario,
                            options: Optional[OptimizerSettings] = None,
                            rng: Optional[np.random.Generator] = None, extra_starts=None):
    """Maximize the secrecy rate over IRS phases with amplitudes held fixed.

    Element-wise coordinate ascent. On the first ``grid_sweeps`` sweeps each
    element is scanned over a uniform phase grid; every update also tries the
    exact maximizer of the element's one-dimensional subproblem (a ratio of
    two sinusoids), so later sweeps need no grid. With ``phase_bits`` only the
    2**b grid is searched. Starts are the all-zero phases, Bob-aligned
    phases, any ``extra_starts`` rows and ``options.restarts`` random phase
    vectors; the best end point wins.

    Returns ``(IrsConfig, SecrecyOutcome)``.
    """
    opts = options or OptimizerSettings()
    rng = rng if rng is not None else np.random.default_rng(0)
    n = channels.n_elements
    bits = opts.phase_bits
    if n == 0:
        cfg = IrsConfig.off(0) if bits is None else IrsConfig(np.zeros(0), np.zeros(0), bits)
        return cfg, evaluate(channels, scenario, cfg)
    beta = np.ones(n) if opts.beta is None else np.broadcast_to(np.asarray(opts.beta, float), (n,)).copy()
    if np.any((beta < 0) | (beta > 1)):
        raise InvalidArgumentError("amplitudes must lie in [0, 1]")

    cb = channels.cascade("b")
    aligned = alignment_phases(channels.h_ab, cb)
    if channels.h_ae is None and bits is None:
        cfg = IrsConfig.from_phases(aligned, beta)
        return cfg, evaluate(channels, scenario, cfg)

    g = scenario.tx_power / scenario.noise_power
    if channels.h_ae is None:
        de, ce, ge = 0j, np.zeros(n, complex), 0.0
    else:
        de, ce, ge = complex(channels.h_ae), channels.cascade("e"), g

    if bits is None:
        grid = TWO_PI * np.arange(opts.grid_points) / opts.grid_points
        starts = [np.zeros(n), aligned, rng.uniform(0.0, TWO_PI, size=(opts.restarts, n))]
    else:
        grid = phase_grid(bits)
        starts = [np.zeros(n), quantize_phase_values(aligned, bits),
                  grid[rng.integers(0, grid.size, size=(opts.restarts, n))]]
    if extra_starts is not None:
        extra = np.atleast_2d(np.asarray(extra_starts, dtype=float))
        if extra.shape[1] != n:
            raise InvalidArgumentError(f"extra starts have {extra.shape[1]} phases, expected {n}")
        starts.insert(2, extra if bits is None else quantize_phase_values(extra, bits))
    init = np.vstack([np.atleast_2d(s) for s in starts])

    theta, _ = kernels.secrecy_ascent(
        complex(channels.h_ab), de, np.ascontiguousarray(cb), np.ascontiguousarray(ce), beta,
        g, ge, np.cos(grid), np.sin(grid), grid, bits is None, init, opts.tol, opts.max_sweeps,
        opts.grid_sweeps)
    if bits is not None:
        theta = quantize_phase_values(theta, bits)
    cfg = IrsConfig.from_phases(theta, beta, phase_bits=bits)
    return cfg, evaluate(channels, scenario, cfg)


def secrecy_curve_samples(scenario: Scenario, n_values, trials: int, root_seed: int,
                          options: Optional[OptimizerSettings] = None, threads=None):
    """Per-trial optimized secrecy rates and main-channel rates.

    One realization per trial is drawn with ``max(n_values)`` elements; each
    N uses its first N elements, so the N sweep shares its fading draws.
    Returns two arrays of shape ``(trials, len(n_values))``.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    n_values = [int(v) for v in n_values]
    if any(v < 0 for v in n_values):
        raise InvalidArgumentError("element counts must be >= 0")
    if scenario.eve is None:
        raise InvalidArgumentError("secrecy experiments need an Eve position")
    opts = options or OptimizerSettings()
    full = scenario.replace(n_elements=max(n_values))
    beta = opts.beta

    def one(i):
        rng = trial_rng(root_seed, i)
        ch = sample_channel_set(full, rng)
        rs = np.empty(len(n_values))
        rm = np.empty(len(n_values))
        for j, n in enumerate(n_values):
            try:
                sub = ch.truncate(n)
                b = None if beta is None else np.broadcast_to(np.asarray(beta, float), (n,))
                _, out = optimize_phases_secrecy(sub, scenario, opts, rng)
                rs[j] = out.secrecy_rate
                rm[j] = main_channel_rate(sub, scenario, b)
            except Exception as exc:
                raise annotate(exc, "N", n)
        return rs, rm

    res = run_trials(one, trials, threads)
    return np.array([r[0] for r in res]), np.array([r[1] for r in res])


def avg_secrecy_curve(scenario: Scenario, n_values, trials: int, root_seed: int,
                      options: Optional[OptimizerSettings] = None, threads=None) -> ResultTable:
    rs, rm = secrecy_curve_samples(scenario, n_values, trials, root_seed, options, threads)
    rows = []
    for j, n in enumerate(n_values):
        rows.append([n, rs[:, j].mean(), rm[:, j].mean()])
        log.info("N=%d: avg secrecy %.4f, avg main %.4f", n, rows[-1][1], rows[-1][2])
    return ResultTable(columns=["N", "avg_secrecy_rate", "avg_main_rate"], rows=rows,
                       metadata={"root_seed": root_seed, "trials": trials})


def phase_resolution_samples(scenario: Scenario, bits_values, trials: int, root_seed: int,
                             options: Optional[OptimizerSettings] = None, threads=None) -> np.ndarray:
    """Optimized secrecy rates per trial for several phase-shifter resolutions.

    ``bits_values`` lists resolutions in increasing order, ``None`` meaning
    continuous phases. The grids are nested, so each resolution also starts
    from the solution found at the previous one; the optimized rate then never
    drops as the resolution grows. Returns an array ``(trials, len(bits_values))``.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    if scenario.eve is None:
        raise InvalidArgumentError("secrecy experiments need an Eve position")
    finite = [b for b in bits_values if b is not None]
    if finite != sorted(finite) or (None in bits_values and bits_values[-1] is not None):
        raise InvalidArgumentError("resolutions must increase, with continuous phases last")
    base = options or OptimizerSettings()

    def one(i):
        rng = trial_rng(root_seed, i)
        ch = sample_channel_set(scenario, rng)
        out = np.empty(len(bits_values))
        prev = None
        for j, b in enumerate(bits_values):
            opts = replace(base, phase_bits=b)
            cfg, res = optimize_phases_secrecy(ch, scenario, opts, rng, extra_starts=prev)
            prev = cfg.theta
            out[j] = res.secrecy_rate
        return out

    return np.array(run_trials(one, trials, threads))
