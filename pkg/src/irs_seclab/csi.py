"""Imperfect CSI of the IRS links and the effective secrecy throughput."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import IRS_LINKS, ChannelSet, Scenario, sample_channel_set, standard_complex_normal
from .errors import InvalidArgumentError, annotate
from .irs import alignment_phases
from .results import ResultTable
from .secrecy import OptimizerSettings, optimize_phases_secrecy
from .seeding import run_trials, trial_rng

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CsiQuality:
    """Correlation ``rho`` between true and estimated scattered components."""

    rho: float

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise InvalidArgumentError(f"rho must lie in [0, 1], got {self.rho}")


@dataclass(frozen=True)
class ThroughputPoint:
    rho: float
    r_s: float
    p_to: float
    p_so: float
    est: float


def apply_csi_error(channels: ChannelSet, quality: CsiQuality, rng: np.random.Generator,
                    scenario: Scenario) -> ChannelSet:
    """Estimated IRS links under a Gauss-Markov error model.

    For every IRS hop the scattered part ``g = h - LoS`` becomes
    ``rho*g + sqrt(1 - rho^2)*e`` with ``e`` a fresh draw of the same
    distribution. LoS parts and direct links are passed through. Fresh draws
    are taken in the fixed link order, for every present link, so the stream
    use does not depend on ``rho``.
    """
    rho = quality.rho
    if rho == 1.0:
        return channels
    scale = math.sqrt(1.0 - rho * rho)
    kw = {}
    for link in IRS_LINKS:
        h = channels.link(link)
        if h is None:
            continue
        los = scenario.los_coefficient(link)
        e = math.sqrt(scenario.scatter_variance(link)) * standard_complex_normal(rng, np.shape(h))
        kw["h_" + link] = los + rho * (np.asarray(h) - los) + scale * e
    return channels.replace(**kw)


def effective_secrecy_throughput(r_s, p_to, p_so):
    """``r_s * (1 - p_to) * (1 - p_so)``."""
    r, a, b = (np.asarray(v, dtype=float) for v in (r_s, p_to, p_so))
    if np.any(r < 0):
        raise InvalidArgumentError("r_s must be >= 0")
    if np.any((a < 0) | (a > 1)) or np.any((b < 0) | (b > 1)):
        raise InvalidArgumentError("probabilities must lie in [0, 1]")
    out = r * (1.0 - a) * (1.0 - b)
    return float(out) if out.ndim == 0 else out


def mismatched_snr(snr_true, rho):
    """SNR of a receiver combining with an estimate of correlation ``rho``.

    The unknown share of the channel acts as self-interference:
    ``rho^2*g / (1 + (1 - rho^2)*g)``.
    """
    g = np.asarray(snr_true, dtype=float)
    r2 = rho * rho
    return r2 * g / (1.0 + (1.0 - r2) * g)


def _effective(direct, cascade, theta):
    return direct + np.sum(np.exp(1j * theta) * cascade, axis=-1)


def est_samples(scenario: Scenario, rho_values, rate_b: float, rate_s: float, trials: int, root_seed: int,
                eve_csi_public: bool = False, options: Optional[OptimizerSettings] = None, threads=None):
    """Per-trial outage indicators for the fixed-rate secure scheme.

    True channels are keyed by ``(root_seed, trial)`` and shared by every rho;
    estimation errors are keyed by ``(root_seed, rho index, trial)``. Alice
    aligns the IRS to Bob on the estimated legitimate links, or, with
    ``eve_csi_public``, maximizes the estimated secrecy rate using Eve's
    estimated links as well. Returns boolean arrays ``(transmission_outage,
    secrecy_outage, capacity_b)`` of shape ``(trials, len(rho_values))`` (the
    last one real-valued).
    """
    if not 0.0 < rate_s < rate_b:
        raise InvalidArgumentError("need 0 < rate_s < rate_b")
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    if scenario.eve is None:
        raise InvalidArgumentError("throughput experiments need an Eve position")
    qualities = [CsiQuality(float(r)) for r in rho_values]
    g = scenario.tx_power / scenario.noise_power
    redundancy = rate_b - rate_s
    opts = options or OptimizerSettings()

    def one(i):
        true = sample_channel_set(scenario, trial_rng(root_seed, i))
        cb_true, ce_true = true.cascade("b"), true.cascade("e")
        to = np.empty(len(qualities), dtype=bool)
        so = np.empty(len(qualities), dtype=bool)
        cap = np.empty(len(qualities))
        for k, q in enumerate(qualities):
            try:
                rng = trial_rng(root_seed, k, i)
                est = apply_csi_error(true, q, rng, scenario)
                if eve_csi_public:
                    cfg, _ = optimize_phases_secrecy(est, scenario, opts, rng)
                    theta = cfg.theta
                else:
                    theta = alignment_phases(est.h_ab, est.cascade("b"))
                gb = g * abs(_effective(true.h_ab, cb_true, theta)) ** 2
                ge = g * abs(_effective(true.h_ae, ce_true, theta)) ** 2
            except Exception as exc:
                raise annotate(exc, "rho", q.rho)
            cap[k] = math.log2(1.0 + gb)
            to[k] = cap[k] < rate_b
            so[k] = math.log2(1.0 + float(mismatched_snr(ge, q.rho))) > redundancy
        return to, so, cap

    res = run_trials(one, trials, threads)
    return (np.array([r[0] for r in res]), np.array([r[1] for r in res]), np.array([r[2] for r in res]))


def est_vs_rho_curve(scenario: Scenario, rho_values, rate_b: float = 4.0, rate_s: float = 1.0,
                     trials: int = 10_000, root_seed: int = 0, eve_csi_public: bool = False,
                     options: Optional[OptimizerSettings] = None, threads=None) -> ResultTable:
    """Effective secrecy throughput and both outage probabilities versus rho."""
    to, so, _ = est_samples(scenario, rho_values, rate_b, rate_s, trials, root_seed,
                            eve_csi_public, options, threads)
    rows = []
    for k, rho in enumerate(rho_values):
        p_to, p_so = float(to[:, k].mean()), float(so[:, k].mean())
        pt = ThroughputPoint(rho=float(rho), r_s=rate_s, p_to=p_to, p_so=p_so,
                             est=effective_secrecy_throughput(rate_s, p_to, p_so))
        rows.append([pt.rho, pt.r_s, pt.p_to, pt.p_so, pt.est])
        log.info("rho=%.3f: p_to %.4f, p_so %.4f, EST %.4f", pt.rho, p_to, p_so, pt.est)
    return ResultTable(columns=["rho", "r_s", "p_to", "p_so", "est"], rows=rows,
                       metadata={"root_seed": root_seed, "trials": trials, "rate_b": rate_b,
                                 "eve_csi_public": eve_csi_public})


def est_difference_se(to, so, rate_s, j, k):
    """Delta-method standard error of EST[j] - EST[k] from paired per-trial indicators."""
    a = 1.0 - np.asarray(to, dtype=float)
    b = 1.0 - np.asarray(so, dtype=float)
    am, bm = a.mean(axis=0), b.mean(axis=0)
    psi = rate_s * (bm[j] * (a[:, j] - am[j]) + am[j] * (b[:, j] - bm[j])
                    - bm[k] * (a[:, k] - am[k]) - am[k] * (b[:, k] - bm[k]))
    return float(psi.std(ddof=1) / math.sqrt(a.shape[0]))
