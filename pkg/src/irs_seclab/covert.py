"""Covert transmission against a radiometer warden.

Covers exact signal nulling at the warden, the covertness-constrained outage
minimization over power, amplitudes and phases, and the warden's detection
error when the IRS phases are drawn at random.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import optimize, special, stats

from . import kernels
from .channel import ChannelSet, Position, Scenario, sample_channel_set
from .detector import covertness_table, detection_error_energy, expected_detection_error
from .errors import FeasibilityError, InvalidArgumentError, annotate
from .irs import IrsConfig, TWO_PI, wrap_phase
from .results import ResultTable
from .seeding import run_trials, trial_rng

log = logging.getLogger(__name__)

BRUTE_FORCE_MAX_ELEMENTS = 4
# candidate budget above which "auto" switches to coordinate descent
BRUTE_FORCE_MAX_CANDIDATES = 20_000_000


@dataclass(frozen=True)
class CovertnessParams:
    epsilon: float
    blocklength: int = 100

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidArgumentError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if int(self.blocklength) != self.blocklength or self.blocklength < 1:
            raise InvalidArgumentError(f"blocklength must be a positive integer, got {self.blocklength}")

    @property
    def threshold(self) -> float:
        """Smallest admissible average detection error, 1 - epsilon."""
        return 1.0 - self.epsilon


@dataclass(frozen=True)
class CovertDesign:
    power: float
    config: IrsConfig
    outage_prob: float
    covertness_value: float


def _require_willie(channels: ChannelSet):
    if channels.h_aw is None or channels.h_iw is None:
        raise InvalidArgumentError("warden links are missing from the channel set")


def perfect_covertness_achievable(channels: ChannelSet):
    """Whether some amplitudes in [0, 1] cancel the warden's received signal exactly.

    True iff the largest reflected magnitude reaches the direct-link magnitude.
    Works on batched channel sets too.
    """
    _require_willie(channels)
    reach = np.sum(np.abs(channels.h_ai) * np.abs(channels.h_iw), axis=-1)
    out = reach >= np.abs(channels.h_aw)
    return bool(out) if np.ndim(out) == 0 else out


def nulling_config(channels: ChannelSet) -> IrsConfig:
    """Amplitudes and phases that null the warden's effective channel.

    Every cascade term is turned against the direct link and all amplitudes
    are scaled by the same factor ``|h_aw| / sum |h_ai h_iw|``.
    """
    _require_willie(channels)
    casc = channels.cascade("w")
    n = casc.size
    direct = complex(channels.h_aw)
    reach = float(np.sum(np.abs(casc)))
    if abs(direct) == 0.0:
        return IrsConfig.off(n)
    if reach < abs(direct):
        raise FeasibilityError("reflected paths are too weak to cancel the direct warden link",
                               best_value=reach / abs(direct))
    theta = wrap_phase(math.pi + np.angle(direct) - np.angle(casc))
    beta = np.full(n, min(1.0, abs(direct) / reach))
    return IrsConfig(beta, theta)


def perfect_covertness_curve(scenario: Scenario, irs_positions: Sequence[Position], n_values,
                             trials: int, root_seed: int, threads=None) -> ResultTable:
    """Fraction of trials in which exact nulling is possible, per IRS position and N.

    For each trial one realization with ``max(n_values)`` elements is drawn
    and smaller N use its leading elements, so every curve is monotone in N
    trial by trial.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    if scenario.willie is None:
        raise InvalidArgumentError("perfect-covertness experiments need a Willie position")
    n_values = [int(v) for v in n_values]
    if any(v < 0 for v in n_values):
        raise InvalidArgumentError("element counts must be >= 0")
    n_max = max(n_values)
    rows = []
    for p_idx, pos in enumerate(irs_positions):
        sc = scenario.replace(irs=pos, n_elements=n_max)

        def one(i):
            ch = sample_channel_set(sc, trial_rng(root_seed, p_idx, i))
            reach = np.concatenate(([0.0], np.cumsum(np.abs(ch.h_ai) * np.abs(ch.h_iw))))
            return reach[n_values] >= abs(ch.h_aw)

        hits = np.array(run_trials(one, trials, threads))
        for j, n in enumerate(n_values):
            prob = float(np.count_nonzero(hits[:, j])) / trials
            rows.append([p_idx, n, prob])
            log.info("IRS at (%g, %g), N=%d: P(perfect covertness) = %.4f", pos.x, pos.y, n, prob)
    meta = {"root_seed": root_seed, "trials": trials,
            "irs_positions": "; ".join(f"{i}=({p.x:g},{p.y:g})" for i, p in enumerate(irs_positions))}
    return ResultTable(columns=["position", "N", "probability"], rows=rows, metadata=meta)


# ---------------------------------------------------------------------------
# covert outage minimization


@dataclass(frozen=True)
class CovertGrids:
    """Search grids: amplitude levels, number of phase points, power levels (W)."""

    beta_levels: tuple = tuple(np.round(np.linspace(0.0, 1.0, 11), 12))
    theta_points: int = 32
    power_levels: tuple = tuple(np.logspace(-6, -2, 16))

    def __post_init__(self):
        b = np.asarray(self.beta_levels, dtype=float)
        p = np.asarray(self.power_levels, dtype=float)
        if b.size < 1 or np.any((b < 0) | (b > 1)) or np.any(np.diff(b) <= 0):
            raise InvalidArgumentError("beta_levels must be strictly increasing values in [0, 1]")
        if self.theta_points < 1:
            raise InvalidArgumentError("theta_points must be >= 1")
        if p.size < 1 or np.any(p < 0) or np.any(np.diff(p) <= 0):
            raise InvalidArgumentError("power_levels must be strictly increasing and >= 0")
        object.__setattr__(self, "beta_levels", tuple(float(v) for v in b))
        object.__setattr__(self, "power_levels", tuple(float(v) for v in p))

    @property
    def theta_values(self) -> np.ndarray:
        return TWO_PI * np.arange(self.theta_points) / self.theta_points


@dataclass(frozen=True)
class _Moments:
    """Gaussian moments of Bob's and Willie's effective channels, per element."""

    mb0: complex
    mb_el: np.ndarray
    vb0: float
    vb_el: np.ndarray
    mw0: complex
    mw_el: np.ndarray
    vw0: float
    vw_el: np.ndarray


def _moments(scenario: Scenario, csi: ChannelSet, residual_rho: float) -> _Moments:
    """Bob: true = LoS + rho*(estimated scatter) + fresh scatter of variance (1-rho^2);
    the Alice-IRS hop is taken as known. Willie: only the LoS parts are known."""
    if not scenario.has_link("aw"):
        raise InvalidArgumentError("covert design needs a Willie position")
    r2 = 1.0 - residual_rho**2
    los_ab, los_ib = scenario.los_coefficient("ab"), scenario.los_coefficient("ib")
    hai = np.asarray(csi.h_ai, dtype=complex)
    mb0 = los_ab + residual_rho * (complex(csi.h_ab) - los_ab)
    mb_el = hai * (los_ib + residual_rho * (np.asarray(csi.h_ib) - los_ib))
    g2 = np.abs(hai) ** 2
    return _Moments(
        mb0=complex(mb0), mb_el=np.ascontiguousarray(mb_el),
        vb0=r2 * scenario.scatter_variance("ab"), vb_el=r2 * g2 * scenario.scatter_variance("ib"),
        mw0=complex(scenario.los_coefficient("aw")),
        mw_el=np.ascontiguousarray(hai * scenario.los_coefficient("iw")),
        vw0=scenario.scatter_variance("aw"), vw_el=np.ascontiguousarray(g2 * scenario.scatter_variance("iw")),
    )


def outage_probability(mean, variance, power, noise, rate):
    """Pr(log2(1 + P|h|^2/sigma^2) < R) for h ~ CN(mean, variance)."""
    return float(outage_array(abs(mean), variance, power, noise, rate))


def outage_array(mag, variance, power, noise, rate):
    """Vectorized ``outage_probability`` taking the mean magnitude ``|m|``."""
    mag, variance, power = np.broadcast_arrays(np.asarray(mag, float), np.asarray(variance, float),
                                               np.asarray(power, float))
    out = np.ones(mag.shape)
    if rate <= 0:
        return np.zeros(mag.shape)
    live = power > 0
    t = np.where(live, (2.0**rate - 1.0) * noise / np.where(live, power, 1.0), 0.0)
    pos = live & (variance > 0)
    v = np.where(pos, variance, 1.0)
    out[pos] = stats.ncx2.cdf(2.0 * t[pos] / v[pos], 2, 2.0 * mag[pos] ** 2 / v[pos])
    det = live & ~(variance > 0)
    out[det] = (mag[det] ** 2 < t[det]).astype(float)
    return out


def _config_from(beta, theta_idx, theta_points) -> IrsConfig:
    beta = np.asarray(beta, dtype=float)
    theta = TWO_PI * np.asarray(theta_idx, dtype=float) / theta_points
    # phases of switched-off elements carry no meaning; pin them to zero
    theta = np.where(beta > 0, theta, 0.0)
    return IrsConfig(beta, theta)


def _digits(index, n, base):
    out = np.zeros(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[i] = index % base
        index //= base
    return out


def _willie_value(mom: _Moments, beta, theta, snr_scale, blocklength):
    u = beta * np.exp(1j * theta)
    mw = mom.mw0 + np.sum(u * mom.mw_el)
    vw = mom.vw0 + np.sum(beta**2 * mom.vw_el)
    return float(expected_detection_error(snr_scale, mw, vw, blocklength))


def _bob_variance(mom: _Moments, beta):
    return mom.vb0 + float(np.sum(np.asarray(beta) ** 2 * mom.vb_el))


def _select(best_mag, best_idx, combos, vb, powers, noise, rate):
    """Apply the total order (outage, P, beta lex, theta lex) to the kernel groups.

    Returns ``(combo, power index, theta index, outage)`` or ``None``.
    """
    n_combo, n_p = best_mag.shape
    # a candidate feasible up to level k may also run at any lower level, so at
    # level kk the contenders are the groups k >= kk: take a suffix maximum,
    # preferring the smaller phase index on equal magnitudes
    mag = np.full((n_combo, n_p), -1.0)
    idx = np.full((n_combo, n_p), -1, dtype=np.int64)
    run_mag = np.full(n_combo, -1.0)
    run_idx = np.full(n_combo, -1, dtype=np.int64)
    for k in range(n_p - 1, -1, -1):
        m, i = best_mag[:, k], best_idx[:, k]
        take = (m > run_mag) | ((m == run_mag) & (m >= 0) & (i < run_idx))
        run_mag = np.where(take, m, run_mag)
        run_idx = np.where(take, i, run_idx)
        mag[:, k], idx[:, k] = run_mag, run_idx
    c_ix, k_ix = np.nonzero(mag >= 0)
    if c_ix.size == 0:
        return None
    out = outage_array(mag[c_ix, k_ix], vb[c_ix], powers[k_ix], noise, rate)
    order = np.lexsort((idx[c_ix, k_ix], c_ix, k_ix, out))
    j = order[0]
    return float(out[j]), int(k_ix[j]), int(c_ix[j]), int(idx[c_ix[j], k_ix[j]])


def _bruteforce(mom: _Moments, combos, grids: CovertGrids, covert_list, scenario, rate):
    powers = np.asarray(grids.power_levels, dtype=float)
    noise = scenario.noise_power
    table = covertness_table(int(covert_list[0].blocklength))
    theta = grids.theta_values
    thresholds = np.array([c.threshold for c in covert_list])
    best_mag, best_idx, best_g0 = kernels.covert_bruteforce(
        np.ascontiguousarray(combos), mom.mb0, mom.mb_el, mom.mw0, mom.mw_el, mom.vw0, mom.vw_el,
        np.cos(theta), np.sin(theta), powers / noise, thresholds, table.values, table.x0, table.dx)
    vb = np.array([_bob_variance(mom, b) for b in combos])
    picks = []
    for e in range(len(covert_list)):
        picks.append(_select(best_mag[e], best_idx[e], combos, vb, powers, noise, rate))
    return picks, best_g0


def _finish(pick, combos, mom, grids, covert, scenario, rate, best_g0) -> CovertDesign:
    if pick is None:
        raise FeasibilityError(
            f"no candidate meets the covertness level {covert.threshold:.6g}; "
            f"best average detection error at the lowest power is {best_g0:.6g}", best_value=best_g0)
    out, kp, c, t_idx = pick
    n = combos.shape[1]
    beta = combos[c]
    cfg = _config_from(beta, _digits(t_idx, n, grids.theta_points), grids.theta_points)
    power = grids.power_levels[kp]
    g = _willie_value(mom, cfg.beta, cfg.theta, power / scenario.noise_power, covert.blocklength)
    return CovertDesign(power=power, config=cfg, outage_prob=out, covertness_value=g)


def _coordinate_descent(mom: _Moments, grids: CovertGrids, covert: CovertnessParams, scenario, rate,
                        max_sweeps=20):
    """Element-wise exhaustive updates; each step solves a one-element brute force
    with the remaining elements folded into the direct terms."""
    n = mom.mb_el.size
    levels = np.asarray(grids.beta_levels)
    theta_vals = grids.theta_values
    beta = np.zeros(n)
    t_idx = np.zeros(n, dtype=np.int64)
    current = None
    best_g0 = -1.0
    for _ in range(max_sweeps):
        changed = False
        for i in range(n):
            others = np.arange(n) != i
            u = beta[others] * np.exp(1j * theta_vals[t_idx[others]])
            sub = _Moments(
                mb0=mom.mb0 + np.sum(u * mom.mb_el[others]), mb_el=mom.mb_el[i:i + 1],
                vb0=mom.vb0 + np.sum(beta[others] ** 2 * mom.vb_el[others]), vb_el=mom.vb_el[i:i + 1],
                mw0=mom.mw0 + np.sum(u * mom.mw_el[others]), mw_el=mom.mw_el[i:i + 1],
                vw0=mom.vw0 + np.sum(beta[others] ** 2 * mom.vw_el[others]), vw_el=mom.vw_el[i:i + 1],
            )
            combos = levels[:, None]
            (pick,), g0 = _bruteforce(sub, combos, grids, [covert], scenario, rate)
            best_g0 = max(best_g0, g0)
            if pick is None:
                continue
            out, kp, c, ti = pick
            key = (out, kp)
            if current is None or key < current:
                current = key
                beta[i] = levels[c]
                t_idx[i] = ti if levels[c] > 0 else 0
                changed = True
        if not changed:
            break
    if current is None:
        raise FeasibilityError(
            f"no candidate meets the covertness level {covert.threshold:.6g}", best_value=best_g0)
    cfg = _config_from(beta, t_idx, grids.theta_points)
    power = grids.power_levels[current[1]]
    g = _willie_value(mom, cfg.beta, cfg.theta, power / scenario.noise_power, covert.blocklength)
    return CovertDesign(power=power, config=cfg, outage_prob=current[0], covertness_value=g)


def _beta_combos(levels, n):
    return np.array(list(itertools.product(levels, repeat=n)), dtype=float).reshape(-1, n)


def _candidate_count(grids: CovertGrids, n):
    nb = len(grids.beta_levels)
    nz = sum(1 for b in grids.beta_levels if b > 0)
    return ((nb - nz) + nz * grids.theta_points) ** n


def covert_outage_optimize_many(scenario: Scenario, csi: ChannelSet, covert_list, target_rate: float,
                                grids: Optional[CovertGrids] = None, method: str = "auto",
                                residual_rho: float = 0.95):
    """``covert_outage_optimize`` for several covertness levels in one sweep.

    All levels must share the blocklength. Returns one design per level, in
    order; an infeasible level raises ``FeasibilityError``.
    """
    grids = grids or CovertGrids()
    covert_list = list(covert_list)
    if not covert_list:
        return []
    if len({c.blocklength for c in covert_list}) != 1:
        raise InvalidArgumentError("all covertness levels must share one blocklength")
    if target_rate < 0:
        raise InvalidArgumentError("target_rate must be >= 0")
    if not 0.0 <= residual_rho <= 1.0:
        raise InvalidArgumentError("residual_rho must lie in [0, 1]")
    if method not in ("auto", "bruteforce", "coordinate"):
        raise InvalidArgumentError(f"unknown method '{method}'")
    mom = _moments(scenario, csi, residual_rho)
    n = mom.mb_el.size
    if method == "auto":
        small = n <= BRUTE_FORCE_MAX_ELEMENTS and _candidate_count(grids, n) <= BRUTE_FORCE_MAX_CANDIDATES
        method = "bruteforce" if small else "coordinate"
    if method == "coordinate":
        solve = lambda j, c: _coordinate_descent(mom, grids, c, scenario, target_rate)
    else:
        combos = _beta_combos(grids.beta_levels, n)
        picks, best_g0 = _bruteforce(mom, combos, grids, covert_list, scenario, target_rate)
        solve = lambda j, c: _finish(picks[j], combos, mom, grids, c, scenario, target_rate, best_g0)
    designs = []
    for j, c in enumerate(covert_list):
        try:
            designs.append(solve(j, c))
        except FeasibilityError as exc:
            raise annotate(exc, "epsilon", c.epsilon)
    return designs


def covert_outage_optimize(scenario: Scenario, csi: ChannelSet, covert: CovertnessParams,
                           target_rate: float, grids: Optional[CovertGrids] = None,
                           method: str = "auto", residual_rho: float = 0.95) -> CovertDesign:
    """Minimize Bob's outage at rate ``target_rate`` subject to covertness.

    ``csi`` is the legitimate-link realization Alice designs on; the warden's
    links are known only through their Rician statistics. The search covers
    power, amplitude and phase grids. A candidate is covert when its average
    detection error over the warden's fading is at least ``1 - epsilon``.
    Bob's outage is evaluated over residual fading around ``csi`` with
    correlation ``residual_rho``. Ties go to smaller power, then smaller
    amplitudes, then smaller phase indices (lexicographic).

    ``method`` is ``"bruteforce"``, ``"coordinate"`` or ``"auto"`` (brute force
    for N <= 4 when the candidate count is moderate).
    """
    return covert_outage_optimize_many(scenario, csi, [covert], target_rate, grids, method, residual_rho)[0]


def covert_amplitude_samples(scenario: Scenario, epsilons, trials: int, root_seed: int, target_rate: float,
                             grids: Optional[CovertGrids] = None, blocklength: int = 100,
                             method: str = "auto", residual_rho: float = 0.95, threads=None):
    """Optimal designs over independent legitimate-link realizations.

    Returns ``(beta, power, outage)`` with shapes ``(trials, n_eps, N)``,
    ``(trials, n_eps)`` and ``(trials, n_eps)``.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    covert_list = [CovertnessParams(float(e), blocklength) for e in epsilons]

    def one(i):
        csi = sample_channel_set(scenario, trial_rng(root_seed, i))
        try:
            designs = covert_outage_optimize_many(scenario, csi, covert_list, target_rate, grids,
                                                  method, residual_rho)
        except FeasibilityError as exc:
            exc.args = (f"{exc.args[0]} (trial {i})",) + exc.args[1:]
            raise
        return (np.array([d.config.beta for d in designs]),
                np.array([d.power for d in designs]), np.array([d.outage_prob for d in designs]))

    res = run_trials(one, trials, threads, chunk=8)
    return (np.array([r[0] for r in res]), np.array([r[1] for r in res]), np.array([r[2] for r in res]))


def covert_amplitude_curve(scenario: Scenario, epsilons, trials: int, root_seed: int, target_rate: float,
                           grids: Optional[CovertGrids] = None, blocklength: int = 100,
                           method: str = "auto", residual_rho: float = 0.95, threads=None) -> ResultTable:
    """Average optimal power, outage and per-element amplitudes versus epsilon."""
    beta, power, outage = covert_amplitude_samples(scenario, epsilons, trials, root_seed, target_rate,
                                                   grids, blocklength, method, residual_rho, threads)
    n = scenario.n_elements
    rows = []
    for e, eps in enumerate(epsilons):
        row = [eps, power[:, e].mean(), outage[:, e].mean()] + list(beta[:, e, :].mean(axis=0))
        rows.append(row)
        log.info("epsilon=%g: mean P* %.4g W, outage %.4f, mean beta %.4f",
                 eps, row[1], row[2], beta[:, e, :].mean())
    cols = ["epsilon", "power", "outage"] + [f"beta_{i + 1}" for i in range(n)]
    return ResultTable(columns=cols, rows=rows,
                       metadata={"root_seed": root_seed, "trials": trials, "target_rate": target_rate})


# ---------------------------------------------------------------------------
# random IRS phases as a source of uncertainty at the warden


def mixture_detection_error(snr_samples, blocklength: int) -> float:
    """Minimal P_FA + P_MD of a radiometer facing an equal-weight SNR mixture.

    The likelihood ratio of the mixture against noise only is increasing in
    the measured energy, so one threshold is optimal; it sits where the two
    densities cross, found by a bracketed root search.
    """
    s = np.asarray(snr_samples, dtype=float).reshape(-1)
    if np.any(s < 0) or blocklength < 1:
        raise InvalidArgumentError("SNR samples must be >= 0 and blocklength >= 1")
    L = float(blocklength)
    if not np.any(s > 0):
        return 1.0
    a = s / (1.0 + s)
    b = L * np.log1p(s)
    log_k = math.log(s.size)

    def h(t):
        return special.logsumexp(t * a - b) - log_k

    j = int(np.argmax(a))
    hi = (log_k + b[j]) / a[j] + 1.0
    tau = optimize.brentq(h, 0.0, hi, xtol=1e-12, rtol=1e-14, maxiter=200)
    err = special.gammaincc(L, tau) + np.mean(special.gammainc(L, tau / (1.0 + s)))
    return float(min(1.0, max(0.0, err)))


def random_phase_samples(scenario: Scenario, n_values, covert: CovertnessParams, trials: int,
                         root_seed: int, phase_draws: int = 256, threads=None) -> np.ndarray:
    """Per-trial detection error under uniformly random IRS phases.

    The warden knows every channel coefficient but not the phases, which are
    redrawn for each block; ``phase_draws`` samples stand for that mixture.
    Amplitudes are all one. Returns an array ``(trials, len(n_values))``.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    if scenario.willie is None:
        raise InvalidArgumentError("random-phase experiments need a Willie position")
    n_values = [int(v) for v in n_values]
    full = scenario.replace(n_elements=max(n_values))
    scale = scenario.tx_power / scenario.noise_power
    L = int(covert.blocklength)

    def one(i):
        rng = trial_rng(root_seed, i)
        ch = sample_channel_set(full, rng)
        casc = ch.cascade("w")
        phases = rng.uniform(0.0, TWO_PI, size=(phase_draws, casc.size))
        terms = np.exp(1j * phases) * casc
        out = np.empty(len(n_values))
        for j, n in enumerate(n_values):
            if n == 0 or scale == 0:
                out[j] = detection_error_energy(scale * abs(ch.h_aw) ** 2, L)
                continue
            hw = ch.h_aw + terms[:, :n].sum(axis=1)
            out[j] = mixture_detection_error(scale * np.abs(hw) ** 2, L)
        return out

    return np.array(run_trials(one, trials, threads))


def random_phase_uncertainty_curve(scenario: Scenario, n_values, covert: CovertnessParams, trials: int,
                                   root_seed: int, phase_draws: int = 256, threads=None) -> ResultTable:
    err = random_phase_samples(scenario, n_values, covert, trials, root_seed, phase_draws, threads)
    rows = [[n, err[:, j].mean()] for j, n in enumerate(n_values)]
    return ResultTable(columns=["N", "avg_detection_error"], rows=rows,
                       metadata={"root_seed": root_seed, "trials": trials, "blocklength": covert.blocklength})
