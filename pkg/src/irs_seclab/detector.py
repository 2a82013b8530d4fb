"""Warden energy detector (radiometer) and its average over Rician fading."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import special, stats

from . import kernels
from .errors import InvalidArgumentError


def optimal_threshold(snr_willie, blocklength):
    """Energy threshold (in noise units) where the two hypothesis densities cross."""
    s = np.asarray(snr_willie, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = blocklength * (1.0 + s) * np.log1p(s) / s
    return np.where(s > 0, t, float(blocklength))


def detection_error_energy(snr_willie, blocklength):
    """Minimal total error P_FA + P_MD of an L-sample radiometer.

    Under H0 the received energy over L samples, in noise units, is
    Gamma(L, 1); under H1 it is Gamma(L, 1 + snr). The error sum is minimal at
    the density crossing, which gives a closed form in regularized incomplete
    gamma functions.
    """
    s = np.asarray(snr_willie, dtype=float)
    L = np.asarray(blocklength)
    if np.any(s < 0) or np.any(L < 1):
        raise InvalidArgumentError("snr must be >= 0 and blocklength >= 1")
    t = optimal_threshold(s, L)
    xi = special.gammaincc(L, t) + special.gammainc(L, t / (1.0 + s))
    xi = np.where(s > 0, np.clip(xi, 0.0, 1.0), 1.0)
    return float(xi) if xi.ndim == 0 else xi


@dataclass(frozen=True)
class CovertnessTable:
    """Average radiometer error over a Rician warden channel.

    ``values[i, j]`` is E[xi(s_mean * X)] where ``log10(s_mean) = x0 + i*dx``
    and X = |sqrt(u) + sqrt(1-u) w|^2, w ~ CN(0, 1), ``u = j / (nu - 1)``. So
    ``s_mean`` is the mean warden SNR and ``u`` the LoS share of it.
    """

    values: np.ndarray
    x0: float
    dx: float
    blocklength: int

    def __call__(self, s_mean, los_share):
        return kernels.table_eval(self.values, self.x0, self.dx, s_mean, los_share)


def _power_cdf(x, u):
    """CDF of X = |sqrt(u) + sqrt(1-u) w|^2 for w ~ CN(0, 1)."""
    if u <= 0.0:
        return -np.expm1(-x)
    if u >= 1.0:
        return (x >= 1.0).astype(float)
    scale = math.sqrt((1.0 - u) / 2.0)
    return stats.rice.cdf(np.sqrt(x) / scale, math.sqrt(u) / scale)


@lru_cache(maxsize=8)
def covertness_table(blocklength: int, x0: float = -6.0, x1: float = 4.0, dx: float = 0.005,
                     n_share: int = 101) -> CovertnessTable:
    """Tabulate the fading-averaged detection error for one blocklength.

    The expectation is a Stieltjes sum of xi against the exact CDF of the
    warden power on a log grid that shares the row step, so the whole table
    is one matrix product.
    """
    L = int(blocklength)
    n_rows = int(round((x1 - x0) / dx)) + 1
    y0, y1 = -14.0, 2.0
    n_y = int(round((y1 - y0) / dx))
    edges = 10.0 ** (y0 + dx * np.arange(n_y + 1))
    shares = np.linspace(0.0, 1.0, n_share)
    # probability mass of each log-interval of X, plus the two tails
    mass = np.empty((n_y + 2, n_share))
    for j, u in enumerate(shares):
        cdf = _power_cdf(edges, u)
        mass[0, j] = cdf[0]
        mass[1:-1, j] = np.diff(cdf)
        mass[-1, j] = 1.0 - cdf[-1]
    # xi at s_mean * (interval midpoint); row r and interval i meet at index r + i
    mids = np.concatenate(([y0 - dx / 2], y0 + dx * (np.arange(n_y) + 0.5), [y1 + dx / 2]))
    base = x0 + mids[0]
    xi = detection_error_energy(10.0 ** (base + dx * np.arange(n_rows + n_y + 1)), L)
    hankel = sliding_window_view(xi, n_y + 2)[:n_rows]
    values = hankel @ mass
    values = np.clip(values, 0.0, 1.0)
    values = np.minimum.accumulate(values, axis=0)
    values[:, -1] = detection_error_energy(10.0 ** (x0 + dx * np.arange(n_rows)), L)
    values = np.minimum.accumulate(values, axis=0)
    return CovertnessTable(values=np.ascontiguousarray(values), x0=x0, dx=dx, blocklength=L)


def expected_detection_error(snr_scale, mean, variance, blocklength):
    """E[xi(snr_scale * |h|^2)] for a warden channel h ~ CN(mean, variance).

    ``snr_scale`` is P / sigma^2. Evaluated through the cached table.
    """
    table = covertness_table(int(blocklength))
    m2 = np.abs(np.asarray(mean)) ** 2
    tot = m2 + np.asarray(variance, dtype=float)
    share = np.where(tot > 0, m2 / np.where(tot > 0, tot, 1.0), 0.0)
    return table(np.asarray(snr_scale, dtype=float) * tot, share)


def expected_detection_error_quad(snr_scale, mean, variance, blocklength):
    """Reference value of ``expected_detection_error`` by adaptive quadrature."""
    from scipy import integrate

    m = abs(mean)
    if variance <= 0:
        return detection_error_energy(snr_scale * m * m, blocklength)
    sig = math.sqrt(variance / 2.0)
    dist = stats.rice(m / sig, scale=sig)
    lo, hi = dist.ppf(1e-12), dist.ppf(1.0 - 1e-12)
    f = lambda r: detection_error_energy(snr_scale * r * r, blocklength) * dist.pdf(r)
    val, _ = integrate.quad(f, lo, hi, limit=400, epsabs=1e-10, epsrel=1e-9)
    return val
