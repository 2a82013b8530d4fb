"""Rician-faded, path-loss-scaled channel synthesis over a 2-D geometry.

Every link coefficient is ``sqrt(path_loss(d)) * g`` where ``g`` is a unit
mean-square Rician coefficient whose line-of-sight phase is fixed by the link
distance. All IRS elements sit at the surface centre and fade independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError

DIRECT_LINKS = ("ab", "ae", "aw")
IRS_LINKS = ("ai", "ib", "ie", "iw")
LINKS = DIRECT_LINKS + IRS_LINKS
_NODE = {"a": "alice", "b": "bob", "e": "eve", "w": "willie", "i": "irs"}


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidArgumentError(f"position must be finite, got ({self.x}, {self.y})")

    def distance(self, other: "Position") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class PathLossParams:
    exponent_direct: float = 3.5
    exponent_irs: float = 2.2
    ref_gain_db: float = -30.0

    def __post_init__(self):
        if not math.isfinite(self.ref_gain_db):
            raise InvalidArgumentError("ref_gain_db must be finite")
        if self.exponent_direct <= 0 or self.exponent_irs <= 0:
            raise InvalidArgumentError("path-loss exponents must be positive")


@dataclass(frozen=True)
class RicianParams:
    k_factor_db: float = 0.0

    @property
    def k_linear(self) -> float:
        return 10.0 ** (self.k_factor_db / 10.0)

    @property
    def los_fraction(self) -> float:
        """Share of the mean-square gain carried by the LoS term, K/(K+1)."""
        k = self.k_linear
        return 1.0 if math.isinf(k) else k / (k + 1.0)

    @property
    def scatter_fraction(self) -> float:
        k = self.k_linear
        return 0.0 if math.isinf(k) else 1.0 / (k + 1.0)


@dataclass(frozen=True)
class Scenario:
    """Node geometry plus propagation and power settings.

    Powers are in watts; ``wavelength`` (m) only sets the LoS phase of each link.
    """

    alice: Position
    bob: Position
    irs: Position
    eve: Optional[Position] = None
    willie: Optional[Position] = None
    n_elements: int = 0
    rician: RicianParams = field(default_factory=RicianParams)
    path_loss: PathLossParams = field(default_factory=PathLossParams)
    tx_power: float = 1.0
    noise_power: float = 1e-12
    wavelength: float = 0.1

    def __post_init__(self):
        if self.n_elements < 0:
            raise InvalidArgumentError("n_elements must be >= 0")
        if self.tx_power < 0:
            raise InvalidArgumentError("tx_power must be >= 0")
        if not self.noise_power > 0:
            raise InvalidArgumentError("noise_power must be > 0")
        if not self.wavelength > 0:
            raise InvalidArgumentError("wavelength must be > 0")

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def has_link(self, link: str) -> bool:
        return all(getattr(self, _NODE[c]) is not None for c in link)

    def link_distance(self, link: str) -> float:
        a, b = (getattr(self, _NODE[c]) for c in link)
        if a is None or b is None:
            raise InvalidArgumentError(f"link '{link}' has a missing endpoint")
        return a.distance(b)

    def link_gain(self, link: str) -> float:
        """Large-scale power gain of one link (one hop for IRS links)."""
        pl = self.path_loss
        exponent = pl.exponent_irs if "i" in link else pl.exponent_direct
        return path_loss(self.link_distance(link), exponent, pl.ref_gain_db)

    def los_coefficient(self, link: str) -> complex:
        """Deterministic LoS part of a link coefficient (amplitude included)."""
        d = self.link_distance(link)
        amp = math.sqrt(self.link_gain(link) * self.rician.los_fraction)
        return amp * complex(math.cos(-2 * math.pi * d / self.wavelength),
                             math.sin(-2 * math.pi * d / self.wavelength))

    def scatter_variance(self, link: str) -> float:
        return self.link_gain(link) * self.rician.scatter_fraction


def path_loss(distance, exponent, ref_gain_db):
    """Log-distance power gain ``10**(ref_gain_db/10) * d**(-exponent)``.

    A cascaded IRS link uses the product of its two hop gains.
    """
    d = np.asarray(distance, dtype=float)
    if np.any(~(d > 0)):
        raise InvalidArgumentError(f"distance must be > 0, got {distance}")
    g = 10.0 ** (ref_gain_db / 10.0) * d ** (-float(exponent))
    return float(g) if g.ndim == 0 else g


def standard_complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0, 1) draws of the given shape."""
    if shape is None:
        shape = ()
    elif isinstance(shape, (int, np.integer)):
        shape = (int(shape),)
    else:
        shape = tuple(shape)
    raw = rng.standard_normal(shape + (2,))
    return raw.view(np.complex128)[..., 0] * np.sqrt(0.5)


def sample_small_scale(params: RicianParams, rng: np.random.Generator, size=None, los_phase: float = 0.0):
    """Unit mean-square Rician coefficient(s) with a fixed LoS phase."""
    w = standard_complex_normal(rng, size)
    los = math.sqrt(params.los_fraction) * np.exp(1j * los_phase)
    g = los + math.sqrt(params.scatter_fraction) * w
    return complex(g) if np.ndim(g) == 0 else g


@dataclass(frozen=True)
class ChannelSet:
    """Joint realization of all links.

    Direct links are complex scalars (or arrays of shape ``batch``); IRS links
    are arrays whose last axis runs over the N elements. Links of absent nodes
    are ``None``.
    """

    h_ab: np.ndarray
    h_ai: np.ndarray
    h_ib: np.ndarray
    h_ae: Optional[np.ndarray] = None
    h_aw: Optional[np.ndarray] = None
    h_ie: Optional[np.ndarray] = None
    h_iw: Optional[np.ndarray] = None

    def __post_init__(self):
        n = np.shape(self.h_ai)[-1]
        for name in ("h_ib", "h_ie", "h_iw"):
            v = getattr(self, name)
            if v is not None and np.shape(v)[-1] != n:
                raise InvalidArgumentError(f"{name} has {np.shape(v)[-1]} elements, expected {n}")

    @property
    def n_elements(self) -> int:
        return int(np.shape(self.h_ai)[-1])

    def link(self, name: str):
        return getattr(self, "h_" + name)

    def truncate(self, n: int) -> "ChannelSet":
        """Keep the first ``n`` IRS elements."""
        if n > self.n_elements:
            raise InvalidArgumentError(f"cannot keep {n} of {self.n_elements} elements")
        kw = {}
        for name in IRS_LINKS:
            v = self.link(name)
            kw["h_" + name] = None if v is None else v[..., :n]
        return replace(self, **kw)

    def replace(self, **changes) -> "ChannelSet":
        return replace(self, **changes)

    def cascade(self, receiver: str) -> np.ndarray:
        """Per-element products ``h_ai[n] * h_i<receiver>[n]``."""
        out = self.link("i" + receiver)
        if out is None:
            raise InvalidArgumentError(f"no IRS link towards '{receiver}'")
        return self.h_ai * out


def sample_channel_set(scenario: Scenario, rng: np.random.Generator, size=None) -> ChannelSet:
    """Draw one realization, or ``size`` independent ones stacked on a leading axis.

    Links are drawn in a fixed order (direct links, then IRS hops) so the
    result is a pure function of ``(scenario, rng state)``.
    """
    batch = () if size is None else (int(size),)
    n = scenario.n_elements
    out = {}
    for link in LINKS:
        if not scenario.has_link(link):
            out["h_" + link] = None
            continue
        shape = batch + ((n,) if link in IRS_LINKS else ())
        w = standard_complex_normal(rng, shape)
        h = scenario.los_coefficient(link) + math.sqrt(scenario.scatter_variance(link)) * w
        out["h_" + link] = complex(h) if np.ndim(h) == 0 else h
    if out["h_ab"] is None:
        raise InvalidArgumentError("scenario needs Alice and Bob")
    return ChannelSet(**out)


def los_channel_set(scenario: Scenario) -> ChannelSet:
    """The deterministic LoS parts of every link, broadcast over N elements."""
    n = scenario.n_elements
    out = {}
    for link in LINKS:
        if not scenario.has_link(link):
            out["h_" + link] = None
        elif link in IRS_LINKS:
            out["h_" + link] = np.full(n, scenario.los_coefficient(link))
        else:
            out["h_" + link] = scenario.los_coefficient(link)
    return ChannelSet(**out)
