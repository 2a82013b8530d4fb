"""IRS configuration and the cascaded effective channel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError

TWO_PI = 2.0 * math.pi


def wrap_phase(theta):
    """Map angles into [0, 2*pi)."""
    t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    return np.where(t >= TWO_PI, 0.0, t)


def phase_grid(bits: int) -> np.ndarray:
    return TWO_PI * np.arange(2**bits) / 2**bits


@dataclass(frozen=True, eq=False)
class IrsConfig:
    """Per-element amplitudes ``beta`` in [0, 1] and phases ``theta`` in [0, 2*pi).

    ``phase_bits`` marks a b-bit phase shifter; phases must then lie on the
    uniform 2**b grid anchored at zero.
    """

    beta: np.ndarray
    theta: np.ndarray
    phase_bits: Optional[int] = None

    def __post_init__(self):
        beta = np.array(self.beta, dtype=float).reshape(-1)
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if beta.shape != theta.shape:
            raise InvalidArgumentError(f"beta has {beta.size} entries, theta has {theta.size}")
        if np.any(~((beta >= 0) & (beta <= 1))):
            raise InvalidArgumentError("amplitudes must lie in [0, 1]")
        if np.any(~((theta >= 0) & (theta < TWO_PI))):
            raise InvalidArgumentError("phases must lie in [0, 2*pi)")
        if self.phase_bits is not None:
            if int(self.phase_bits) < 1:
                raise InvalidArgumentError("phase_bits must be >= 1")
            steps = theta / (TWO_PI / 2**self.phase_bits)
            if np.any(np.abs(steps - np.round(steps)) > 1e-9):
                raise InvalidArgumentError(f"phases are not on the {self.phase_bits}-bit grid")
        beta.setflags(write=False)
        theta.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_phases(cls, theta, beta=None, phase_bits=None) -> "IrsConfig":
        theta = wrap_phase(theta).reshape(-1)
        beta = np.ones_like(theta) if beta is None else np.broadcast_to(np.asarray(beta, float), theta.shape)
        return cls(beta=beta, theta=theta, phase_bits=phase_bits)

    @classmethod
    def off(cls, n: int) -> "IrsConfig":
        return cls(beta=np.zeros(n), theta=np.zeros(n))

    @property
    def n_elements(self) -> int:
        return self.beta.size

    @property
    def coefficients(self) -> np.ndarray:
        """Complex reflection coefficients ``beta * exp(j*theta)``."""
        return self.beta * np.exp(1j * self.theta)

    def __eq__(self, other):
        if not isinstance(other, IrsConfig):
            return NotImplemented
        return (self.phase_bits == other.phase_bits
                and np.array_equal(self.beta, other.beta)
                and np.array_equal(self.theta, other.theta))

    def __repr__(self):
        return f"IrsConfig(beta={self.beta.tolist()}, theta={self.theta.tolist()}, phase_bits={self.phase_bits})"


def _check_lengths(*arrays):
    sizes = {np.shape(a)[-1] for a in arrays}
    if len(sizes) != 1:
        raise InvalidArgumentError(f"length mismatch: {sorted(sizes)}")


def effective_channel(direct, incident, outgoing, config: IrsConfig):
    """``direct + sum_n beta_n exp(j theta_n) incident_n outgoing_n``.

    ``incident`` and ``outgoing`` may carry leading batch axes.
    """
    incident = np.asarray(incident, dtype=complex)
    outgoing = np.asarray(outgoing, dtype=complex)
    _check_lengths(incident, outgoing, config.beta)
    out = direct + np.sum(config.coefficients * incident * outgoing, axis=-1)
    return complex(out) if np.ndim(out) == 0 else out


def max_cascade_magnitude(incident, outgoing):
    """Largest reflected-path magnitude, ``sum_n |incident_n| |outgoing_n|``."""
    incident = np.asarray(incident, dtype=complex)
    outgoing = np.asarray(outgoing, dtype=complex)
    _check_lengths(incident, outgoing)
    out = np.sum(np.abs(incident) * np.abs(outgoing), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def quantize_phase_values(theta, bits: int) -> np.ndarray:
    """Snap angles to the nearest point of the 2**bits grid; ties go to the smaller angle."""
    if int(bits) < 1:
        raise InvalidArgumentError("bits must be >= 1")
    levels = 2**int(bits)
    x = wrap_phase(theta) / (TWO_PI / levels)
    lo = np.floor(x)
    k = np.where(x - lo > 0.5, lo + 1, lo).astype(np.int64) % levels
    return TWO_PI * k / levels


def quantize_phases(config: IrsConfig, bits: int) -> IrsConfig:
    return IrsConfig(beta=config.beta, theta=quantize_phase_values(config.theta, bits), phase_bits=int(bits))


def alignment_phases(reference, cascade) -> np.ndarray:
    """Phases that rotate every cascade term onto the phase of ``reference``."""
    return wrap_phase(np.angle(reference) - np.angle(cascade))
