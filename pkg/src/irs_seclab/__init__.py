"""Simulation and optimization toolkit for IRS-aided secrecy and covert links."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    FeasibilityError,
    InvalidArgumentError,
    UnknownKeyError,
)
