"""Frozen patterns of rotating barotropic gas flow."""

from ._core import (
    ConfigError,
    IoError,
    NumericalError,
    build_fields,
    config_hash,
    constant_gradient_solution,
    residuals,
    run,
)

__all__ = [
    "ConfigError",
    "IoError",
    "NumericalError",
    "build_fields",
    "config_hash",
    "constant_gradient_solution",
    "residuals",
    "run",
]
